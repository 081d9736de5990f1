#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"
#include "ldpc_audit/peel.hpp"

namespace ldpc_audit {

/// A row of some matrix handled during a decomposition: either a row of the
/// input matrix or a synthesized constraint c*.
struct RowRef {
    enum class Origin { input, synthesized };
    Origin origin = Origin::input;
    std::size_t index = 0;  ///< input row index, or id into DecompositionReport::synthesized

    static RowRef input(std::size_t i) { return {Origin::input, i}; }
    static RowRef synthesized(std::size_t id) { return {Origin::synthesized, id}; }
    friend bool operator==(const RowRef&, const RowRef&) = default;
};

/// c* = sum of the dependency rows C', restricted to the previous
/// component's columns. `row` spans all input columns.
struct SynthesizedConstraint {
    std::size_t id = 0;
    std::vector<RowRef> sources;
    std::size_t depth = 0;
    std::size_t step = 0;
    BitVector row;
};

enum class ComponentKind {
    pseudo_tree,   ///< finder output that peels to empty
    ess,           ///< independent (P)ESS candidate
    pess_reduced,  ///< PESS after one dependency row was removed
    unclassified,  ///< loop-exit output that is neither a candidate nor a pseudo-tree
    residual,      ///< what is left when the finder returns the whole remainder
};

std::string to_string(ComponentKind kind);

struct Component {
    /// Input rows (row_ids) and input columns (col_ids) of the component.
    SubSelection selection;
    /// Every row of `matrix`, in order; synthesized rows are listed here and
    /// in `added_constraints` but not in `selection.row_ids`.
    std::vector<RowRef> rows;
    std::vector<std::size_t> added_constraints;
    /// rows x selection.col_ids snapshot.
    BitMatrix matrix;
    ComponentKind kind = ComponentKind::residual;
    std::optional<EssClassification> classification;
    bool pseudo_tree = false;
    /// k_i = columns - rank(matrix).
    std::size_t message_bits = 0;
    /// 0 for components of the input, d for components produced by the d-th
    /// nested rebuild.
    std::size_t depth = 0;
};

std::size_t message_bit_count(const Component& c);

enum class RemovalPolicy { lowest, highest };

/// Picks the constraint removed from a dependency set C'.
/// Throws PreconditionError on an empty set.
std::size_t removal_choice(std::span<const std::size_t> dependency,
                           RemovalPolicy policy = RemovalPolicy::lowest);

struct Dependency {
    std::vector<std::size_t> rows;   ///< C', parent row indices in selection order
    std::size_t left_kernel_dim = 0; ///< how many independent dependencies exist
};

/// Rows of `sel` whose sum vanishes on `sel`'s columns: the support of the
/// first left-kernel vector of M(C, V). Throws PreconditionError when the
/// rows are independent on those columns.
Dependency find_dependency(const BitMatrix& m, const SubSelection& sel);

struct DecomposeEvent {
    enum class Kind {
        pess_found,
        discarded_constraint,
        back_propagated,
        truncated_back_propagation,
        column_weight_relaxed,
    };
    Kind kind = Kind::pess_found;
    std::size_t depth = 0;
    std::size_t step = 0;
    std::string detail;
};

std::string to_string(DecomposeEvent::Kind kind);

struct CallRecord;

/// One finder call inside a DECOMPOSE invocation.
struct StepRecord {
    std::size_t step = 0;  ///< i, 1-based
    std::vector<RowRef> rows;
    std::vector<std::size_t> cols;
    FinderResult::Termination termination = FinderResult::Termination::loop_exit;
    ComponentKind kind = ComponentKind::residual;
    std::vector<RowRef> dependency;
    std::size_t dependency_count = 0;
    std::optional<RowRef> removed;
    std::optional<std::size_t> synthesized;
    /// Present when this step rebuilt the previous component (0 or 1 entry).
    std::vector<CallRecord> rebuilt;
};

/// One (possibly nested) DECOMPOSE invocation.
struct CallRecord {
    std::size_t depth = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<StepRecord> steps;
    std::vector<RowRef> residual_rows;
    std::vector<std::size_t> residual_cols;
};

enum class Verdict { consistent, overcount, undercount };

std::string to_string(Verdict v);

struct DecomposeOptions {
    ChoicePolicy policy = ChoicePolicy::in_order();
    RemovalPolicy removal = RemovalPolicy::lowest;
    std::size_t depth_limit = 32;
    LoopGuard guard = LoopGuard::rows_remain;
    /// Compute k-fold levels of ESS components (exhaustive, up to fold_max_k).
    bool compute_fold = true;
    std::size_t fold_max_k = 2;
};

struct DecompositionReport {
    std::vector<Component> components;
    std::vector<SynthesizedConstraint> synthesized;
    std::size_t sum_k = 0;
    std::size_t kernel_dim = 0;
    ChoicePolicy policy;
    RemovalPolicy removal = RemovalPolicy::lowest;
    Verdict verdict = Verdict::consistent;
    CallRecord recursion_log;
    std::vector<DecomposeEvent> events;
};

/// Runs DECOMPOSE on `m`. Throws PreconditionError when a column has weight
/// above 3 and DepthLimitError when nested rebuilds exceed the limit.
DecompositionReport decompose(const BitMatrix& m, const DecomposeOptions& opts = {});

/// The rows of a component (input rows and synthesized c* rows, in
/// `Component::rows` order) as full-width constraints over the input's columns.
BitMatrix component_constraints(const BitMatrix& input, const DecompositionReport& report,
                                const Component& c);

}  // namespace ldpc_audit
