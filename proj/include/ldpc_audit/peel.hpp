#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"

namespace ldpc_audit {

/// Fixpoint record of STRIP on a selection.
///
/// All indices refer to the parent matrix. A pair (x, c) means column x had
/// residual weight exactly 1 when it was removed and c was its only
/// remaining row. Columns that reached weight 0 are in `dropped_isolated`;
/// rows with no support inside the selection are in `dropped_rows`.
struct PeelTrace {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> dropped_isolated;
    std::vector<std::size_t> dropped_rows;
    SubSelection survivors;

    /// No column survives: the selection is a pseudo-tree.
    [[nodiscard]] bool empty() const { return survivors.col_ids.empty(); }
};

/// Removes weight-1 columns together with their unique row until none is
/// left. Among the removable columns the one earliest in `sel.col_ids` is
/// always taken next, so the trace is deterministic.
PeelTrace strip(const BitMatrix& m, const SubSelection& sel);
PeelTrace strip(const BitMatrix& m);

/// Tie-breaking rule used when several rows are lightest.
struct ChoicePolicy {
    enum class Kind { in_order, lightest_first_index, seeded_random, scripted };

    Kind kind = Kind::in_order;
    std::uint64_t seed = 0;
    /// Row labels to pick, consumed one per choice across all finder calls of
    /// a run; once exhausted the in-order rule applies.
    std::vector<std::size_t> script;

    static ChoicePolicy in_order() { return {}; }
    static ChoicePolicy lightest_first_index() { return {Kind::lightest_first_index, 0, {}}; }
    static ChoicePolicy seeded_random(std::uint64_t seed) { return {Kind::seeded_random, seed, {}}; }
    static ChoicePolicy scripted(std::vector<std::size_t> rows) {
        return {Kind::scripted, 0, std::move(rows)};
    }

    /// "in-order", "lightest-first", "random" or "scripted".
    [[nodiscard]] std::string name() const;
    /// Inverse of name(); throws PreconditionError on an unknown name.
    static ChoicePolicy parse(const std::string& name, std::uint64_t seed = 0);
};

/// One lightest row offered to the chooser.
struct RowCandidate {
    std::size_t local = 0;  ///< row index in the matrix being searched
    std::size_t label = 0;  ///< stable label used for ordering (e.g. the original row id)
    std::size_t leading_col = 0;  ///< first residual column, or SIZE_MAX for an empty row
};

/// Stateful realisation of a ChoicePolicy. One chooser is shared by every
/// finder call of a decomposition so random and scripted runs replay
/// exactly.
class RowChooser {
public:
    explicit RowChooser(ChoicePolicy policy);

    /// Picks one of the candidates (all of minimal residual weight) and
    /// returns its `local` index.
    std::size_t choose(std::span<const RowCandidate> lightest);

    [[nodiscard]] const ChoicePolicy& policy() const { return policy_; }

private:
    ChoicePolicy policy_;
    std::mt19937_64 rng_;
    std::size_t script_pos_ = 0;
};

enum class LoopGuard {
    /// Keep choosing while an unselected row remains.
    rows_remain,
    /// Stop as soon as every row is selected or every column is covered.
    both_remain,
};

struct FinderOptions {
    LoopGuard guard = LoopGuard::rows_remain;
    /// Enforce the maximal column weight 3 input contract.
    bool enforce_max_col_weight = true;
    /// Optional labels for the rows of the searched matrix (default: index).
    std::span<const std::size_t> row_labels = {};
};

/// One iteration of the finder loop.
struct FinderStep {
    std::size_t row = 0;      ///< chosen row
    std::size_t weight = 0;   ///< its residual weight when chosen (= the minimum)
    std::vector<std::size_t> new_cols;  ///< V_c, the columns it zeroed
};

struct FinderResult {
    enum class Termination {
        strip_output,  ///< a row with no new columns made STRIP(M(C, V)) nonempty
        loop_exit,     ///< the loop guard ended the search; M(C, V) is returned
    };

    SubSelection selection;
    Termination termination = Termination::loop_exit;
    std::vector<FinderStep> steps;
};

/// (P)ESS-FINDER on the whole matrix.
FinderResult ess_finder(const BitMatrix& m, RowChooser& chooser, const FinderOptions& opts = {});
FinderResult ess_finder(const BitMatrix& m, const ChoicePolicy& policy = ChoicePolicy::in_order(),
                        const FinderOptions& opts = {});

/// Conditions 1-2 of the (P)ESS definition: at least one column, every
/// selected row has its whole support inside the selected columns, every
/// selected column has weight >= 2 inside the selected rows.
bool is_ess_candidate(const BitMatrix& m, const SubSelection& sel);

enum class EssKind { ess, pess };

struct FoldResult {
    /// Smallest k found, or nullopt when no subset of size <= max_k works.
    std::optional<std::size_t> level;
    std::size_t max_k = 2;
    std::vector<std::size_t> witness;  ///< removed rows (parent indices)
};

struct EssClassification {
    EssKind kind = EssKind::ess;
    std::optional<FoldResult> fold;
};

/// ESS iff the selected rows are independent over all parent columns.
/// Throws PreconditionError when `sel` is not a (P)ESS candidate.
EssClassification classify(const BitMatrix& m, const SubSelection& sel);

bool is_pseudo_tree(const BitMatrix& m, const SubSelection& sel);
bool is_pseudo_tree(const BitMatrix& m);

/// k-fold-constraint level by exhaustive search over row subsets of size
/// 1..max_k, in lexicographic order of their positions in `sel.row_ids`.
EssClassification fold_level(const BitMatrix& m, const SubSelection& sel, std::size_t max_k = 2);

/// Rows whose removal leaves a pseudo-tree: the fold witness when one of
/// size <= max_k exists, otherwise greedily the first surviving row of each
/// successive STRIP until the survivors vanish.
std::vector<std::size_t> pseudo_tree_cut(const BitMatrix& m, const SubSelection& sel,
                                         std::size_t max_k = 2);

}  // namespace ldpc_audit
