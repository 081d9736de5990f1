#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"
#include "ldpc_audit/decompose.hpp"

namespace ldpc_audit {

/// Shape of the counterexample family for an odd parameter N.
/// Formula functions below take 1-based (row, column) indices.
struct CounterexampleParams {
    std::size_t N = 1;
    std::size_t n = 0;       ///< 11N + 7 columns
    std::size_t m = 0;       ///< n / 2 rows
    std::size_t a_rows = 0;  ///< 4N + 2
    std::size_t a_cols = 0;  ///< 10N + 6
    std::size_t b_rows = 0;  ///< 3(N + 1) / 2
    std::size_t tail_cols = 0;  ///< N + 1

    /// Throws PreconditionError("N must be odd ...") for even or zero N.
    static CounterexampleParams make(std::size_t N);
};

/// Staircase part: first row ones on columns 1..6, then the blocks
/// I_N (x) 1_d for d = 4, 3, 2, 1.
BitMatrix build_Sn(std::size_t N);
/// Diagonal part: sub-diagonal and main diagonal band, three shifted
/// identities and the bottom-right entry.
BitMatrix build_Dn(std::size_t N);
/// S + D; throws PreconditionError if their supports overlap.
BitMatrix build_An(std::size_t N);
/// Closed form of A's entries. Throws IndexError outside the shape.
bool an_formula(std::size_t N, std::size_t i, std::size_t j);
BitMatrix build_Bn(std::size_t N);
/// I_{(N+1)/2} (x) 1_{3x2}.
BitMatrix build_tail(std::size_t N);
/// [[A, 0], [B, tail]].
BitMatrix build_Mn(std::size_t N);
/// Same layout with a caller-supplied bottom-right block.
BitMatrix build_Mn_with_tail(std::size_t N, const BitMatrix& tail);

/// Closed-form leading column of row t of S, valid for t in [2, 4N+1].
std::size_t leading_index(std::size_t N, std::size_t t);
/// Step width d_t = 5 - ceil((t-1)/N) of row t.
std::size_t step_width(std::size_t N, std::size_t t);

/// One iteration t of the in-order finder run checked against the
/// lightest-row and zeroed-prefix properties.
struct LemmaIteration {
    std::size_t t = 0;
    std::size_t chosen_weight = 0;
    std::size_t min_weight = 0;
    std::size_t lightest_row = 0;  ///< lowest-index row attaining min_weight
    bool is_lightest = false;
    std::size_t j_t = 0;
    /// Columns zeroed before iteration t, as a count of the prefix 1..j_t-1.
    bool prefix_ok = false;
};

struct LemmaReport {
    std::size_t N = 0;
    std::vector<LemmaIteration> iterations;
    bool finder_agrees = false;
    bool pass = false;
    std::optional<std::size_t> first_violation;  ///< iteration t
    std::string detail;
};

/// Replays "pick row t at iteration t" for t = 1..4N+1 on `m` with an
/// independent residual simulation and compares with ess_finder in-order.
LemmaReport verify_lemma_valid_choices(const BitMatrix& m, std::size_t N);
LemmaReport verify_lemma_valid_choices(std::size_t N);

struct ClaimCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct TheoremReport {
    CounterexampleParams params;
    std::size_t kernel_dim_M = 0;
    std::size_t kernel_dim_A = 0;
    std::size_t rank_without_rows = 0;  ///< rank after deleting rows 1 and 4N+3
    std::size_t sum_k = 0;
    std::vector<ClaimCheck> checks;
    bool pass = false;
};

/// Finder output, kernel bounds, staircase rank, regularity and the
/// overcount of an in-order decomposition.
TheoremReport verify_theorem(std::size_t N);

}  // namespace ldpc_audit
