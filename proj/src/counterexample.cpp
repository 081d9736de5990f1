#include "ldpc_audit/counterexample.hpp"

#include <algorithm>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"
#include "ldpc_audit/peel.hpp"

namespace ldpc_audit {

CounterexampleParams CounterexampleParams::make(std::size_t N) {
    if (N == 0 || N % 2 == 0)
        throw PreconditionError("N must be odd and at least 1 (got " + std::to_string(N) + ")");
    CounterexampleParams p;
    p.N = N;
    p.n = 11 * N + 7;
    p.m = p.n / 2;
    p.a_rows = 4 * N + 2;
    p.a_cols = 10 * N + 6;
    p.b_rows = 3 * (N + 1) / 2;
    p.tail_cols = N + 1;
    return p;
}

namespace {

/// 1-based setter.
void put(BitMatrix& m, std::size_t i, std::size_t j) { m.set(i - 1, j - 1); }

}  // namespace

BitMatrix build_Sn(std::size_t N) {
    const auto p = CounterexampleParams::make(N);
    BitMatrix s(p.a_rows, p.a_cols);
    for (std::size_t j = 0; j < 6; ++j) s.set(0, j);
    for (std::size_t d = 4; d >= 1; --d) {
        const std::size_t row_off = 1 + (4 - d) * N;
        std::size_t col_off = 6;
        for (std::size_t k = d + 1; k <= 4; ++k) col_off += N * k;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < d; ++c) s.set(row_off + r, col_off + r * d + c);
    }
    return s;
}

BitMatrix build_Dn(std::size_t N) {
    const auto p = CounterexampleParams::make(N);
    BitMatrix d(p.a_rows, p.a_cols);
    const std::size_t last = 4 * N + 2;
    for (std::size_t i = 2; i <= last; ++i) {
        put(d, i, i - 1);
        put(d, i, i);
    }
    for (std::size_t i = N + 2; i <= last; ++i) put(d, i, i + 3 * N + 1);
    for (std::size_t i = 2 * N + 2; i <= last; ++i) put(d, i, i + 5 * N + 2);
    for (std::size_t i = 3 * N + 2; i <= last; ++i) put(d, i, i + 6 * N + 3);
    put(d, last, 10 * N + 6);
    return d;
}

BitMatrix build_An(std::size_t N) {
    const BitMatrix s = build_Sn(N);
    const BitMatrix d = build_Dn(N);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        const auto a = s.row_words(i);
        const auto b = d.row_words(i);
        for (std::size_t w = 0; w < a.size(); ++w)
            if (a[w] & b[w])
                throw PreconditionError("staircase and diagonal parts overlap in row " +
                                        std::to_string(i + 1));
    }
    return s ^ d;
}

bool an_formula(std::size_t N, std::size_t i, std::size_t j) {
    const auto p = CounterexampleParams::make(N);
    if (i < 1 || i > p.a_rows || j < 1 || j > p.a_cols)
        throw IndexError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside the " + std::to_string(p.a_rows) + "x" +
                         std::to_string(p.a_cols) + " shape");
    if (i == 1) return j <= 6;
    const bool band = j == i - 1 || j == i;
    if (i <= N + 1) return band || (j >= 4 * i - 1 && j <= 4 * i + 2);
    const bool third = j == i + 3 * N + 1;
    if (i <= 2 * N + 1) return band || third || (j >= 3 * i + N + 1 && j <= 3 * i + N + 3);
    const bool fourth = j == i + 5 * N + 2;
    if (i <= 3 * N + 1)
        return band || third || fourth || j == 2 * i + 3 * N + 3 || j == 2 * i + 3 * N + 4;
    const bool fifth = j == i + 6 * N + 3;
    if (i <= 4 * N + 1) return band || third || fourth || fifth || j == i + 6 * N + 5;
    return band || third || fourth || fifth || j == 10 * N + 6;
}

BitMatrix build_Bn(std::size_t N) {
    const auto p = CounterexampleParams::make(N);
    BitMatrix b(p.b_rows, p.a_cols);
    put(b, 1, 1);
    put(b, 1, (11 * N + 5) / 2);
    put(b, 1, 7 * N + 4);
    put(b, 1, (17 * N + 11) / 2);
    for (std::size_t i = 2; i <= p.b_rows; ++i) {
        put(b, i, 4 * N + i);
        put(b, i, (11 * N + 3) / 2 + i);
        put(b, i, 7 * N + 3 + i);
        put(b, i, (17 * N + 9) / 2 + i);
    }
    return b;
}

BitMatrix build_tail(std::size_t N) {
    const auto p = CounterexampleParams::make(N);
    return kronecker(BitMatrix::identity(p.tail_cols / 2), BitMatrix::ones(3, 2));
}

BitMatrix build_Mn_with_tail(std::size_t N, const BitMatrix& tail) {
    const auto p = CounterexampleParams::make(N);
    if (tail.rows() != p.b_rows || tail.cols() != p.tail_cols)
        throw DimensionError("tail block must be " + std::to_string(p.b_rows) + "x" +
                             std::to_string(p.tail_cols));
    return assemble_blocks({{{build_An(N), std::nullopt}, {build_Bn(N), tail}}});
}

BitMatrix build_Mn(std::size_t N) { return build_Mn_with_tail(N, build_tail(N)); }

std::size_t step_width(std::size_t N, std::size_t t) {
    const auto p = CounterexampleParams::make(N);
    if (t < 2 || t > p.a_rows - 1)
        throw IndexError("t must lie in [2, " + std::to_string(p.a_rows - 1) + "]");
    return 5 - (t - 1 + N - 1) / N;
}

std::size_t leading_index(std::size_t N, std::size_t t) {
    const auto d = static_cast<long long>(step_width(N, t));
    const auto tt = static_cast<long long>(t);
    const auto nn = static_cast<long long>(N);
    return static_cast<std::size_t>(d * tt + (5 - d) * (4 - d) / 2 * nn + 7 - 2 * d);
}

LemmaReport verify_lemma_valid_choices(const BitMatrix& m, std::size_t N) {
    const auto p = CounterexampleParams::make(N);
    if (m.rows() < p.a_rows) throw DimensionError("matrix has fewer rows than 4N+2");
    LemmaReport rep;
    rep.N = N;

    BitMatrix h = m;
    std::vector<bool> selected(m.rows(), false);
    std::vector<bool> zeroed(m.cols(), false);
    for (std::size_t t = 1; t <= 4 * N + 1; ++t) {
        LemmaIteration it;
        it.t = t;
        it.j_t = t == 1 ? 1 : leading_index(N, t);
        it.chosen_weight = h.row_weight(t - 1);
        it.min_weight = it.chosen_weight;
        it.lightest_row = t;
        for (std::size_t i = 0; i < h.rows(); ++i) {
            if (selected[i]) continue;
            const std::size_t w = h.row_weight(i);
            if (w < it.min_weight || (w == it.min_weight && i + 1 < it.lightest_row)) {
                it.min_weight = w;
                it.lightest_row = i + 1;
            }
        }
        it.is_lightest = it.chosen_weight == it.min_weight;
        it.prefix_ok = true;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (zeroed[j] != (j + 1 < it.j_t)) it.prefix_ok = false;
        if ((!it.is_lightest || !it.prefix_ok) && !rep.first_violation) {
            rep.first_violation = t;
            rep.detail = "iteration " + std::to_string(t) + ": " +
                         (!it.is_lightest ? "row " + std::to_string(t) + " has weight " +
                                                std::to_string(it.chosen_weight) + ", row " +
                                                std::to_string(it.lightest_row) + " has " +
                                                std::to_string(it.min_weight)
                                          : "zeroed columns are not 1.." + std::to_string(it.j_t - 1));
        }
        selected[t - 1] = true;
        for (std::size_t j : h.row_support(t - 1)) {
            zeroed[j] = true;
            for (std::size_t i = 0; i < h.rows(); ++i) h.set(i, j, false);
        }
        rep.iterations.push_back(it);
    }

    try {
        const FinderResult fr = ess_finder(m, ChoicePolicy::in_order());
        rep.finder_agrees = fr.steps.size() >= 4 * N + 1;
        for (std::size_t t = 0; rep.finder_agrees && t < 4 * N + 1; ++t)
            rep.finder_agrees = fr.steps[t].row == t;
        if (!rep.finder_agrees && rep.detail.empty())
            rep.detail = "the in-order finder picks a different row sequence";
    } catch (const PreconditionError& e) {
        rep.finder_agrees = false;
        if (rep.detail.empty()) rep.detail = e.what();
    }
    rep.pass = !rep.first_violation && rep.finder_agrees;
    return rep;
}

LemmaReport verify_lemma_valid_choices(std::size_t N) {
    return verify_lemma_valid_choices(build_Mn(N), N);
}

TheoremReport verify_theorem(std::size_t N) {
    TheoremReport rep;
    rep.params = CounterexampleParams::make(N);
    const auto& p = rep.params;
    const BitMatrix mn = build_Mn(N);
    const BitMatrix an = build_An(N);

    auto add = [&rep](std::string name, bool ok, std::string detail) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const auto rw = row_weights(mn);
    const auto cw = col_weights(mn);
    const bool regular = std::ranges::all_of(rw, [](std::size_t w) { return w == 6; }) &&
                         std::ranges::all_of(cw, [](std::size_t w) { return w == 3; });
    add("regularity", regular, "row weight 6 and column weight 3 on " + std::to_string(p.m) +
                                   "x" + std::to_string(p.n));

    const FinderResult fr = ess_finder(mn, ChoicePolicy::in_order());
    const SubSelection got = sorted(fr.selection);
    const SubSelection want = SubSelection::all(p.a_rows, p.a_cols);
    add("finder-output", got == want,
        "first finder call selects " + std::to_string(got.row_ids.size()) + " rows and " +
            std::to_string(got.col_ids.size()) + " columns; expected " +
            std::to_string(p.a_rows) + " and " + std::to_string(p.a_cols));

    rep.kernel_dim_M = p.n - rank(mn);
    add("kernel-upper-bound", rep.kernel_dim_M <= p.n / 2 + 2,
        "dim Ker(M) = " + std::to_string(rep.kernel_dim_M) + " <= n/2+2 = " +
            std::to_string(p.n / 2 + 2));

    rep.kernel_dim_A = p.a_cols - rank(an);
    add("kernel-lower-bound", rep.kernel_dim_A >= 6 * N + 4,
        "dim Ker(A) = " + std::to_string(rep.kernel_dim_A) + " >= 6N+4 = " +
            std::to_string(6 * N + 4));

    const std::vector<std::size_t> drop{0, p.a_rows};
    const BitMatrix reduced =
        submatrix(mn, SubSelection{complement(drop, p.m), SubSelection::all(mn).col_ids});
    rep.rank_without_rows = rank(reduced);
    add("staircase-rank", rep.rank_without_rows >= p.m - 2,
        "rank without rows 1 and 4N+3 = " + std::to_string(rep.rank_without_rows) +
            " >= m-2 = " + std::to_string(p.m - 2));

    const DecompositionReport dec = decompose(mn);
    rep.sum_k = dec.sum_k;
    add("overcount", dec.sum_k > rep.kernel_dim_M,
        "sum k_i = " + std::to_string(dec.sum_k) + " > dim Ker(M) = " +
            std::to_string(rep.kernel_dim_M));

    rep.pass = std::ranges::all_of(rep.checks, [](const ClaimCheck& c) { return c.pass; });
    return rep;
}

}  // namespace ldpc_audit
