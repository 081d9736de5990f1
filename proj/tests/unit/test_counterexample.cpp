#include <doctest.h>

#include <string>

#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"
#include "oracles.hpp"

using namespace ldpc_audit;

TEST_SUITE("counterexample") {

TEST_CASE("9x18 instance matches the hand-derived rows") {
    const BitMatrix expect = BitMatrix::from_strings({
        "111111000000000000",
        "110000111100000000",
        "011000100011100000",
        "001100010010011000",
        "000110001001010100",
        "000011000100101100",
        "100000010010010011",
        "000001001001001011",
        "000000100100100111",
    });
    CHECK(build_Mn(1) == expect);
}

TEST_CASE("shapes") {
    for (std::size_t N : {1, 3, 5, 7}) {
        const auto p = CounterexampleParams::make(N);
        CHECK(p.n == 11 * N + 7);
        CHECK(p.m == p.n / 2);
        const BitMatrix m = build_Mn(N);
        CHECK(m.rows() == p.m);
        CHECK(m.cols() == p.n);
        CHECK(build_An(N).rows() == p.a_rows);
        CHECK(build_An(N).cols() == p.a_cols);
        CHECK(build_Bn(N).rows() == p.b_rows);
        CHECK(build_tail(N).cols() == p.tail_cols);
    }
}

TEST_CASE("even or zero parameters are rejected") {
    for (std::size_t N : {0, 2, 4}) {
        CHECK_THROWS_AS(CounterexampleParams::make(N), PreconditionError);
        CHECK_THROWS_AS(build_Mn(N), PreconditionError);
    }
    try {
        (void)build_An(2);
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("odd") != std::string::npos);
    }
}

TEST_CASE("regularity") {
    for (std::size_t N : {1, 3, 5, 9}) {
        const BitMatrix m = build_Mn(N);
        for (auto w : row_weights(m)) CHECK(w == 6);
        for (auto w : col_weights(m)) CHECK(w == 3);
    }
}

TEST_CASE("closed form agrees with the block construction") {
    for (std::size_t N : {1, 3, 5, 9}) {
        const BitMatrix a = build_An(N);
        for (std::size_t i = 1; i <= a.rows(); ++i)
            for (std::size_t j = 1; j <= a.cols(); ++j) {
                CAPTURE(N);
                CAPTURE(i);
                CAPTURE(j);
                REQUIRE(an_formula(N, i, j) == a.get(i - 1, j - 1));
            }
        CHECK_THROWS_AS((void)an_formula(N, 0, 1), IndexError);
        CHECK_THROWS_AS((void)an_formula(N, 1, a.cols() + 1), IndexError);
    }
}

TEST_CASE("staircase and diagonal parts are disjoint") {
    for (std::size_t N : {1, 3, 5}) {
        const BitMatrix s = build_Sn(N);
        const BitMatrix d = build_Dn(N);
        std::size_t overlap = 0;
        for (std::size_t i = 0; i < s.rows(); ++i)
            for (std::size_t j = 0; j < s.cols(); ++j) overlap += s.get(i, j) && d.get(i, j);
        CHECK(overlap == 0);
        CHECK((s ^ d) == build_An(N));
    }
}

TEST_CASE("leading columns and step widths match a scan of the staircase") {
    for (std::size_t N : {1, 3, 5, 9}) {
        const BitMatrix s = build_Sn(N);
        for (std::size_t t = 2; t <= 4 * N + 1; ++t) {
            const auto support = s.row_support(t - 1);
            REQUIRE(!support.empty());
            CAPTURE(t);
            CHECK(leading_index(N, t) == support.front() + 1);
            CHECK(step_width(N, t) == support.size());
        }
        CHECK_THROWS_AS((void)leading_index(N, 1), IndexError);
        CHECK_THROWS_AS((void)step_width(N, 4 * N + 2), IndexError);
    }
}

TEST_CASE("valid choices for the in-order finder") {
    for (std::size_t N : {1, 3, 5, 9}) {
        const LemmaReport r = verify_lemma_valid_choices(N);
        CHECK(r.pass);
        CHECK(r.finder_agrees);
        CHECK(r.iterations.size() == 4 * N + 1);
        CHECK(!r.first_violation);
    }
}

TEST_CASE("negative control: a heavier second row breaks the lightest-row property") {
    BitMatrix m = build_Mn(1);
    m.flip(1, 15);
    const LemmaReport r = verify_lemma_valid_choices(m, 1);
    CHECK(!r.pass);
    REQUIRE(r.first_violation);
    CHECK(*r.first_violation == 2);
}

TEST_CASE("finder output, kernel bounds and overcount per member") {
    struct Expect {
        std::size_t N, ker_m, ker_a, sum_k;
    };
    for (const Expect& e : {Expect{1, 9, 10, 10}, Expect{3, 20, 22, 23}, Expect{5, 31, 34, 36}}) {
        const TheoremReport r = verify_theorem(e.N);
        CAPTURE(e.N);
        CHECK(r.pass);
        CHECK(r.kernel_dim_M == e.ker_m);
        CHECK(r.kernel_dim_A == e.ker_a);
        CHECK(r.kernel_dim_A == 6 * e.N + 4);
        CHECK(r.sum_k == e.sum_k);
        CHECK(r.rank_without_rows == r.params.m - 2);
        for (const ClaimCheck& c : r.checks) {
            CAPTURE(c.name);
            CHECK(c.pass);
        }
        // Independent check of the kernel dimension.
        const BitMatrix m = build_Mn(e.N);
        CHECK(r.kernel_dim_M == m.cols() - oracle::rank(m));
    }
}

TEST_CASE("alternative bottom-right block") {
    CHECK(build_Mn_with_tail(3, build_tail(3)) == build_Mn(3));
    CHECK_THROWS_AS(build_Mn_with_tail(3, BitMatrix(2, 2)), DimensionError);
    const BitMatrix alt = build_Mn_with_tail(3, BitMatrix::ones(6, 4));
    CHECK(alt.rows() == build_Mn(3).rows());
}

}  // TEST_SUITE
