#include <doctest.h>

#include "generators.hpp"
#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"
#include "oracles.hpp"

using namespace ldpc_audit;

TEST_SUITE("gf2") {

TEST_CASE("bit matrix basics") {
    BitMatrix m(3, 70);
    CHECK(m.words_per_row() == 2);
    m.set(1, 65);
    CHECK(m.get(1, 65));
    CHECK(m.row_weight(1) == 1);
    m.flip(1, 65);
    CHECK(m.count_ones() == 0);
    CHECK_THROWS_AS((void)m.at(3, 0), IndexError);
    CHECK_THROWS_AS((void)m.at(0, 70), IndexError);

    const auto a = BitMatrix::from_strings({"101", "011"});
    CHECK(a.row_support(0) == std::vector<std::size_t>{0, 2});
    CHECK(a.transpose() == BitMatrix::from_strings({"10", "01", "11"}));
    CHECK((a ^ a).count_ones() == 0);
    CHECK(a.multiply(BitVector{1, 1, 1}) == BitVector{0, 0});
    CHECK(a.to_string() == "101\n011\n");
    CHECK_THROWS_AS(BitMatrix::from_strings({"10", "1"}), DimensionError);
}

TEST_CASE("empty shapes are legal") {
    const BitMatrix z(0, 5);
    CHECK(rank(z) == 0);
    CHECK(kernel_basis(z).dimension == 5);
    const BitMatrix w(4, 0);
    CHECK(rank(w) == 0);
    CHECK(kernel_basis(w).dimension == 0);
    CHECK(left_kernel_basis(w).size() == 4);
}

TEST_CASE("sub selection validation") {
    const BitMatrix m(3, 3);
    CHECK_THROWS_AS((SubSelection{{0, 3}, {}}).validate(m), IndexError);
    CHECK_THROWS_AS((SubSelection{{0, 0}, {}}).validate(m), PreconditionError);
    CHECK(complement(std::vector<std::size_t>{1}, 3) == std::vector<std::size_t>{0, 2});
    CHECK(sorted(SubSelection{{2, 0}, {1, 0}}) == SubSelection{{0, 2}, {0, 1}});
}

TEST_CASE("rank of known matrices") {
    CHECK(rank(BitMatrix::identity(3)) == 3);
    CHECK(rank(BitMatrix::ones(4, 4)) == 1);
    const BitMatrix m18 = build_Mn(1);
    CHECK(rank(m18) == 9);
    CHECK(kernel_basis(m18).dimension == 9);
    const BitMatrix a18 = submatrix(m18, SubSelection{{0, 1, 2, 3, 4, 5},
                                                      SubSelection::all(6, 16).col_ids});
    CHECK(rank(a18) == 6);
    CHECK(kernel_basis(BitMatrix::identity(3)).dimension == 0);
}

TEST_CASE("kernel dimension of the N=3 member against the naive eliminator") {
    const BitMatrix m = build_Mn(3);
    const std::size_t dim = m.cols() - oracle::rank(m);
    CHECK(kernel_basis(m).dimension == dim);
    CHECK(dim <= m.cols() / 2 + 2);
}

TEST_CASE("rank plus nullity equals columns, optimized matches naive") {
    gen::Rng rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = rng() % 65;
        const std::size_t c = rng() % 129;
        const double density = 0.05 + 0.5 * static_cast<double>(rng() % 100) / 100.0;
        const BitMatrix m = gen::random_matrix(rng, r, c, density);
        const std::size_t rk = rank(m);
        CAPTURE(trial);
        CHECK(rk == oracle::rank(m));
        const KernelBasis kb = kernel_basis(m);
        CHECK(rk + kb.dimension == c);
        for (const auto& v : kb.basis_vectors) CHECK(in_kernel(m, v));
        CHECK(rank(BitMatrix::from_rows(kb.basis_vectors, c)) == kb.dimension);
        CHECK(row_echelon(m).pivot_cols.size() == rk);
    }
}

TEST_CASE("kernel basis spans exactly the enumerated kernel") {
    gen::Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t c = 1 + rng() % 14;
        const std::size_t r = rng() % 12;
        const BitMatrix m = gen::random_matrix(rng, r, c, 0.35);
        CAPTURE(trial);
        CHECK(oracle::span_set(kernel_basis(m).basis_vectors) == oracle::kernel_set(m));
    }
}

TEST_CASE("left kernel vectors annihilate the rows") {
    gen::Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const BitMatrix m = gen::random_matrix(rng, 1 + rng() % 20, 1 + rng() % 12, 0.3);
        const auto lk = left_kernel_basis(m);
        CHECK(lk.size() == m.rows() - rank(m));
        for (const auto& y : lk) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < y.size(); ++i)
                if (y[i]) rows.push_back(i);
            CHECK(!rows.empty());
            const auto all_cols = SubSelection::all(m).col_ids;
            const BitVector s = row_sum(m, rows, all_cols);
            CHECK(std::ranges::all_of(s, [](auto b) { return b == 0; }));
        }
    }
}

TEST_CASE("kronecker products") {
    CHECK(kronecker(BitMatrix::identity(1), BitMatrix::ones(3, 2)) == BitMatrix::ones(3, 2));
    const BitMatrix k = kronecker(BitMatrix::identity(2), BitMatrix::ones(3, 2));
    CHECK(k == BitMatrix::from_strings({"1100", "1100", "1100", "0011", "0011", "0011"}));

    gen::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const BitMatrix a = gen::random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4, 0.5);
        const BitMatrix b = gen::random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4, 0.5);
        const BitMatrix p = kronecker(a, b);
        REQUIRE(p.rows() == a.rows() * b.rows());
        REQUIRE(p.cols() == a.cols() * b.cols());
        for (std::size_t ia = 0; ia < a.rows(); ++ia)
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t ja = 0; ja < a.cols(); ++ja)
                    for (std::size_t jb = 0; jb < b.cols(); ++jb)
                        CHECK(p.get(ia * b.rows() + ib, ja * b.cols() + jb) ==
                              (a.get(ia, ja) && b.get(ib, jb)));
    }
}

TEST_CASE("tail block for N=3 matches the per-entry formula") {
    const BitMatrix t = build_tail(3);
    REQUIRE(t.rows() == 6);
    REQUIRE(t.cols() == 4);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(t.get(i, j) == (i / 3 == j / 2));
}

TEST_CASE("block assembly") {
    const BitMatrix i2 = BitMatrix::identity(2);
    CHECK(assemble_blocks({{{i2, std::nullopt}, {std::nullopt, i2}}}) == BitMatrix::identity(4));
    CHECK_THROWS_AS(assemble_blocks({{{i2, BitMatrix(3, 1)}, {std::nullopt, i2}}}), DimensionError);
    CHECK_THROWS_AS(assemble_blocks({{{std::nullopt, std::nullopt}, {std::nullopt, i2}}}),
                    DimensionError);
    try {
        (void)assemble_blocks({{{i2, BitMatrix(3, 1)}, {std::nullopt, i2}}});
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("block") != std::string::npos);
    }
}

TEST_CASE("weights and suffix weights") {
    const BitMatrix m18 = build_Mn(1);
    for (auto w : row_weights(m18)) CHECK(w == 6);
    for (auto w : col_weights(m18)) CHECK(w == 3);
    CHECK(row_weights(BitMatrix(2, 2)) == std::vector<std::size_t>{0, 0});
    CHECK(col_weights(BitMatrix(2, 2)) == std::vector<std::size_t>{0, 0});
    for (std::size_t N : {1, 3}) {
        const BitMatrix m = build_Mn(N);
        CHECK(suffix_weight(m, 0, 0) == 6);
        CHECK(suffix_weight(m, 4 * N + 2, 0) == 6);
        CHECK(suffix_weight(m, 0, m.cols()) == 0);
    }
    CHECK_THROWS_AS((void)suffix_weight(m18, 9, 0), IndexError);
    CHECK_THROWS_AS((void)suffix_weight(m18, 0, 19), IndexError);
}

TEST_CASE("submatrix and row sums") {
    const BitMatrix m18 = build_Mn(1);
    CHECK(submatrix(m18, SubSelection{{6, 8}, {16, 17}}) == BitMatrix::ones(2, 2));
    const std::vector<std::size_t> rows{6, 8};
    const std::vector<std::size_t> cols{16, 17};
    CHECK(row_sum(m18, rows, cols) == BitVector{0, 0});
    CHECK(row_sum(m18, std::vector<std::size_t>{}, cols) == BitVector{0, 0});
    CHECK_THROWS_AS((void)submatrix(m18, SubSelection{{9}, {}}), IndexError);
}

}  // TEST_SUITE
