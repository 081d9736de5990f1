#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/decompose.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"
#include "ldpc_audit/report.hpp"
#include "oracles.hpp"

using namespace ldpc_audit;

namespace {

std::vector<std::size_t> removed_rows(const CallRecord& call) {
    std::vector<std::size_t> out;
    for (const StepRecord& s : call.steps) {
        if (s.removed && s.removed->origin == RowRef::Origin::input) out.push_back(s.removed->index);
        for (const CallRecord& nested : s.rebuilt) {
            const auto inner = removed_rows(nested);
            out.insert(out.end(), inner.begin(), inner.end());
        }
    }
    return out;
}

// Every input row ends in exactly one component or was removed as a
// dependency; every input column ends in exactly one component.
void check_conservation(const BitMatrix& m, const DecompositionReport& r) {
    std::multiset<std::size_t> rows;
    std::multiset<std::size_t> cols;
    for (const Component& c : r.components) {
        rows.insert(c.selection.row_ids.begin(), c.selection.row_ids.end());
        cols.insert(c.selection.col_ids.begin(), c.selection.col_ids.end());
    }
    for (std::size_t x : removed_rows(r.recursion_log)) rows.insert(x);
    for (std::size_t i = 0; i < m.rows(); ++i) CHECK(rows.count(i) == 1);
    for (std::size_t j = 0; j < m.cols(); ++j) CHECK(cols.count(j) == 1);
    CHECK(rows.size() == m.rows());
    CHECK(cols.size() == m.cols());
}

void check_message_bits(const BitMatrix& m, const DecompositionReport& r) {
    std::size_t total = 0;
    for (const Component& c : r.components) {
        CHECK(c.matrix.rows() == c.rows.size());
        CHECK(c.matrix.cols() == c.selection.col_ids.size());
        CHECK(c.message_bits == c.matrix.cols() - oracle::rank(c.matrix));
        CHECK(component_constraints(m, r, c).rows() == c.rows.size());
        total += c.message_bits;
    }
    CHECK(total == r.sum_k);
    CHECK(r.kernel_dim == m.cols() - oracle::rank(m));
}

bool has_event(const DecompositionReport& r, DecomposeEvent::Kind k) {
    return std::ranges::any_of(r.events, [k](const DecomposeEvent& e) { return e.kind == k; });
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("chain is consistent") {
    const BitMatrix m = BitMatrix::from_strings({"110", "011"});
    const DecompositionReport r = decompose(m);
    CHECK(r.kernel_dim == 1);
    CHECK(r.sum_k == 1);
    CHECK(r.verdict == Verdict::consistent);
    check_conservation(m, r);
    check_message_bits(m, r);
}

TEST_CASE("degenerate inputs") {
    const DecompositionReport e = decompose(BitMatrix{});
    CHECK(e.sum_k == 0);
    CHECK(e.verdict == Verdict::consistent);

    const BitMatrix z(2, 3);
    const DecompositionReport rz = decompose(z);
    CHECK(rz.kernel_dim == 3);
    CHECK(rz.sum_k == 3);
    check_conservation(z, rz);

    const BitMatrix w(0, 4);
    CHECK(decompose(w).sum_k == 4);
}

TEST_CASE("column weight above 3 is rejected") {
    const BitMatrix m = BitMatrix::from_strings({"11", "10", "10", "10"});
    CHECK_THROWS_AS(decompose(m), PreconditionError);
}

TEST_CASE("dependency sets") {
    const BitMatrix res = BitMatrix::ones(3, 2);
    const Dependency d = find_dependency(res, SubSelection{{0, 2}, {0, 1}});
    CHECK(d.rows == std::vector<std::size_t>{0, 2});
    CHECK(d.left_kernel_dim == 1);
    CHECK(find_dependency(res, SubSelection::all(res)).left_kernel_dim == 2);

    const BitMatrix dup = BitMatrix::from_strings({"110", "110"});
    CHECK(find_dependency(dup, SubSelection::all(dup)).rows == std::vector<std::size_t>{0, 1});

    const BitMatrix tri = BitMatrix::from_strings({"10", "01", "11"});
    CHECK(find_dependency(tri, SubSelection::all(tri)).rows == std::vector<std::size_t>{0, 1, 2});

    CHECK_THROWS_AS(find_dependency(BitMatrix::identity(2), SubSelection::all(2, 2)),
                    PreconditionError);
}

TEST_CASE("removal choice") {
    const std::vector<std::size_t> dep{4, 9, 2};
    CHECK(removal_choice(dep) == 2);
    CHECK(removal_choice(dep, RemovalPolicy::highest) == 9);
    CHECK_THROWS_AS(removal_choice(std::vector<std::size_t>{}), PreconditionError);
}

TEST_CASE("the 9x18 instance overcounts in order") {
    const BitMatrix m = build_Mn(1);
    const DecompositionReport r = decompose(m);
    CHECK(r.kernel_dim == 9);
    CHECK(r.sum_k == 10);
    CHECK(r.verdict == Verdict::overcount);
    CHECK(has_event(r, DecomposeEvent::Kind::pess_found));
    CHECK(has_event(r, DecomposeEvent::Kind::back_propagated));
    REQUIRE(!r.synthesized.empty());
    // c* lives on A's columns only.
    for (std::size_t j = 16; j < 18; ++j) CHECK(r.synthesized[0].row[j] == 0);
    check_conservation(m, r);
    check_message_bits(m, r);
}

TEST_CASE("the replayed choices overcount as well") {
    const BitMatrix m = build_Mn(1);
    DecomposeOptions o;
    o.policy = m18_replay_policy();
    const DecompositionReport r = decompose(m, o);
    CHECK(r.kernel_dim == 9);
    CHECK(r.sum_k == 11);
    CHECK(r.verdict == Verdict::overcount);
    const auto ess = std::ranges::find_if(r.components, [](const Component& c) {
        return c.kind == ComponentKind::ess;
    });
    REQUIRE(ess != r.components.end());
    CHECK(ess->message_bits == 10);
    CHECK(sorted(ess->selection) == SubSelection::all(6, 16));
    check_conservation(m, r);
    check_message_bits(m, r);
}

TEST_CASE("depth limit") {
    DecomposeOptions o;
    o.depth_limit = 0;
    CHECK_THROWS_AS(decompose(build_Mn(1), o), DepthLimitError);
}

TEST_CASE("pseudo-trees are consistent") {
    gen::Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const BitMatrix m = gen::random_peelable(rng, 1 + rng() % 12, 2 + rng() % 14, 0.3);
        for (const ChoicePolicy& p : {ChoicePolicy::in_order(), ChoicePolicy::seeded_random(trial)}) {
            DecomposeOptions o;
            o.policy = p;
            const DecompositionReport r = decompose(m, o);
            CAPTURE(trial);
            CHECK(r.sum_k == r.kernel_dim);
            CHECK(r.verdict == Verdict::consistent);
            check_conservation(m, r);
            check_message_bits(m, r);
        }
    }
}

TEST_CASE("conservation on random sparse matrices") {
    gen::Rng rng(5150);
    int done = 0;
    for (int trial = 0; trial < 120; ++trial) {
        BitMatrix m = gen::random_matrix(rng, 2 + rng() % 10, 3 + rng() % 14, 0.25);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::size_t w = 0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                if (m.get(i, j) && ++w > 3) m.set(i, j, false);
            }
        }
        DecomposeOptions o;
        o.policy = ChoicePolicy::seeded_random(trial);
        o.removal = trial % 2 ? RemovalPolicy::highest : RemovalPolicy::lowest;
        DecompositionReport r;
        try {
            r = decompose(m, o);
        } catch (const DepthLimitError&) {
            continue;
        }
        ++done;
        CAPTURE(trial);
        check_conservation(m, r);
        check_message_bits(m, r);
        const Verdict expect = r.sum_k == r.kernel_dim  ? Verdict::consistent
                               : r.sum_k > r.kernel_dim ? Verdict::overcount
                                                        : Verdict::undercount;
        CHECK(r.verdict == expect);
        // Each k_i counts a component's full freedom, so the sum never falls short.
        CHECK(r.sum_k >= r.kernel_dim);
    }
    CHECK(done >= 100);
}

TEST_CASE("decomposition is deterministic") {
    for (std::size_t N : {1, 3}) {
        const BitMatrix m = build_Mn(N);
        DecomposeOptions o;
        o.policy = ChoicePolicy::seeded_random(9);
        const auto a = to_json(decompose(m, o), m).dump();
        const auto b = to_json(decompose(m, o), m).dump();
        CHECK(a == b);
    }
}

TEST_CASE("names") {
    CHECK(to_string(ComponentKind::pess_reduced) == "PESS-after-removal");
    CHECK(to_string(Verdict::overcount) == "OVERCOUNT");
    CHECK(to_string(DecomposeEvent::Kind::pess_found) != to_string(DecomposeEvent::Kind::discarded_constraint));
}

}  // TEST_SUITE
