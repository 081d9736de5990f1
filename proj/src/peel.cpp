#include "ldpc_audit/peel.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"

namespace ldpc_audit {

PeelTrace strip(const BitMatrix& m, const SubSelection& sel) {
    sel.validate(m);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    const std::size_t nr = sel.row_ids.size();
    const std::size_t nc = sel.col_ids.size();

    std::vector<std::size_t> local_col(m.cols(), kNone);
    for (std::size_t k = 0; k < nc; ++k) local_col[sel.col_ids[k]] = k;

    std::vector<std::vector<std::size_t>> row_cols(nr);
    std::vector<std::vector<std::size_t>> col_rows(nc);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t j : m.row_support(sel.row_ids[r])) {
            if (local_col[j] == kNone) continue;
            row_cols[r].push_back(local_col[j]);
            col_rows[local_col[j]].push_back(r);
        }
    }

    PeelTrace trace;
    std::vector<bool> row_alive(nr, true);
    std::vector<bool> col_alive(nc, true);
    std::vector<std::size_t> degree(nc);
    for (std::size_t r = 0; r < nr; ++r) {
        if (row_cols[r].empty()) {
            row_alive[r] = false;
            trace.dropped_rows.push_back(sel.row_ids[r]);
        }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t k = 0; k < nc; ++k) {
        degree[k] = col_rows[k].size();
        if (degree[k] <= 1) ready.push(k);
    }

    while (!ready.empty()) {
        const std::size_t k = ready.top();
        ready.pop();
        if (!col_alive[k] || degree[k] > 1) continue;
        col_alive[k] = false;
        if (degree[k] == 0) {
            trace.dropped_isolated.push_back(sel.col_ids[k]);
            continue;
        }
        const auto it = std::ranges::find_if(col_rows[k], [&](std::size_t r) { return row_alive[r]; });
        const std::size_t r = *it;
        row_alive[r] = false;
        trace.pairs.emplace_back(sel.col_ids[k], sel.row_ids[r]);
        for (std::size_t k2 : row_cols[r]) {
            if (!col_alive[k2]) continue;
            if (--degree[k2] <= 1) ready.push(k2);
        }
    }

    for (std::size_t r = 0; r < nr; ++r)
        if (row_alive[r]) trace.survivors.row_ids.push_back(sel.row_ids[r]);
    for (std::size_t k = 0; k < nc; ++k)
        if (col_alive[k]) trace.survivors.col_ids.push_back(sel.col_ids[k]);
    return trace;
}

PeelTrace strip(const BitMatrix& m) { return strip(m, SubSelection::all(m)); }

std::string ChoicePolicy::name() const {
    switch (kind) {
        case Kind::in_order: return "in-order";
        case Kind::lightest_first_index: return "lightest-first";
        case Kind::seeded_random: return "random";
        case Kind::scripted: return "scripted";
    }
    return "in-order";
}

ChoicePolicy ChoicePolicy::parse(const std::string& name, std::uint64_t seed) {
    if (name == "in-order") return in_order();
    if (name == "lightest-first" || name == "lightest-first-index") return lightest_first_index();
    if (name == "random" || name == "seeded-random") return seeded_random(seed);
    if (name == "scripted") return scripted({});
    throw PreconditionError("unknown choice policy '" + name +
                            "' (expected in-order, lightest-first, random or scripted)");
}

RowChooser::RowChooser(ChoicePolicy policy) : policy_(std::move(policy)), rng_(policy_.seed) {}

std::size_t RowChooser::choose(std::span<const RowCandidate> lightest) {
    if (lightest.empty()) throw PreconditionError("no candidate rows to choose from");
    auto by_label = [](const RowCandidate& a, const RowCandidate& b) { return a.label < b.label; };
    switch (policy_.kind) {
        case ChoicePolicy::Kind::lightest_first_index:
            return std::ranges::min_element(lightest, [](const RowCandidate& a, const RowCandidate& b) {
                       return std::pair(a.leading_col, a.label) < std::pair(b.leading_col, b.label);
                   })->local;
        case ChoicePolicy::Kind::seeded_random: {
            std::uniform_int_distribution<std::size_t> pick(0, lightest.size() - 1);
            return lightest[pick(rng_)].local;
        }
        case ChoicePolicy::Kind::scripted:
            if (script_pos_ < policy_.script.size()) {
                const std::size_t want = policy_.script[script_pos_++];
                for (const auto& c : lightest)
                    if (c.label == want) return c.local;
                throw PreconditionError("scripted choice #" + std::to_string(script_pos_) +
                                        " (row " + std::to_string(want + 1) +
                                        ") is not among the lightest rows");
            }
            [[fallthrough]];
        case ChoicePolicy::Kind::in_order:
            break;
    }
    return std::ranges::min_element(lightest, by_label)->local;
}

FinderResult ess_finder(const BitMatrix& m, RowChooser& chooser, const FinderOptions& opts) {
    const std::size_t nr = m.rows();
    const std::size_t nc = m.cols();
    if (!opts.row_labels.empty() && opts.row_labels.size() != nr)
        throw DimensionError("row label count does not match the matrix");

    std::vector<std::vector<std::size_t>> rows_of(nc);
    std::vector<std::vector<std::size_t>> support(nr);
    std::vector<std::size_t> weight(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        support[i] = m.row_support(i);
        weight[i] = support[i].size();
        for (std::size_t j : support[i]) rows_of[j].push_back(i);
    }
    if (opts.enforce_max_col_weight) {
        for (std::size_t j = 0; j < nc; ++j)
            if (rows_of[j].size() > 3)
                throw PreconditionError("column " + std::to_string(j + 1) + " has weight " +
                                        std::to_string(rows_of[j].size()) +
                                        "; the finder requires column weight at most 3");
    }

    FinderResult result;
    std::vector<bool> selected(nr, false);
    std::vector<bool> zeroed(nc, false);
    auto& C = result.selection.row_ids;
    auto& V = result.selection.col_ids;
    auto label = [&](std::size_t i) { return opts.row_labels.empty() ? i : opts.row_labels[i]; };

    std::vector<RowCandidate> lightest;
    while (C.size() < nr && (opts.guard == LoopGuard::rows_remain || V.size() < nc)) {
        std::size_t min_w = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < nr; ++i)
            if (!selected[i]) min_w = std::min(min_w, weight[i]);
        lightest.clear();
        for (std::size_t i = 0; i < nr; ++i) {
            if (selected[i] || weight[i] != min_w) continue;
            std::size_t lead = std::numeric_limits<std::size_t>::max();
            for (std::size_t j : support[i])
                if (!zeroed[j]) {
                    lead = j;
                    break;
                }
            lightest.push_back({i, label(i), lead});
        }
        const std::size_t c = chooser.choose(lightest);

        FinderStep step{c, weight[c], {}};
        for (std::size_t j : support[c]) {
            if (zeroed[j]) continue;
            zeroed[j] = true;
            step.new_cols.push_back(j);
            for (std::size_t i : rows_of[j]) --weight[i];
        }
        selected[c] = true;
        C.push_back(c);
        V.insert(V.end(), step.new_cols.begin(), step.new_cols.end());
        const bool no_new_vars = step.new_cols.empty();
        result.steps.push_back(std::move(step));

        if (no_new_vars) {
            PeelTrace t = strip(m, result.selection);
            if (!t.empty()) {
                result.selection = std::move(t.survivors);
                result.termination = FinderResult::Termination::strip_output;
                return result;
            }
        }
    }
    result.termination = FinderResult::Termination::loop_exit;
    return result;
}

FinderResult ess_finder(const BitMatrix& m, const ChoicePolicy& policy, const FinderOptions& opts) {
    RowChooser chooser(policy);
    return ess_finder(m, chooser, opts);
}

bool is_ess_candidate(const BitMatrix& m, const SubSelection& sel) {
    sel.validate(m);
    if (sel.col_ids.empty()) return false;
    std::vector<bool> in_v(m.cols(), false);
    for (std::size_t j : sel.col_ids) in_v[j] = true;
    std::vector<std::size_t> w(m.cols(), 0);
    for (std::size_t r : sel.row_ids) {
        for (std::size_t j : m.row_support(r)) {
            if (!in_v[j]) return false;
            ++w[j];
        }
    }
    return std::ranges::all_of(sel.col_ids, [&](std::size_t j) { return w[j] >= 2; });
}

EssClassification classify(const BitMatrix& m, const SubSelection& sel) {
    if (!is_ess_candidate(m, sel))
        throw PreconditionError("selection is not a (P)ESS candidate: every row must lie inside "
                                "the selected columns and every column needs weight >= 2");
    SubSelection full_rows{sel.row_ids, SubSelection::all(m).col_ids};
    EssClassification out;
    out.kind = rank(submatrix(m, full_rows)) == sel.row_ids.size() ? EssKind::ess : EssKind::pess;
    return out;
}

bool is_pseudo_tree(const BitMatrix& m, const SubSelection& sel) { return strip(m, sel).empty(); }

bool is_pseudo_tree(const BitMatrix& m) { return strip(m).empty(); }

namespace {

/// Calls visit(positions) for every k-subset of {0..n-1} in lexicographic
/// order until visit returns true.
bool for_each_subset(std::size_t n, std::size_t k,
                     const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    if (k > n) return false;
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    while (true) {
        if (visit(pos)) return true;
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return false;
        ++pos[i - 1];
        for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

SubSelection without_rows(const SubSelection& sel, const std::vector<std::size_t>& positions) {
    SubSelection out;
    out.col_ids = sel.col_ids;
    std::size_t p = 0;
    for (std::size_t i = 0; i < sel.row_ids.size(); ++i) {
        if (p < positions.size() && positions[p] == i) {
            ++p;
            continue;
        }
        out.row_ids.push_back(sel.row_ids[i]);
    }
    return out;
}

std::optional<FoldResult> search_fold(const BitMatrix& m, const SubSelection& sel,
                                      const SubSelection& target, std::size_t max_k) {
    // Subsets are drawn from target's rows; the pseudo-tree test runs on the
    // remainder of the whole selection.
    FoldResult fr;
    fr.max_k = max_k;
    for (std::size_t k = 1; k <= max_k; ++k) {
        const bool found = for_each_subset(target.row_ids.size(), k, [&](const auto& pos) {
            std::vector<std::size_t> removed;
            for (std::size_t p : pos) removed.push_back(target.row_ids[p]);
            SubSelection rest;
            rest.col_ids = sel.col_ids;
            for (std::size_t r : sel.row_ids)
                if (std::ranges::find(removed, r) == removed.end()) rest.row_ids.push_back(r);
            if (!is_pseudo_tree(m, rest)) return false;
            fr.level = k;
            fr.witness = std::move(removed);
            return true;
        });
        if (found) return fr;
    }
    return std::nullopt;
}

}  // namespace

EssClassification fold_level(const BitMatrix& m, const SubSelection& sel, std::size_t max_k) {
    EssClassification out = classify(m, sel);
    FoldResult fr;
    fr.max_k = max_k;
    for (std::size_t k = 1; k <= max_k && !fr.level; ++k) {
        for_each_subset(sel.row_ids.size(), k, [&](const std::vector<std::size_t>& pos) {
            if (!is_pseudo_tree(m, without_rows(sel, pos))) return false;
            fr.level = k;
            for (std::size_t p : pos) fr.witness.push_back(sel.row_ids[p]);
            return true;
        });
    }
    out.fold = std::move(fr);
    return out;
}

std::vector<std::size_t> pseudo_tree_cut(const BitMatrix& m, const SubSelection& sel,
                                         std::size_t max_k) {
    PeelTrace t = strip(m, sel);
    if (t.empty()) return {};
    if (auto fr = search_fold(m, sel, t.survivors, max_k)) return fr->witness;

    std::vector<std::size_t> cut;
    SubSelection current = sel;
    while (!t.empty()) {
        const std::size_t r = t.survivors.row_ids.front();
        cut.push_back(r);
        std::erase(current.row_ids, r);
        t = strip(m, current);
    }
    return cut;
}

}  // namespace ldpc_audit
