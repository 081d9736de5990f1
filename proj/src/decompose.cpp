#include "ldpc_audit/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"

namespace ldpc_audit {

std::string to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::pseudo_tree: return "pseudo-tree";
        case ComponentKind::ess: return "ESS";
        case ComponentKind::pess_reduced: return "PESS-after-removal";
        case ComponentKind::unclassified: return "unclassified";
        case ComponentKind::residual: return "residual";
    }
    return "residual";
}

std::string to_string(DecomposeEvent::Kind kind) {
    using K = DecomposeEvent::Kind;
    switch (kind) {
        case K::pess_found: return "pess_found";
        case K::discarded_constraint: return "discarded_constraint";
        case K::back_propagated: return "back_propagated";
        case K::truncated_back_propagation: return "truncated_back_propagation";
        case K::column_weight_relaxed: return "column_weight_relaxed";
    }
    return "pess_found";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::overcount: return "OVERCOUNT";
        case Verdict::undercount: return "UNDERCOUNT";
    }
    return "consistent";
}

std::size_t message_bit_count(const Component& c) { return c.matrix.cols() - rank(c.matrix); }

std::size_t removal_choice(std::span<const std::size_t> dependency, RemovalPolicy policy) {
    if (dependency.empty()) throw PreconditionError("empty dependency set");
    return policy == RemovalPolicy::lowest ? *std::ranges::min_element(dependency)
                                           : *std::ranges::max_element(dependency);
}

Dependency find_dependency(const BitMatrix& m, const SubSelection& sel) {
    sel.validate(m);
    const auto lk = left_kernel_basis(submatrix(m, sel));
    if (lk.empty())
        throw PreconditionError("the selected rows are linearly independent on the selected columns");
    Dependency d;
    d.left_kernel_dim = lk.size();
    for (std::size_t k = 0; k < sel.row_ids.size(); ++k)
        if (lk.front()[k]) d.rows.push_back(sel.row_ids[k]);
    return d;
}

namespace {

/// A matrix handed to one DECOMPOSE invocation. Rows are stored at full
/// input width so nested components keep their true supports; `cols` lists
/// the input columns the invocation works on, ascending.
struct Problem {
    BitMatrix full;
    std::vector<RowRef> rows;
    std::vector<std::size_t> cols;
};

struct Group {
    Problem problem;
    std::vector<Component> components;
};

struct Context {
    const BitMatrix& input;
    const DecomposeOptions& opts;
    RowChooser chooser;
    std::vector<SynthesizedConstraint> synthesized;
    std::vector<DecomposeEvent> events;
};

std::string describe(const RowRef& r) {
    return r.origin == RowRef::Origin::input ? "row " + std::to_string(r.index + 1)
                                             : "c*#" + std::to_string(r.index + 1);
}

Problem restrict_problem(const Problem& p, std::vector<std::size_t> rows,
                         std::vector<std::size_t> top_cols) {
    std::ranges::sort(rows);
    std::ranges::sort(top_cols);
    Problem out;
    out.full = BitMatrix(0, p.full.cols());
    for (std::size_t r : rows) {
        out.full.append_row(p.full.row(r));
        out.rows.push_back(p.rows[r]);
    }
    out.cols = std::move(top_cols);
    return out;
}

Component make_component(const Problem& p, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& top_cols, ComponentKind kind,
                         std::size_t depth) {
    Component c;
    c.kind = kind;
    c.depth = depth;
    c.selection.col_ids = top_cols;
    for (std::size_t r : rows) {
        const RowRef ref = p.rows[r];
        c.rows.push_back(ref);
        if (ref.origin == RowRef::Origin::input)
            c.selection.row_ids.push_back(ref.index);
        else
            c.added_constraints.push_back(ref.index);
    }
    c.matrix = submatrix(p.full, SubSelection{rows, top_cols});
    c.message_bits = message_bit_count(c);
    c.pseudo_tree = is_pseudo_tree(c.matrix);
    return c;
}

std::size_t max_col_weight(const BitMatrix& m) {
    const auto w = col_weights(m);
    return w.empty() ? 0 : *std::ranges::max_element(w);
}

std::pair<std::vector<Component>, CallRecord> decompose_call(Context& ctx, const Problem& problem,
                                                             std::size_t depth) {
    if (depth > ctx.opts.depth_limit)
        throw DepthLimitError("DECOMPOSE recursion exceeded depth limit " +
                              std::to_string(ctx.opts.depth_limit));

    // Local view: rows of the problem restricted to its columns.
    const BitMatrix local =
        submatrix(problem.full, SubSelection{SubSelection::all(problem.full.rows(), 0).row_ids,
                                             problem.cols});
    CallRecord record;
    record.depth = depth;
    record.rows = local.rows();
    record.cols = local.cols();

    std::vector<std::size_t> rem_rows(local.rows());
    std::vector<std::size_t> rem_cols(local.cols());
    std::iota(rem_rows.begin(), rem_rows.end(), 0);
    std::iota(rem_cols.begin(), rem_cols.end(), 0);

    std::vector<Group> groups;
    std::size_t step_no = 0;

    while (!rem_rows.empty() || !rem_cols.empty()) {
        const SubSelection residual{rem_rows, rem_cols};
        const BitMatrix res = submatrix(local, residual);

        FinderOptions fo;
        fo.guard = ctx.opts.guard;
        fo.enforce_max_col_weight = depth == 0;
        fo.row_labels = rem_rows;
        const FinderResult fr = ess_finder(res, ctx.chooser, fo);

        if (fr.selection.empty()) break;
        if (fr.selection.row_ids.size() == rem_rows.size() &&
            fr.selection.col_ids.size() == rem_cols.size())
            break;

        ++step_no;
        StepRecord step;
        step.step = step_no;
        step.termination = fr.termination;

        // Problem-local row indices and local column positions of C_i, V_i.
        std::vector<std::size_t> comp_rows;
        std::vector<std::size_t> comp_cols;
        for (std::size_t r : fr.selection.row_ids) comp_rows.push_back(rem_rows[r]);
        for (std::size_t k : fr.selection.col_ids) comp_cols.push_back(rem_cols[k]);
        for (std::size_t r : comp_rows) step.rows.push_back(problem.rows[r]);
        for (std::size_t k : comp_cols) step.cols.push_back(problem.cols[k]);

        ComponentKind kind = ComponentKind::unclassified;
        std::optional<EssClassification> cls;
        std::optional<std::size_t> removed_local;

        if (is_ess_candidate(res, fr.selection)) {
            cls = classify(res, fr.selection);
            if (cls->kind == EssKind::pess) {
                kind = ComponentKind::pess_reduced;
                const Dependency dep = find_dependency(res, fr.selection);
                std::vector<std::size_t> dep_rows;
                for (std::size_t r : dep.rows) dep_rows.push_back(rem_rows[r]);
                for (std::size_t r : dep_rows) step.dependency.push_back(problem.rows[r]);
                step.dependency_count = dep.left_kernel_dim;

                const std::size_t removed = removal_choice(dep_rows, ctx.opts.removal);
                removed_local = removed;
                step.removed = problem.rows[removed];

                std::ostringstream msg;
                msg << "PESS with " << comp_rows.size() << " rows on " << comp_cols.size()
                    << " columns; left kernel dimension " << dep.left_kernel_dim << "; removing "
                    << describe(problem.rows[removed]);
                ctx.events.push_back({DecomposeEvent::Kind::pess_found, depth, step_no, msg.str()});

                if (!groups.empty()) {
                    Group& prev = groups.back();
                    // c* over the full input width, supported on the previous
                    // component's columns only.
                    BitVector sum(problem.full.cols(), 0);
                    for (std::size_t r : dep_rows)
                        for (std::size_t j : problem.full.row_support(r)) sum[j] ^= 1;
                    BitVector cstar(problem.full.cols(), 0);
                    std::size_t truncated = 0;
                    std::vector<bool> in_prev(problem.full.cols(), false);
                    for (std::size_t j : prev.problem.cols) in_prev[j] = true;
                    for (std::size_t j = 0; j < sum.size(); ++j) {
                        if (!sum[j]) continue;
                        if (in_prev[j])
                            cstar[j] = 1;
                        else
                            ++truncated;
                    }

                    SynthesizedConstraint sc;
                    sc.id = ctx.synthesized.size();
                    sc.depth = depth;
                    sc.step = step_no;
                    sc.row = cstar;
                    for (std::size_t r : dep_rows) sc.sources.push_back(problem.rows[r]);
                    step.synthesized = sc.id;
                    ctx.synthesized.push_back(sc);

                    std::ostringstream bp;
                    bp << "c*#" << sc.id + 1 << " of weight "
                       << std::count(cstar.begin(), cstar.end(), 1) << " added to component "
                       << step_no - 1;
                    ctx.events.push_back(
                        {DecomposeEvent::Kind::back_propagated, depth, step_no, bp.str()});
                    if (truncated > 0) {
                        ctx.events.push_back({DecomposeEvent::Kind::truncated_back_propagation,
                                              depth, step_no,
                                              std::to_string(truncated) +
                                                  " entries of the dependency sum lie outside "
                                                  "the previous component and are dropped"});
                    }

                    prev.problem.full.append_row(cstar);
                    prev.problem.rows.push_back(RowRef::synthesized(sc.id));
                    const BitMatrix prev_local = submatrix(
                        prev.problem.full,
                        SubSelection{SubSelection::all(prev.problem.full.rows(), 0).row_ids,
                                     prev.problem.cols});
                    if (const std::size_t w = max_col_weight(prev_local); w > 3) {
                        ctx.events.push_back({DecomposeEvent::Kind::column_weight_relaxed,
                                              depth + 1, step_no,
                                              "rebuilt component has column weight " +
                                                  std::to_string(w)});
                    }
                    auto [comps, child] = decompose_call(ctx, prev.problem, depth + 1);
                    prev.components = std::move(comps);
                    step.rebuilt.push_back(std::move(child));
                } else {
                    ctx.events.push_back({DecomposeEvent::Kind::discarded_constraint, depth,
                                          step_no,
                                          describe(problem.rows[removed]) +
                                              " removed from the first component; its "
                                              "constraint is not carried anywhere"});
                }
            } else {
                kind = ComponentKind::ess;
                if (ctx.opts.compute_fold) {
                    EssClassification folded = fold_level(res, fr.selection, ctx.opts.fold_max_k);
                    if (folded.fold)
                        for (auto& w : folded.fold->witness) w = rem_rows[w];
                    cls = std::move(folded);
                }
            }
        } else if (is_pseudo_tree(res, fr.selection)) {
            kind = ComponentKind::pseudo_tree;
        }
        step.kind = kind;

        std::vector<std::size_t> kept_rows = comp_rows;
        if (removed_local) std::erase(kept_rows, *removed_local);
        std::vector<std::size_t> top_cols;
        for (std::size_t k : comp_cols) top_cols.push_back(problem.cols[k]);

        Component comp = make_component(problem, kept_rows, top_cols, kind, depth);
        if (cls) {
            // Fold witnesses are recorded as input-matrix rows where possible.
            if (cls->fold)
                for (auto& w : cls->fold->witness) w = problem.rows[w].index;
            comp.classification = cls;
        }
        groups.push_back({restrict_problem(problem, kept_rows, top_cols), {std::move(comp)}});
        record.steps.push_back(std::move(step));

        // C <- C \ C_i (the removed dependency row leaves as well), V <- V \ V_i.
        std::erase_if(rem_rows, [&](std::size_t r) {
            return std::ranges::find(comp_rows, r) != comp_rows.end();
        });
        std::erase_if(rem_cols, [&](std::size_t k) {
            return std::ranges::find(comp_cols, k) != comp_cols.end();
        });
    }

    std::vector<Component> out;
    for (auto& g : groups)
        for (auto& c : g.components) out.push_back(std::move(c));

    if (!rem_rows.empty() || !rem_cols.empty()) {
        std::vector<std::size_t> top_cols;
        for (std::size_t k : rem_cols) top_cols.push_back(problem.cols[k]);
        for (std::size_t r : rem_rows) record.residual_rows.push_back(problem.rows[r]);
        record.residual_cols = top_cols;
        out.push_back(make_component(problem, rem_rows, top_cols, ComponentKind::residual, depth));
    }
    return {std::move(out), std::move(record)};
}

}  // namespace

DecompositionReport decompose(const BitMatrix& m, const DecomposeOptions& opts) {
    if (const std::size_t w = max_col_weight(m); w > 3)
        throw PreconditionError("input has a column of weight " + std::to_string(w) +
                                "; DECOMPOSE requires column weight at most 3");

    Context ctx{m, opts, RowChooser(opts.policy), {}, {}};
    Problem top;
    top.full = m;
    for (std::size_t i = 0; i < m.rows(); ++i) top.rows.push_back(RowRef::input(i));
    top.cols = SubSelection::all(m).col_ids;

    auto [components, record] = decompose_call(ctx, top, 0);

    DecompositionReport report;
    report.components = std::move(components);
    report.synthesized = std::move(ctx.synthesized);
    report.events = std::move(ctx.events);
    report.recursion_log = std::move(record);
    report.policy = opts.policy;
    report.removal = opts.removal;
    for (const auto& c : report.components) report.sum_k += c.message_bits;
    report.kernel_dim = m.cols() - rank(m);
    report.verdict = report.sum_k > report.kernel_dim   ? Verdict::overcount
                     : report.sum_k < report.kernel_dim ? Verdict::undercount
                                                        : Verdict::consistent;
    return report;
}

BitMatrix component_constraints(const BitMatrix& input, const DecompositionReport& report,
                                const Component& c) {
    BitMatrix out(0, input.cols());
    for (const RowRef& r : c.rows) {
        if (r.origin == RowRef::Origin::input)
            out.append_row(input.row(r.index));
        else
            out.append_row(report.synthesized.at(r.index).row);
    }
    return out;
}

}  // namespace ldpc_audit
