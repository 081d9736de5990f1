#include "ldpc_audit/report.hpp"

#include <sstream>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"

namespace ldpc_audit {

using nlohmann::json;

namespace {

json one_based(const std::vector<std::size_t>& v) {
    json a = json::array();
    for (std::size_t x : v) a.push_back(x + 1);
    return a;
}

json ref_json(const RowRef& r) {
    if (r.origin == RowRef::Origin::input) return r.index + 1;
    return "c*#" + std::to_string(r.index + 1);
}

json refs_json(const std::vector<RowRef>& v) {
    json a = json::array();
    for (const RowRef& r : v) a.push_back(ref_json(r));
    return a;
}

std::string ref_text(const RowRef& r) {
    return r.origin == RowRef::Origin::input ? std::to_string(r.index + 1)
                                             : "c*#" + std::to_string(r.index + 1);
}

std::string refs_text(const std::vector<RowRef>& v) {
    std::vector<std::size_t> plain;
    std::string extra;
    for (const RowRef& r : v) {
        if (r.origin == RowRef::Origin::input)
            plain.push_back(r.index);
        else
            extra += (extra.empty() ? "" : ", ") + ref_text(r);
    }
    std::string s = format_indices(plain);
    if (!extra.empty()) s += (s.empty() ? "" : ", ") + extra;
    return "{" + s + "}";
}

std::string termination_name(FinderResult::Termination t) {
    return t == FinderResult::Termination::strip_output ? "strip_output" : "loop_exit";
}

json fold_json(const std::optional<FoldResult>& f) {
    if (!f) return nullptr;
    json j;
    j["max_k"] = f->max_k;
    if (f->level)
        j["level"] = *f->level;
    else
        j["level"] = ">" + std::to_string(f->max_k);
    j["witness"] = one_based(f->witness);
    return j;
}

json classification_json(const std::optional<EssClassification>& c) {
    if (!c) return nullptr;
    json j;
    j["kind"] = c->kind == EssKind::ess ? "ESS" : "PESS";
    j["fold"] = fold_json(c->fold);
    return j;
}

json call_json(const CallRecord& call) {
    json j;
    j["depth"] = call.depth;
    j["shape"] = {call.rows, call.cols};
    json steps = json::array();
    for (const StepRecord& s : call.steps) {
        json st;
        st["step"] = s.step;
        st["rows"] = refs_json(s.rows);
        st["cols"] = one_based(s.cols);
        st["termination"] = termination_name(s.termination);
        st["kind"] = to_string(s.kind);
        if (!s.dependency.empty()) {
            st["dependency"] = refs_json(s.dependency);
            st["dependency_count"] = s.dependency_count;
        }
        if (s.removed) st["removed"] = ref_json(*s.removed);
        if (s.synthesized) st["synthesized"] = "c*#" + std::to_string(*s.synthesized + 1);
        json rebuilt = json::array();
        for (const CallRecord& c : s.rebuilt) rebuilt.push_back(call_json(c));
        st["rebuilt"] = rebuilt;
        steps.push_back(st);
    }
    j["steps"] = steps;
    j["residual"] = {{"rows", refs_json(call.residual_rows)},
                     {"cols", one_based(call.residual_cols)}};
    return j;
}

}  // namespace

std::string format_indices(const std::vector<std::size_t>& zero_based) {
    std::string out;
    std::size_t k = 0;
    while (k < zero_based.size()) {
        std::size_t e = k;
        while (e + 1 < zero_based.size() && zero_based[e + 1] == zero_based[e] + 1) ++e;
        if (!out.empty()) out += ", ";
        out += std::to_string(zero_based[k] + 1);
        if (e > k) out += "-" + std::to_string(zero_based[e] + 1);
        k = e + 1;
    }
    return out;
}

json to_json(const ChoicePolicy& policy) {
    json j;
    j["name"] = policy.name();
    if (policy.kind == ChoicePolicy::Kind::seeded_random) j["seed"] = policy.seed;
    if (policy.kind == ChoicePolicy::Kind::scripted) j["script"] = one_based(policy.script);
    return j;
}

json to_json(const PeelTrace& trace) {
    json pairs = json::array();
    for (const auto& [x, c] : trace.pairs) pairs.push_back({{"variable", x + 1}, {"constraint", c + 1}});
    return {{"pairs", pairs},
            {"dropped_isolated", one_based(trace.dropped_isolated)},
            {"dropped_rows", one_based(trace.dropped_rows)},
            {"survivors",
             {{"rows", one_based(trace.survivors.row_ids)},
              {"cols", one_based(trace.survivors.col_ids)}}}};
}

json to_json(const FinderResult& result) {
    json steps = json::array();
    for (const FinderStep& s : result.steps)
        steps.push_back({{"row", s.row + 1}, {"weight", s.weight}, {"new_cols", one_based(s.new_cols)}});
    return {{"rows", one_based(result.selection.row_ids)},
            {"cols", one_based(result.selection.col_ids)},
            {"termination", termination_name(result.termination)},
            {"steps", steps}};
}

json to_json(const DecompositionReport& report, const BitMatrix& input) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "decomposition";
    j["input"] = {{"rows", input.rows()}, {"cols", input.cols()}};
    j["policy"] = to_json(report.policy);
    j["removal"] = report.removal == RemovalPolicy::lowest ? "lowest" : "highest";

    json comps = json::array();
    for (std::size_t i = 0; i < report.components.size(); ++i) {
        const Component& c = report.components[i];
        json cj;
        cj["index"] = i + 1;
        cj["kind"] = to_string(c.kind);
        cj["rows"] = refs_json(c.rows);
        cj["cols"] = one_based(c.selection.col_ids);
        cj["shape"] = {c.matrix.rows(), c.matrix.cols()};
        cj["rank"] = c.matrix.cols() - c.message_bits;
        cj["k_i"] = c.message_bits;
        cj["depth"] = c.depth;
        cj["pseudo_tree"] = c.pseudo_tree;
        cj["classification"] = classification_json(c.classification);
        comps.push_back(cj);
    }
    j["components"] = comps;

    json syn = json::array();
    for (const SynthesizedConstraint& s : report.synthesized) {
        std::vector<std::size_t> support;
        for (std::size_t k = 0; k < s.row.size(); ++k)
            if (s.row[k]) support.push_back(k);
        syn.push_back({{"id", "c*#" + std::to_string(s.id + 1)},
                       {"sources", refs_json(s.sources)},
                       {"depth", s.depth},
                       {"step", s.step},
                       {"support", one_based(support)}});
    }
    j["synthesized"] = syn;
    j["sum_k"] = report.sum_k;
    j["dim_ker"] = report.kernel_dim;
    j["verdict"] = to_string(report.verdict);

    json events = json::array();
    for (const DecomposeEvent& e : report.events)
        events.push_back({{"kind", to_string(e.kind)},
                          {"depth", e.depth},
                          {"step", e.step},
                          {"detail", e.detail}});
    j["events"] = events;
    j["recursion_log"] = call_json(report.recursion_log);
    return j;
}

json to_json(const Circuit& circuit) {
    json gates = json::array();
    for (const Gate& g : circuit.gates) {
        json gj;
        gj["op"] = to_string(g.op);
        switch (g.op) {
            case Gate::Op::input:
            case Gate::Op::external: gj["variable"] = g.label + 1; break;
            case Gate::Op::wire: gj["args"] = {g.a}; break;
            case Gate::Op::xor2: gj["args"] = {g.a, g.b}; break;
            case Gate::Op::zero: break;
        }
        gates.push_back(gj);
    }
    json outputs = json::array();
    for (const auto& [pos, id] : circuit.outputs) outputs.push_back({{"position", pos + 1}, {"gate", id}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "circuit"},
            {"codeword_length", circuit.codeword_length},
            {"size", circuit.size()},
            {"inputs", circuit.inputs},
            {"outputs", outputs},
            {"gates", gates}};
}

Circuit circuit_from_json(const json& j) {
    Circuit c;
    try {
        if (j.at("kind") != "circuit") throw FormatError("not a circuit document");
        c.codeword_length = j.at("codeword_length").get<std::size_t>();
        for (const json& gj : j.at("gates")) {
            Gate g;
            const std::string op = gj.at("op").get<std::string>();
            if (op == "input" || op == "external") {
                g.op = op == "input" ? Gate::Op::input : Gate::Op::external;
                const auto var = gj.at("variable").get<std::size_t>();
                if (var == 0) throw FormatError("variables are 1-based");
                g.label = var - 1;
            } else if (op == "zero") {
                g.op = Gate::Op::zero;
            } else if (op == "wire") {
                g.op = Gate::Op::wire;
                g.a = gj.at("args").at(0).get<std::size_t>();
            } else if (op == "xor") {
                g.op = Gate::Op::xor2;
                g.a = gj.at("args").at(0).get<std::size_t>();
                g.b = gj.at("args").at(1).get<std::size_t>();
            } else {
                throw FormatError("unknown gate op '" + op + "'");
            }
            c.gates.push_back(g);
        }
        c.inputs = j.at("inputs").get<std::vector<std::size_t>>();
        for (const json& oj : j.at("outputs")) {
            const auto pos = oj.at("position").get<std::size_t>();
            if (pos == 0) throw FormatError("positions are 1-based");
            c.outputs[pos - 1] = oj.at("gate").get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed circuit: ") + e.what());
    }
    validate(c);
    return c;
}

json to_json(const EncoderVerdict& v) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "encoder_verdict";
    j["encodes"] = v.encodes;
    j["membership"] = v.membership;
    j["injective"] = v.injective;
    j["dimension_match"] = v.dimension_match;
    j["inputs"] = v.inputs;
    j["image_rank"] = v.image_rank;
    j["dim_ker"] = v.kernel_dim;
    j["messages_tested"] = v.messages_tested;
    if (v.witness) {
        std::string w;
        std::string x;
        for (auto b : *v.witness) w += b ? '1' : '0';
        for (auto b : *v.witness_output) x += b ? '1' : '0';
        j["witness"] = {{"message", w}, {"output", x}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

json to_json(const LemmaReport& r) {
    json its = json::array();
    for (const LemmaIteration& it : r.iterations)
        its.push_back({{"t", it.t},
                       {"chosen_weight", it.chosen_weight},
                       {"min_weight", it.min_weight},
                       {"lightest_row", it.lightest_row},
                       {"is_lightest", it.is_lightest},
                       {"j_t", it.j_t},
                       {"prefix_ok", it.prefix_ok}});
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "valid_choices";
    j["N"] = r.N;
    j["iterations"] = its;
    j["finder_agrees"] = r.finder_agrees;
    j["pass"] = r.pass;
    j["first_violation"] = r.first_violation ? json(*r.first_violation) : json(nullptr);
    j["detail"] = r.detail;
    return j;
}

json to_json(const TheoremReport& r) {
    json checks = json::array();
    for (const ClaimCheck& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "counterexample_checks"},
            {"N", r.params.N},
            {"n", r.params.n},
            {"m", r.params.m},
            {"dim_ker_M", r.kernel_dim_M},
            {"dim_ker_A", r.kernel_dim_A},
            {"rank_without_rows", r.rank_without_rows},
            {"sum_k", r.sum_k},
            {"checks", checks},
            {"pass", r.pass}};
}

json to_json(const EnsembleResult& result, bool include_timing) {
    const EnsembleParams& p = result.params;
    json trials = json::array();
    for (const TrialOutcome& o : result.outcomes) {
        json t = {{"trial", o.trial},
                  {"rows", o.rows},
                  {"cols", o.cols},
                  {"dim_ker_M", o.dim_ker_M},
                  {"first_component", {{"rows", o.first_rows}, {"cols", o.first_cols}, {"dim_ker", o.first_dim_ker}}},
                  {"sum_k", o.sum_k},
                  {"components", o.components},
                  {"overcount", o.overcount},
                  {"restarts", o.restarts},
                  {"error", o.error ? json(*o.error) : json(nullptr)}};
        if (include_timing) t["elapsed_ms"] = o.elapsed_ms;
        trials.push_back(t);
    }
    const EnsembleSummary& s = result.summary;
    json excess = json::object();
    for (const auto& [d, count] : s.first_excess) excess[std::to_string(d)] = count;
    return {{"schema_version", kSchemaVersion},
            {"kind", "ensemble"},
            {"params", {{"n", p.n}, {"dv", p.dv}, {"dc", p.dc}, {"trials", p.trials}, {"seed", p.seed}}},
            {"trials", trials},
            {"summary",
             {{"completed", s.completed},
              {"failed", s.failed},
              {"overcount", s.overcount},
              {"undercount", s.undercount},
              {"overcount_fraction", s.overcount_fraction},
              {"threshold", s.threshold},
              {"threshold_note", "soft pass mark chosen for this tool, not a published figure"},
              {"meets_threshold", s.meets_threshold},
              {"first_minus_dim_ker", excess}}}};
}

ChoicePolicy m18_replay_policy() { return ChoicePolicy::scripted({0, 1, 2, 3, 4, 5, 6, 8}); }

namespace {

void trace_call(std::ostringstream& out, const CallRecord& call, const std::string& indent) {
    for (const StepRecord& s : call.steps) {
        out << indent << "step " << s.step << ": finder returns rows " << refs_text(s.rows)
            << " x cols {" << format_indices(s.cols) << "} (" << termination_name(s.termination)
            << "): " << to_string(s.kind) << '\n';
        if (s.removed) {
            out << indent << "  dependency " << refs_text(s.dependency) << " sums to zero on these columns";
            if (s.dependency_count > 1) out << " (" << s.dependency_count << " independent dependencies)";
            out << "; removed row " << ref_text(*s.removed) << '\n';
            if (s.synthesized)
                out << indent << "  added c*#" << *s.synthesized + 1
                    << " to the previous component and decomposed it again:\n";
            else
                out << indent << "  no previous component; the removed constraint is dropped\n";
        }
        for (const CallRecord& c : s.rebuilt) trace_call(out, c, indent + "    ");
    }
    if (!call.residual_rows.empty() || !call.residual_cols.empty())
        out << indent << "residual: rows " << refs_text(call.residual_rows) << " x cols {"
            << format_indices(call.residual_cols) << "}\n";
}

}  // namespace

std::string trace_text(const BitMatrix& input, const DecompositionReport& report) {
    std::ostringstream out;
    const std::size_t r = rank(input);
    out << "input: " << input.rows() << "x" << input.cols() << ", rank " << r << ", dim Ker "
        << input.cols() - r << '\n';
    out << "policy: " << report.policy.name();
    if (report.policy.kind == ChoicePolicy::Kind::scripted) {
        std::vector<std::size_t> s = report.policy.script;
        out << " [";
        for (std::size_t k = 0; k < s.size(); ++k) out << (k ? ", " : "") << s[k] + 1;
        out << "]";
    }
    if (report.policy.kind == ChoicePolicy::Kind::seeded_random) out << " (seed " << report.policy.seed << ")";
    out << '\n';
    trace_call(out, report.recursion_log, "");
    for (const SynthesizedConstraint& s : report.synthesized) {
        std::vector<std::size_t> support;
        for (std::size_t k = 0; k < s.row.size(); ++k)
            if (s.row[k]) support.push_back(k);
        out << "c*#" << s.id + 1 << " = sum of rows " << refs_text(s.sources)
            << " restricted to the previous component, support {" << format_indices(support) << "}\n";
    }
    out << "components:\n";
    for (std::size_t i = 0; i < report.components.size(); ++i) {
        const Component& c = report.components[i];
        out << "  " << i + 1 << ": " << to_string(c.kind) << ", rows " << refs_text(c.rows)
            << ", cols {" << format_indices(c.selection.col_ids) << "}, " << c.matrix.rows() << "x"
            << c.matrix.cols() << ", rank " << c.matrix.cols() - c.message_bits << ", k_" << i + 1
            << " = " << c.message_bits << '\n';
    }
    out << "sum k_i = " << report.sum_k << ", dim Ker = " << report.kernel_dim << ": "
        << to_string(report.verdict) << '\n';
    return out.str();
}

}  // namespace ldpc_audit
