// ldpc-audit: generate the counterexample family, run DECOMPOSE, build and
// check encoders, and sample random regular ensembles.
//
// Exit codes: 0 success, 2 a verification failed, 3 bad input.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ldpc_audit/circuit.hpp"
#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/decompose.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/experiments.hpp"
#include "ldpc_audit/gf2.hpp"
#include "ldpc_audit/matrix_io.hpp"
#include "ldpc_audit/peel.hpp"
#include "ldpc_audit/report.hpp"

namespace fs = std::filesystem;
using namespace ldpc_audit;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 2;
constexpr int kBadInput = 3;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("ldpc-audit");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("LDPC_AUDIT_LOG"))
        spdlog::set_level(spdlog::level::from_str(env));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw FormatError("cannot write " + out_path);
    f << text;
    spdlog::info("wrote {}", out_path);
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t v = 0;
        try {
            v = std::stoul(tok);
        } catch (const std::exception&) {
            throw PreconditionError("bad index '" + tok + "' in list");
        }
        if (v == 0) throw PreconditionError("indices are 1-based");
        out.push_back(v - 1);
    }
    return out;
}

ChoicePolicy make_policy(const std::string& name, std::uint64_t seed, const std::string& script) {
    if (name == "replay") return m18_replay_policy();
    if (name == "scripted") return ChoicePolicy::scripted(parse_index_list(script));
    return ChoicePolicy::parse(name, seed);
}

BitVector parse_bits(const std::string& s) {
    BitVector v;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw PreconditionError("message must be a string of 0/1");
        v.push_back(ch == '1');
    }
    return v;
}

std::string bits(const BitVector& v) {
    std::string s;
    for (auto b : v) s += b ? '1' : '0';
    return s;
}

struct GenerateArgs {
    std::size_t N = 1;
    std::string out;
    bool blocks = false;
    std::string format = "alist";
};

int cmd_generate(const GenerateArgs& a) {
    const auto p = CounterexampleParams::make(a.N);
    const MatrixFormat fmt = a.format == "dense" ? MatrixFormat::dense : MatrixFormat::alist;
    const BitMatrix m = build_Mn(a.N);
    if (a.out.empty()) {
        if (fmt == MatrixFormat::alist)
            write_alist(std::cout, m);
        else
            write_dense(std::cout, m);
    } else {
        write_matrix_file(a.out, m, fmt);
    }
    if (a.blocks) {
        if (a.out.empty()) throw PreconditionError("--blocks needs --out");
        const fs::path base(a.out);
        const std::string ext = base.extension().string();
        auto sibling = [&](const std::string& tag) {
            return base.parent_path() / (base.stem().string() + "_" + tag + ext);
        };
        write_matrix_file(sibling("A"), build_An(a.N), fmt);
        write_matrix_file(sibling("S"), build_Sn(a.N), fmt);
        write_matrix_file(sibling("D"), build_Dn(a.N), fmt);
        write_matrix_file(sibling("B"), build_Bn(a.N), fmt);
    }
    spdlog::info("generated {}x{} matrix for N={}", p.m, p.n, a.N);
    return kOk;
}

struct DecomposeArgs {
    std::string in;
    std::string policy = "in-order";
    std::uint64_t seed = 0;
    std::string script;
    std::string removal = "lowest";
    std::size_t depth_limit = 32;
    bool json = false;
    std::string out;
};

DecomposeOptions options_from(const DecomposeArgs& a) {
    DecomposeOptions o;
    o.policy = make_policy(a.policy, a.seed, a.script);
    if (a.removal != "lowest" && a.removal != "highest")
        throw PreconditionError("--removal must be lowest or highest");
    o.removal = a.removal == "lowest" ? RemovalPolicy::lowest : RemovalPolicy::highest;
    o.depth_limit = a.depth_limit;
    if (o.policy.kind == ChoicePolicy::Kind::seeded_random) std::cerr << "seed: " << a.seed << '\n';
    return o;
}

int cmd_decompose(const DecomposeArgs& a) {
    const BitMatrix m = read_matrix_file(a.in);
    const DecompositionReport rep = decompose(m, options_from(a));
    emit(a.json ? to_json(rep, m).dump(2) + "\n" : trace_text(m, rep), a.out);
    return kOk;
}

int cmd_trace_m18(const DecomposeArgs& a) {
    const BitMatrix m = build_Mn(1);
    const DecompositionReport rep = decompose(m, options_from(a));
    emit(a.json ? to_json(rep, m).dump(2) + "\n" : trace_text(m, rep), a.out);
    return kOk;
}

struct VerifyArgs {
    std::optional<std::size_t> N;
    std::string in;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.N.has_value() == !a.in.empty()) throw PreconditionError("give exactly one of --N and --in");
    if (a.N) {
        const TheoremReport th = verify_theorem(*a.N);
        const LemmaReport lm = verify_lemma_valid_choices(*a.N);
        if (a.json) {
            std::cout << nlohmann::json{{"checks", to_json(th)}, {"valid_choices", to_json(lm)}}.dump(2) << '\n';
        } else {
            for (const ClaimCheck& c : th.checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            std::cout << (lm.pass ? "PASS " : "FAIL ") << "valid-choices: "
                      << (lm.pass ? "row t is a lightest row at every iteration t <= 4N+1" : lm.detail)
                      << '\n';
        }
        return th.pass && lm.pass ? kOk : kVerifyFailed;
    }
    const BitMatrix m = read_matrix_file(a.in);
    const DecompositionReport rep = decompose(m);
    const EncoderBuild enc = build_encoder(m, rep);
    const bool small = enc.circuit.input_count() <= 20;
    if (!small) std::cerr << "seed: " << a.seed << '\n';
    const EncoderVerdict v = verify_encoder(
        m, enc.circuit, small ? VerifyMode::exhaustive() : VerifyMode::sampled(a.samples, a.seed));
    if (a.json) {
        std::cout << to_json(v).dump(2) << '\n';
    } else {
        std::cout << "inputs " << v.inputs << ", dim Ker " << v.kernel_dim << ", image rank "
                  << v.image_rank << '\n';
        std::cout << (v.encodes ? "PASS" : "FAIL") << " encoder image equals Ker(M)\n";
        if (v.witness)
            std::cout << "witness message " << bits(*v.witness) << " -> " << bits(*v.witness_output)
                      << " (not a codeword)\n";
    }
    return v.encodes ? kOk : kVerifyFailed;
}

struct EncodeArgs {
    std::string in;
    std::string message;
    bool force = false;
    std::string circuit_out;
};

int cmd_encode(const EncodeArgs& a) {
    const BitMatrix m = read_matrix_file(a.in);
    Circuit circuit;
    if (is_pseudo_tree(m)) {
        circuit = build_circuit(schedule_pseudo_tree(m, SubSelection::all(m)));
    } else {
        if (!a.force) {
            const PeelTrace t = strip(m);
            throw PreconditionError(
                "the matrix is not a pseudo-tree: rows {" + format_indices(t.survivors.row_ids) +
                "} x cols {" + format_indices(t.survivors.col_ids) +
                "} survive peeling and form a (P)ESS, so no greedy schedule exists; "
                "pass --force to encode through DECOMPOSE");
        }
        circuit = build_encoder(m, decompose(m)).circuit;
    }
    if (!a.circuit_out.empty()) emit(to_json(circuit).dump(2) + "\n", a.circuit_out);
    if (a.message.empty()) {
        std::cout << "circuit: " << circuit.size() << " gates, " << circuit.input_count() << " inputs\n";
        return kOk;
    }
    const BitVector msg = parse_bits(a.message);
    if (msg.size() != circuit.input_count())
        throw PreconditionError("message has " + std::to_string(msg.size()) + " bits, encoder takes " +
                                std::to_string(circuit.input_count()));
    const BitVector x = evaluate(circuit, msg);
    const bool ok = in_kernel(m, x);
    std::cout << bits(x) << '\n';
    std::cout << "M x = 0: " << (ok ? "yes" : "no") << '\n';
    return ok ? kOk : kVerifyFailed;
}

struct ExperimentArgs {
    EnsembleParams params;
    std::string out;
    bool json = false;
    bool timing = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    std::cerr << "seed: " << a.params.seed << '\n';
    const EnsembleResult r = run_ensemble(a.params);
    if (!a.out.empty()) emit(to_csv(r, a.timing), a.out);
    for (const TrialOutcome& o : r.outcomes)
        if (o.error) spdlog::warn("trial {} failed: {}", o.trial, *o.error);
    if (a.json) {
        std::cout << to_json(r, a.timing).dump(2) << '\n';
    } else {
        const EnsembleSummary& s = r.summary;
        std::cout << "trials " << s.completed << " completed, " << s.failed << " failed\n";
        std::cout << "overcount " << s.overcount << "/" << s.completed << " = " << s.overcount_fraction
                  << " (pass mark " << s.threshold << ", chosen for this tool)\n";
        std::cout << "first component dim Ker - dim Ker(M):";
        for (const auto& [d, c] : s.first_excess) std::cout << ' ' << d << "x" << c;
        std::cout << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"LDPC encoder audit: counterexamples, DECOMPOSE and encoder checks"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write the counterexample matrix for odd N");
    g->add_option("--N", gen.N, "odd family parameter")->required();
    g->add_option("--out", gen.out, "output file (default stdout)");
    g->add_flag("--blocks", gen.blocks, "also write the A, S, D and B blocks next to --out");
    g->add_option("--format", gen.format, "alist or dense")->check(CLI::IsMember({"alist", "dense"}));

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "run DECOMPOSE on a matrix file");
    d->add_option("--in", dec.in, "matrix file (alist or dense)")->required()->check(CLI::ExistingFile);
    d->add_option("--policy", dec.policy, "in-order, lightest-first, random or scripted");
    d->add_option("--seed", dec.seed, "seed for --policy random");
    d->add_option("--script", dec.script, "comma-separated 1-based rows for --policy scripted");
    d->add_option("--removal", dec.removal, "lowest or highest dependency row to remove");
    d->add_option("--depth-limit", dec.depth_limit, "maximum nesting of rebuilt components");
    d->add_flag("--json", dec.json, "JSON report instead of text");
    d->add_option("--out", dec.out, "write the report to a file");

    DecomposeArgs tr;
    tr.policy = "replay";
    auto* t = app.add_subcommand("trace-m18", "step-by-step DECOMPOSE run on the 9x18 instance");
    t->add_option("--policy", tr.policy, "replay (default), in-order, lightest-first, random or scripted");
    t->add_option("--seed", tr.seed, "seed for --policy random");
    t->add_option("--script", tr.script, "rows for --policy scripted");
    t->add_flag("--json", tr.json, "JSON report instead of text");
    t->add_option("--out", tr.out, "write the report to a file");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "check the counterexample claims or an encoder");
    v->add_option("--N", ver.N, "check the family member for this N");
    v->add_option("--in", ver.in, "decompose this matrix and verify its encoder")->check(CLI::ExistingFile);
    v->add_option("--samples", ver.samples, "random messages when the encoder has more than 20 inputs");
    v->add_option("--seed", ver.seed, "seed for sampled verification");
    v->add_flag("--json", ver.json, "JSON output");

    EncodeArgs enc;
    auto* e = app.add_subcommand("encode", "encode a message with the greedy circuit");
    e->add_option("--in", enc.in, "matrix file")->required()->check(CLI::ExistingFile);
    e->add_option("--message", enc.message, "message bits, e.g. 0110");
    e->add_flag("--force", enc.force, "encode non-pseudo-trees through DECOMPOSE");
    e->add_option("--circuit-out", enc.circuit_out, "write the circuit as JSON");

    ExperimentArgs ex;
    auto* x = app.add_subcommand("experiment", "decompose random regular matrices");
    x->add_option("--n", ex.params.n, "columns");
    x->add_option("--trials", ex.params.trials, "number of trials");
    x->add_option("--seed", ex.params.seed, "base seed");
    x->add_option("--dv", ex.params.dv, "column weight");
    x->add_option("--dc", ex.params.dc, "row weight");
    x->add_option("--threads", ex.params.threads, "worker threads (output does not depend on it)");
    x->add_option("--out", ex.out, "write one CSV line per trial");
    x->add_flag("--json", ex.json, "JSON output");
    x->add_flag("--timing", ex.timing, "include elapsed times (not reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*d) return cmd_decompose(dec);
        if (*t) return cmd_trace_m18(tr);
        if (*v) return cmd_verify(ver);
        if (*e) return cmd_encode(enc);
        if (*x) return cmd_experiment(ex);
    } catch (const DepthLimitError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kVerifyFailed;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kBadInput;
    }
    return kOk;
}
