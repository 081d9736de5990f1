// Python extension `ldpc_audit._core`. Matrices cross the boundary as lists
// of '0'/'1' strings; reports cross as JSON text and are decoded by the
// package's __init__.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ldpc_audit/circuit.hpp"
#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/decompose.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/experiments.hpp"
#include "ldpc_audit/gf2.hpp"
#include "ldpc_audit/matrix_io.hpp"
#include "ldpc_audit/report.hpp"

namespace py = pybind11;
using namespace ldpc_audit;

namespace {

using Rows = std::vector<std::string>;

BitMatrix to_matrix(const Rows& rows, std::size_t cols) {
    if (rows.empty()) return BitMatrix(0, cols);
    return BitMatrix::from_strings(std::span<const std::string>(rows));
}

Rows to_rows(const BitMatrix& m) {
    Rows out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::string s(m.cols(), '0');
        for (std::size_t j : m.row_support(i)) s[j] = '1';
        out.push_back(std::move(s));
    }
    return out;
}

BitMatrix block(std::size_t N, const std::string& name) {
    if (name == "M") return build_Mn(N);
    if (name == "A") return build_An(N);
    if (name == "S") return build_Sn(N);
    if (name == "D") return build_Dn(N);
    if (name == "B") return build_Bn(N);
    if (name == "tail") return build_tail(N);
    throw PreconditionError("unknown block '" + name + "' (expected M, A, S, D, B or tail)");
}

DecomposeOptions options(const std::string& policy, std::uint64_t seed, const std::string& removal,
                         std::size_t depth_limit) {
    DecomposeOptions o;
    o.policy = policy == "replay" ? m18_replay_policy() : ChoicePolicy::parse(policy, seed);
    if (removal == "lowest") {
        o.removal = RemovalPolicy::lowest;
    } else if (removal == "highest") {
        o.removal = RemovalPolicy::highest;
    } else {
        throw PreconditionError("unknown removal policy '" + removal + "'");
    }
    o.depth_limit = depth_limit;
    return o;
}

Circuit encoder_for(const BitMatrix& m, bool force) {
    if (is_pseudo_tree(m)) return build_circuit(schedule_pseudo_tree(m, SubSelection::all(m)));
    if (!force)
        throw PreconditionError(
            "the matrix is not a pseudo-tree, so no greedy schedule exists; pass force=True to "
            "encode through DECOMPOSE");
    return build_encoder(m, decompose(m)).circuit;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "GF(2) decomposition and encoder audit core";

    auto base = py::register_exception<Error>(mod, "Error");
    py::register_exception<DimensionError>(mod, "DimensionError", base.ptr());
    py::register_exception<IndexError>(mod, "IndexError", base.ptr());
    py::register_exception<PreconditionError>(mod, "PreconditionError", base.ptr());
    py::register_exception<FormatError>(mod, "FormatError", base.ptr());
    py::register_exception<DepthLimitError>(mod, "DepthLimitError", base.ptr());
    py::register_exception<WiringError>(mod, "WiringError", base.ptr());

    mod.def("build", [](std::size_t N, const std::string& name) { return to_rows(block(N, name)); },
            py::arg("N"), py::arg("block") = "M",
            "Counterexample matrix (or one of its blocks) as row strings.");

    mod.def("rank", [](const Rows& rows) { return rank(to_matrix(rows, 0)); }, py::arg("rows"));
    mod.def("kernel_dim", [](const Rows& rows, std::size_t cols) {
                const BitMatrix m = to_matrix(rows, cols);
                return m.cols() - rank(m);
            },
            py::arg("rows"), py::arg("cols") = 0);

    mod.def("read_matrix", [](const std::string& path) { return to_rows(read_matrix_file(path)); },
            py::arg("path"));
    mod.def("write_matrix",
            [](const std::string& path, const Rows& rows, const std::string& format) {
                if (format != "alist" && format != "dense")
                    throw PreconditionError("unknown format '" + format + "'");
                write_matrix_file(path, to_matrix(rows, 0),
                                  format == "alist" ? MatrixFormat::alist : MatrixFormat::dense);
            },
            py::arg("path"), py::arg("rows"), py::arg("format") = "alist");

    mod.def("decompose_json",
            [](const Rows& rows, const std::string& policy, std::uint64_t seed,
               const std::string& removal, std::size_t depth_limit) {
                const BitMatrix m = to_matrix(rows, 0);
                return to_json(decompose(m, options(policy, seed, removal, depth_limit)), m).dump();
            },
            py::arg("rows"), py::arg("policy") = "in-order", py::arg("seed") = 0,
            py::arg("removal") = "lowest", py::arg("depth_limit") = 32);

    mod.def("trace_text",
            [](const Rows& rows, const std::string& policy, std::uint64_t seed) {
                const BitMatrix m = to_matrix(rows, 0);
                return trace_text(m, decompose(m, options(policy, seed, "lowest", 32)));
            },
            py::arg("rows"), py::arg("policy") = "in-order", py::arg("seed") = 0);

    mod.def("verify_theorem_json", [](std::size_t N) { return to_json(verify_theorem(N)).dump(); },
            py::arg("N"));
    mod.def("verify_lemma_json",
            [](std::size_t N) { return to_json(verify_lemma_valid_choices(N)).dump(); }, py::arg("N"));

    mod.def("encode",
            [](const Rows& rows, const std::vector<std::uint8_t>& message, bool force) {
                const BitMatrix m = to_matrix(rows, 0);
                return evaluate(encoder_for(m, force), message);
            },
            py::arg("rows"), py::arg("message"), py::arg("force") = false);

    mod.def("verify_encoder_json",
            [](const Rows& rows, bool force, std::size_t samples, std::uint64_t seed) {
                const BitMatrix m = to_matrix(rows, 0);
                const Circuit c = encoder_for(m, force);
                const VerifyMode mode =
                    samples == 0 ? VerifyMode::exhaustive() : VerifyMode::sampled(samples, seed);
                return to_json(verify_encoder(m, c, mode)).dump();
            },
            py::arg("rows"), py::arg("force") = true, py::arg("samples") = 0, py::arg("seed") = 0);

    mod.def("ensemble_json",
            [](std::size_t n, std::size_t trials, std::uint64_t seed, std::size_t dv, std::size_t dc,
               std::size_t threads) {
                EnsembleParams p;
                p.n = n;
                p.trials = trials;
                p.seed = seed;
                p.dv = dv;
                p.dc = dc;
                p.threads = threads;
                py::gil_scoped_release unlocked;
                return to_json(run_ensemble(p)).dump();
            },
            py::arg("n") = 300, py::arg("trials") = 50, py::arg("seed") = 42, py::arg("dv") = 3,
            py::arg("dc") = 6, py::arg("threads") = 1);

    mod.attr("SCHEMA_VERSION") = kSchemaVersion;
}
