#include "ldpc_audit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ldpc_audit/decompose.hpp"
#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"

namespace ldpc_audit {

void EnsembleParams::validate() const {
    if (n == 0 || dv == 0 || dc == 0) throw PreconditionError("n, dv and dc must be positive");
    if ((n * dv) % dc != 0)
        throw PreconditionError("n*dv = " + std::to_string(n * dv) + " is not divisible by dc = " +
                                std::to_string(dc));
    if (dv > 3) throw PreconditionError("dv must be at most 3");
    if (dv > rows()) throw PreconditionError("dv exceeds the number of rows");
    if (dc > n) throw PreconditionError("dc exceeds the number of columns");
}

namespace {

using Edge = std::pair<std::size_t, std::size_t>;  // (variable, check)

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    return std::mt19937_64(seq);
}

/// One configuration-model draw followed by swap repair. Returns false when
/// duplicates remain after the allowed rounds.
bool draw(const EnsembleParams& p, std::mt19937_64& rng, std::vector<Edge>& edges) {
    const std::size_t m = p.rows();
    std::vector<std::size_t> var_sockets;
    var_sockets.reserve(p.n * p.dv);
    for (std::size_t v = 0; v < p.n; ++v)
        for (std::size_t k = 0; k < p.dv; ++k) var_sockets.push_back(v);
    std::shuffle(var_sockets.begin(), var_sockets.end(), rng);

    edges.clear();
    for (std::size_t s = 0; s < var_sockets.size(); ++s) edges.emplace_back(var_sockets[s], s / p.dc);

    std::unordered_map<std::size_t, std::size_t> count;
    auto key = [m](const Edge& e) { return e.first * m + e.second; };
    for (const Edge& e : edges) ++count[key(e)];

    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    for (std::size_t round = 0; round < p.max_swap_rounds; ++round) {
        bool any = false;
        for (std::size_t a = 0; a < edges.size(); ++a) {
            if (count[key(edges[a])] < 2) continue;
            any = true;
            const std::size_t b = pick(rng);
            auto [v1, c1] = edges[a];
            auto [v2, c2] = edges[b];
            if (v1 == v2 || c1 == c2) continue;
            const Edge n1{v2, c1};
            const Edge n2{v1, c2};
            if (count[key(n1)] > 0 || count[key(n2)] > 0) continue;
            --count[key(edges[a])];
            --count[key(edges[b])];
            edges[a] = n1;
            edges[b] = n2;
            ++count[key(n1)];
            ++count[key(n2)];
        }
        if (!any) return true;
    }
    return std::ranges::all_of(edges, [&](const Edge& e) { return count[key(e)] == 1; });
}

}  // namespace

BitMatrix sample_regular(const EnsembleParams& params, std::size_t trial, std::size_t* restarts) {
    params.validate();
    auto rng = trial_rng(params.seed, trial);
    std::vector<Edge> edges;
    for (std::size_t attempt = 0; attempt <= params.max_restarts; ++attempt) {
        if (draw(params, rng, edges)) {
            if (restarts != nullptr) *restarts = attempt;
            BitMatrix m(params.rows(), params.n);
            for (const auto& [v, c] : edges) m.set(c, v);
            return m;
        }
    }
    throw Error("could not draw a simple regular graph for trial " + std::to_string(trial) +
                " after " + std::to_string(params.max_restarts) + " restarts");
}

TrialOutcome analyse_trial(const BitMatrix& m, std::size_t trial) {
    TrialOutcome o;
    o.trial = trial;
    o.rows = m.rows();
    o.cols = m.cols();
    const DecompositionReport rep = decompose(m);
    o.dim_ker_M = rep.kernel_dim;
    o.sum_k = rep.sum_k;
    o.components = rep.components.size();
    o.overcount = rep.verdict == Verdict::overcount;
    if (!rep.components.empty()) {
        const Component& first = rep.components.front();
        o.first_rows = first.matrix.rows();
        o.first_cols = first.matrix.cols();
        o.first_dim_ker = first.message_bits;
    }
    return o;
}

EnsembleResult run_ensemble(const EnsembleParams& params, const MatrixSampler& sampler) {
    if (!sampler) params.validate();
    EnsembleResult result;
    result.params = params;
    result.outcomes.resize(params.trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < params.trials; t = next++) {
            const auto start = std::chrono::steady_clock::now();
            TrialOutcome o;
            try {
                std::size_t restarts = 0;
                const BitMatrix m = sampler ? sampler(params, t) : sample_regular(params, t, &restarts);
                o = analyse_trial(m, t);
                o.restarts = restarts;
            } catch (const Error& e) {
                o.trial = t;
                o.error = e.what();
            }
            o.elapsed_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
            result.outcomes[t] = std::move(o);
        }
    };
    const std::size_t nthreads = std::clamp<std::size_t>(params.threads, 1, std::max<std::size_t>(params.trials, 1));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    }

    EnsembleSummary& s = result.summary;
    for (const TrialOutcome& o : result.outcomes) {
        if (o.error) {
            ++s.failed;
            continue;
        }
        ++s.completed;
        if (o.overcount) ++s.overcount;
        if (o.sum_k < o.dim_ker_M) ++s.undercount;
        ++s.first_excess[static_cast<long long>(o.first_dim_ker) -
                         static_cast<long long>(o.dim_ker_M)];
    }
    s.overcount_fraction =
        s.completed == 0 ? 0.0 : static_cast<double>(s.overcount) / static_cast<double>(s.completed);
    s.meets_threshold = s.completed > 0 && s.overcount_fraction >= s.threshold;
    return result;
}

std::string to_csv(const EnsembleResult& result, bool include_timing) {
    std::ostringstream out;
    out << "trial,rows,cols,dim_ker_M,first_rows,first_cols,first_dim_ker,sum_k,components,"
           "overcount,restarts,error";
    if (include_timing) out << ",elapsed_ms";
    out << '\n';
    for (const TrialOutcome& o : result.outcomes) {
        out << o.trial << ',' << o.rows << ',' << o.cols << ',' << o.dim_ker_M << ','
            << o.first_rows << ',' << o.first_cols << ',' << o.first_dim_ker << ',' << o.sum_k
            << ',' << o.components << ',' << (o.overcount ? 1 : 0) << ',' << o.restarts << ','
            << '"' << o.error.value_or("") << '"';
        if (include_timing) out << ',' << o.elapsed_ms;
        out << '\n';
    }
    return out.str();
}

}  // namespace ldpc_audit
