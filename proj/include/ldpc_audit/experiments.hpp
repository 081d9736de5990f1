#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"

namespace ldpc_audit {

struct EnsembleParams {
    std::size_t n = 300;
    std::size_t dv = 3;
    std::size_t dc = 6;
    std::size_t trials = 50;
    std::uint64_t seed = 42;
    /// Worker threads; results do not depend on it.
    std::size_t threads = 1;
    /// Re-pairing passes before a whole trial is resampled.
    std::size_t max_swap_rounds = 200;
    /// Whole-trial resamples before giving up.
    std::size_t max_restarts = 50;

    [[nodiscard]] std::size_t rows() const { return dc == 0 ? 0 : n * dv / dc; }
    /// Throws PreconditionError on n*dv not divisible by dc, dv > 3, or a
    /// degree too large for a simple graph.
    void validate() const;
};

/// Configuration-model (dv, dc)-regular matrix for one trial; the generator
/// is seeded from (seed, trial) only. Duplicate edges are removed by random
/// endpoint swaps; `restarts` receives how often the trial was resampled.
BitMatrix sample_regular(const EnsembleParams& params, std::size_t trial,
                         std::size_t* restarts = nullptr);

struct TrialOutcome {
    std::size_t trial = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t dim_ker_M = 0;
    std::size_t first_rows = 0;
    std::size_t first_cols = 0;
    /// cols - rank of the first component.
    std::size_t first_dim_ker = 0;
    std::size_t sum_k = 0;
    std::size_t components = 0;
    bool overcount = false;
    std::size_t restarts = 0;
    double elapsed_ms = 0.0;
    /// Set when the trial failed; such trials are excluded from the summary.
    std::optional<std::string> error;
};

struct EnsembleSummary {
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::size_t overcount = 0;
    std::size_t undercount = 0;
    double overcount_fraction = 0.0;
    /// Soft pass mark for the overcount fraction. Not taken from any source;
    /// chosen for this tool.
    double threshold = 0.8;
    bool meets_threshold = false;
    /// first_dim_ker - dim_ker_M -> number of trials.
    std::map<long long, std::size_t> first_excess;
};

struct EnsembleResult {
    EnsembleParams params;
    std::vector<TrialOutcome> outcomes;
    EnsembleSummary summary;
};

using MatrixSampler = std::function<BitMatrix(const EnsembleParams&, std::size_t trial)>;

/// Samples, decomposes (in-order) and records every trial. Trials run on
/// `params.threads` workers and are merged in trial order. A custom sampler
/// replaces sample_regular (e.g. to inject a fixed matrix).
EnsembleResult run_ensemble(const EnsembleParams& params, const MatrixSampler& sampler = {});

/// Decomposes one matrix and fills an outcome.
TrialOutcome analyse_trial(const BitMatrix& m, std::size_t trial);

/// One line per trial. Elapsed time is included only on request, so the
/// default output is reproducible byte for byte.
std::string to_csv(const EnsembleResult& result, bool include_timing = false);

}  // namespace ldpc_audit
