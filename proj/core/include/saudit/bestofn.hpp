#pragma once

#include "saudit/errors.hpp"
#include "saudit/sampling.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace saudit::bestofn {

using sampling::SamplerKind;

// One sweep-table row: a (sampler, hyper, temperature, seed) cell's score.
// hyper is 0 for basic, which has no hyperparameter.
struct ScoreRecord {
    SamplerKind sampler = SamplerKind::basic;
    double hyper = 0.0;
    double temperature = 1.0;
    std::int64_t seed = 0;
    double score = 0.0;
};

// A sampler configuration after seed-averaging.
struct PoolConfig {
    double hyper = 0.0;
    double temperature = 1.0;
    double score = 0.0;
    int seed_count = 0;
};

// Seed-averaged configurations grouped by sampler, sorted by (hyper,
// temperature) for deterministic subset draws.
struct ConfigPool {
    std::map<SamplerKind, std::vector<PoolConfig>> samplers;
    // Configs whose seed count fell short of the table-wide maximum, as
    // "sampler hyper=H tau=T" labels, for reporting.
    std::vector<std::string> incomplete;

    bool has(SamplerKind kind) const { return samplers.count(kind) != 0; }

    // Throws UnknownSampler when the sampler is absent.
    const std::vector<PoolConfig>& entries(SamplerKind kind) const;
};

struct CurvePoint {
    int n = 0;
    double expected_max = 0.0;
    double std_error = 0.0;
    int repeats = 0;
};

struct BestOfNCurve {
    SamplerKind sampler = SamplerKind::basic;
    std::vector<CurvePoint> points;
};

struct DiffPoint {
    int n = 0;
    double expected_diff = 0.0;
    double std_error = 0.0;
    int repeats = 0;
};

struct DiffCurve {
    SamplerKind target = SamplerKind::min_p;
    std::vector<DiffPoint> points;
};

// Arithmetic mean over seeds per (sampler, hyper, temperature). Duplicate
// seeds within a config -> DataError; empty table -> EmptyInput. Configs with
// fewer seeds than the table-wide maximum are listed in `incomplete`.
ConfigPool aggregate_seeds(const std::vector<ScoreRecord>& records);

// Exact mean of max over all C(M, N) subsets via the order-statistic identity
// sum_k s_(k) * C(k-1, N-1) / C(M, N) on ascending sorted scores. Enumeration
// oracle; list length capped at 20.
double exact_expected_max(const std::vector<double>& scores, int n);

// Monte Carlo expected-max curve: for each N, `repeats` uniform subsets of
// size min(N, pool size) drawn without replacement. Each repeat's RNG stream
// is derived from (seed, sampler, N, repeat), and per-repeat maxima are
// reduced in repeat order, so curves are bit-identical at any thread count.
// N >= pool size short-circuits to the exact pool max with zero std error.
BestOfNCurve best_of_n_curve(const ConfigPool& pool, SamplerKind sampler,
                             const std::vector<int>& ns, int repeats, std::uint64_t seed);

// Per repeat: draw an independent size-min(N, pool) subset for every sampler;
// diff = target's subset max - max over the other samplers' subset maxima.
// Same stream derivation as best_of_n_curve, so subsets by sampler coincide.
// N covering every pool short-circuits to the constant gap with zero std error.
DiffCurve diff_curve(const ConfigPool& pool, SamplerKind target,
                     const std::vector<int>& ns, int repeats, std::uint64_t seed);

} // namespace saudit::bestofn
