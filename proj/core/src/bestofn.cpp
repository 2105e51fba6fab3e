#include "saudit/bestofn.hpp"

#include "saudit/parallel.hpp"
#include "saudit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace saudit::bestofn {

namespace {

constexpr std::size_t ENUMERATION_BOUND = 20;

std::string config_label(SamplerKind sampler, double hyper, double temperature) {
    std::ostringstream out;
    out << sampling::to_string(sampler) << " hyper=" << hyper << " tau=" << temperature;
    return out.str();
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result *= static_cast<double>(n - k + i);
        result /= static_cast<double>(i);
    }
    return result;
}

// One RNG stream per (seed, sampler, n, repeat): repeats are independent and
// schedule-free, and diff_curve reuses the same subsets per sampler.
std::uint64_t repeat_seed(std::uint64_t seed, SamplerKind sampler, int n, std::size_t repeat) {
    std::uint64_t s = rng::derive(seed, static_cast<std::uint64_t>(sampler) + 1);
    s = rng::derive(s, static_cast<std::uint64_t>(n));
    return rng::derive(s, repeat);
}

// Max score over a uniform without-replacement subset of size m, via a
// partial Fisher-Yates pass over the index scratch.
double subset_max(const std::vector<double>& scores, std::size_t m, rng::Stream& stream,
                  std::vector<std::uint32_t>& scratch) {
    const std::size_t pool = scores.size();
    scratch.resize(pool);
    std::iota(scratch.begin(), scratch.end(), 0u);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + stream.next_below(pool - i);
        std::swap(scratch[i], scratch[j]);
        best = std::max(best, scores[scratch[i]]);
    }
    return best;
}

std::vector<double> pool_scores(const ConfigPool& pool, SamplerKind sampler) {
    const auto& entries = pool.entries(sampler);
    std::vector<double> scores;
    scores.reserve(entries.size());
    for (const PoolConfig& c : entries) scores.push_back(c.score);
    return scores;
}

// Mean and standard error of the mean, folded in index order so results are
// independent of how the buffer was filled.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    return {mean, se};
}

void check_curve_args(const std::vector<int>& ns, int repeats) {
    if (repeats < 1) throw DataError("repeats must be >= 1");
    if (ns.empty()) throw EmptyInput("no subset sizes requested");
    for (int n : ns) {
        if (n < 1) throw InvalidSubsetSize("subset size must be >= 1");
    }
}

} // namespace

const std::vector<PoolConfig>& ConfigPool::entries(SamplerKind kind) const {
    const auto it = samplers.find(kind);
    if (it == samplers.end()) {
        throw UnknownSampler(std::string("sampler not in pool: ") + sampling::to_string(kind));
    }
    return it->second;
}

ConfigPool aggregate_seeds(const std::vector<ScoreRecord>& records) {
    if (records.empty()) throw EmptyInput("score table is empty");

    struct Cell {
        double sum = 0.0;
        std::set<std::int64_t> seeds;
    };
    std::map<std::tuple<int, double, double>, Cell> cells;
    for (const ScoreRecord& r : records) {
        if (!std::isfinite(r.score) || !std::isfinite(r.hyper) || !std::isfinite(r.temperature)) {
            throw DataError("non-finite value in score record " +
                            config_label(r.sampler, r.hyper, r.temperature));
        }
        Cell& cell = cells[{static_cast<int>(r.sampler), r.hyper, r.temperature}];
        if (!cell.seeds.insert(r.seed).second) {
            throw DataError("duplicate seed " + std::to_string(r.seed) + " for " +
                            config_label(r.sampler, r.hyper, r.temperature));
        }
        cell.sum += r.score;
    }

    std::size_t max_seeds = 0;
    for (const auto& [key, cell] : cells) max_seeds = std::max(max_seeds, cell.seeds.size());

    ConfigPool pool;
    for (const auto& [key, cell] : cells) {
        const auto [kind_int, hyper, temperature] = key;
        const auto kind = static_cast<SamplerKind>(kind_int);
        PoolConfig config;
        config.hyper = hyper;
        config.temperature = temperature;
        config.seed_count = static_cast<int>(cell.seeds.size());
        config.score = cell.sum / static_cast<double>(cell.seeds.size());
        pool.samplers[kind].push_back(config);
        if (cell.seeds.size() < max_seeds) {
            pool.incomplete.push_back(config_label(kind, hyper, temperature));
        }
    }
    // Map iteration over (sampler, hyper, temperature) keys already delivered
    // each sampler's configs sorted by (hyper, temperature).
    return pool;
}

double exact_expected_max(const std::vector<double>& scores, int n) {
    if (scores.empty()) throw EmptyInput("empty score pool");
    const std::size_t pool = scores.size();
    if (pool > ENUMERATION_BOUND) {
        throw InvalidSubsetSize("exact oracle is capped at " +
                                std::to_string(ENUMERATION_BOUND) + " scores");
    }
    if (n < 1 || static_cast<std::size_t>(n) > pool) {
        throw InvalidSubsetSize("subset size " + std::to_string(n) + " not in [1, " +
                                std::to_string(pool) + "]");
    }
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    // P(max = s_(k)) = C(k-1, n-1) / C(M, n) on ascending order statistics.
    const double total = binom(static_cast<int>(pool), n);
    double expected = 0.0;
    for (int k = n; k <= static_cast<int>(pool); ++k) {
        expected += sorted[static_cast<std::size_t>(k) - 1] * binom(k - 1, n - 1) / total;
    }
    return expected;
}

BestOfNCurve best_of_n_curve(const ConfigPool& pool, SamplerKind sampler,
                             const std::vector<int>& ns, int repeats, std::uint64_t seed) {
    check_curve_args(ns, repeats);
    const std::vector<double> scores = pool_scores(pool, sampler);

    BestOfNCurve curve;
    curve.sampler = sampler;
    std::vector<double> maxima;
    for (int n : ns) {
        CurvePoint point;
        point.n = n;
        point.repeats = repeats;
        const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(n), scores.size());
        if (m == scores.size()) {
            // Exhaustive subset: the max is certain.
            point.expected_max = *std::max_element(scores.begin(), scores.end());
            point.std_error = 0.0;
        } else {
            maxima.assign(static_cast<std::size_t>(repeats), 0.0);
            parallel_for(static_cast<std::size_t>(repeats), [&](std::size_t begin, std::size_t end) {
                std::vector<std::uint32_t> scratch;
                for (std::size_t r = begin; r < end; ++r) {
                    rng::Stream stream(repeat_seed(seed, sampler, n, r));
                    maxima[r] = subset_max(scores, m, stream, scratch);
                }
            });
            const auto [mean, se] = mean_and_stderr(maxima);
            point.expected_max = mean;
            point.std_error = se;
        }
        curve.points.push_back(point);
    }
    return curve;
}

DiffCurve diff_curve(const ConfigPool& pool, SamplerKind target,
                     const std::vector<int>& ns, int repeats, std::uint64_t seed) {
    check_curve_args(ns, repeats);
    const std::vector<double> target_scores = pool_scores(pool, target);
    std::vector<std::pair<SamplerKind, std::vector<double>>> others;
    for (const auto& [kind, entries] : pool.samplers) {
        if (kind == target) continue;
        others.emplace_back(kind, pool_scores(pool, kind));
    }
    if (others.empty()) throw DataError("diff curve needs at least one competing sampler");

    DiffCurve curve;
    curve.target = target;
    std::vector<double> diffs;
    for (int n : ns) {
        DiffPoint point;
        point.n = n;
        point.repeats = repeats;
        // Subsets covering every pool make the gap a constant; skip the RNG.
        bool exhaustive = static_cast<std::size_t>(n) >= target_scores.size();
        for (const auto& [kind, scores] : others) {
            exhaustive = exhaustive && static_cast<std::size_t>(n) >= scores.size();
        }
        if (exhaustive) {
            double other_best = -std::numeric_limits<double>::infinity();
            for (const auto& [kind, scores] : others) {
                other_best = std::max(other_best, *std::max_element(scores.begin(), scores.end()));
            }
            point.expected_diff =
                *std::max_element(target_scores.begin(), target_scores.end()) - other_best;
            point.std_error = 0.0;
            curve.points.push_back(point);
            continue;
        }
        diffs.assign(static_cast<std::size_t>(repeats), 0.0);
        parallel_for(static_cast<std::size_t>(repeats), [&](std::size_t begin, std::size_t end) {
            std::vector<std::uint32_t> scratch;
            for (std::size_t r = begin; r < end; ++r) {
                rng::Stream target_stream(repeat_seed(seed, target, n, r));
                const std::size_t target_m =
                    std::min<std::size_t>(static_cast<std::size_t>(n), target_scores.size());
                const double target_max = subset_max(target_scores, target_m, target_stream, scratch);
                double other_best = -std::numeric_limits<double>::infinity();
                for (const auto& [kind, scores] : others) {
                    rng::Stream stream(repeat_seed(seed, kind, n, r));
                    const std::size_t m =
                        std::min<std::size_t>(static_cast<std::size_t>(n), scores.size());
                    other_best = std::max(other_best, subset_max(scores, m, stream, scratch));
                }
                diffs[r] = target_max - other_best;
            }
        });
        const auto [mean, se] = mean_and_stderr(diffs);
        point.expected_diff = mean;
        point.std_error = se;
        curve.points.push_back(point);
    }
    return curve;
}

} // namespace saudit::bestofn
