// Microbenchmarks for the hot paths: the truncation pipeline, seeded draws,
// the t survival function, subset-max Monte Carlo, and harness generation.

#include "saudit/bestofn.hpp"
#include "saudit/ngram.hpp"
#include "saudit/rng.hpp"
#include "saudit/sampling.hpp"
#include "saudit/stats.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

namespace {

using namespace saudit;

sampling::LogitVector random_logits(std::size_t vocab, std::uint64_t seed) {
    rng::Stream gen(seed);
    sampling::LogitVector logits;
    logits.values.reserve(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        logits.values.push_back(-10.0 + 20.0 * gen.next_unit());
    }
    return logits;
}

void bm_token_distribution(benchmark::State& state, const sampling::SamplerConfig& config) {
    const auto logits = random_logits(static_cast<std::size_t>(state.range(0)), 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampling::token_distribution(config, logits));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_basic(benchmark::State& state) {
    bm_token_distribution(state, sampling::SamplerConfig::make_basic(0.8));
}
void bm_top_k(benchmark::State& state) {
    bm_token_distribution(state, sampling::SamplerConfig::make_top_k(40, 0.8));
}
void bm_top_p(benchmark::State& state) {
    bm_token_distribution(state, sampling::SamplerConfig::make_top_p(0.9, 0.8));
}
void bm_min_p(benchmark::State& state) {
    bm_token_distribution(state, sampling::SamplerConfig::make_min_p(0.05, 0.8));
}

void bm_sample_draw(benchmark::State& state) {
    const auto logits = random_logits(static_cast<std::size_t>(state.range(0)), 17);
    const auto config = sampling::SamplerConfig::make_min_p(0.05, 0.8);
    std::uint64_t draw = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampling::sample(config, logits, 7, draw++));
    }
}

void bm_student_t_sf(benchmark::State& state) {
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::student_t_sf(0.05 + t, 52));
        t = t < 4.0 ? t + 0.25 : 0.0;
    }
}

void bm_exact_expected_max(benchmark::State& state) {
    rng::Stream gen(3);
    std::vector<double> scores;
    for (int i = 0; i < 20; ++i) scores.push_back(gen.next_unit());
    for (auto _ : state) {
        benchmark::DoNotOptimize(bestofn::exact_expected_max(scores, 10));
    }
}

void bm_best_of_n_point(benchmark::State& state) {
    rng::Stream gen(11);
    bestofn::ConfigPool pool;
    auto& configs = pool.samplers[sampling::SamplerKind::min_p];
    for (int i = 0; i < 200; ++i) {
        bestofn::PoolConfig config;
        config.hyper = 0.05;
        config.temperature = 0.01 * (i + 1);
        config.score = gen.next_unit();
        config.seed_count = 1;
        configs.push_back(config);
    }
    const std::vector<int> ns = {static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bestofn::best_of_n_curve(pool, sampling::SamplerKind::min_p, ns, 1000, 5));
    }
}

void bm_generate(benchmark::State& state) {
    std::string corpus;
    for (int i = 0; i < 40; ++i) {
        corpus += "the quick brown fox jumps over the lazy dog\n";
        corpus += "pack my box with five dozen liquor jugs\n";
    }
    const auto model = harness::NGramModel::build(corpus, 3, 0.5);
    const auto config = sampling::SamplerConfig::make_top_p(0.9, 1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::generate(model, config, seed++, "the ", 200));
    }
}

} // namespace

BENCHMARK(bm_basic)->Arg(128)->Arg(1024)->Arg(8192);
BENCHMARK(bm_top_k)->Arg(128)->Arg(1024)->Arg(8192);
BENCHMARK(bm_top_p)->Arg(128)->Arg(1024)->Arg(8192);
BENCHMARK(bm_min_p)->Arg(128)->Arg(1024)->Arg(8192);
BENCHMARK(bm_sample_draw)->Arg(1024);
BENCHMARK(bm_student_t_sf);
BENCHMARK(bm_exact_expected_max);
BENCHMARK(bm_best_of_n_point)->Arg(5)->Arg(50);
BENCHMARK(bm_generate);

BENCHMARK_MAIN();
