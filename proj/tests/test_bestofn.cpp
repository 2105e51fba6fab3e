#include <doctest.h>

#include <saudit/bestofn.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

using namespace saudit;
using namespace saudit::bestofn;

namespace {

ScoreRecord rec(SamplerKind kind, double hyper, double tau, std::int64_t seed, double score) {
    return ScoreRecord{kind, hyper, tau, seed, score};
}

ConfigPool pool_of(SamplerKind kind, const std::vector<double>& scores) {
    ConfigPool pool;
    auto& configs = pool.samplers[kind];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        configs.push_back(PoolConfig{0.1, static_cast<double>(i), scores[i], 1});
    }
    return pool;
}

// RAII guard for the thread-budget env var.
struct ThreadEnv {
    explicit ThreadEnv(const char* value) {
        const char* old = std::getenv("SAMPLER_AUDIT_THREADS");
        had_ = old != nullptr;
        if (had_) saved_ = old;
        setenv("SAMPLER_AUDIT_THREADS", value, 1);
    }
    ~ThreadEnv() {
        if (had_) setenv("SAMPLER_AUDIT_THREADS", saved_.c_str(), 1);
        else unsetenv("SAMPLER_AUDIT_THREADS");
    }
    bool had_ = false;
    std::string saved_;
};

}  // namespace

TEST_SUITE("bestofn") {

TEST_CASE("aggregate_seeds averages per config and sorts deterministically") {
    const std::vector<ScoreRecord> records = {
        rec(SamplerKind::top_p, 0.9, 1.0, 0, 2.0),
        rec(SamplerKind::top_p, 0.9, 1.0, 1, 4.0),
        rec(SamplerKind::top_p, 0.8, 1.0, 0, 1.0),
        rec(SamplerKind::top_p, 0.8, 1.0, 1, 3.0),
        rec(SamplerKind::basic, 0.0, 0.5, 0, 5.0),
        rec(SamplerKind::basic, 0.0, 0.5, 1, 7.0),
    };
    const auto pool = aggregate_seeds(records);
    CHECK(pool.incomplete.empty());
    REQUIRE(pool.has(SamplerKind::top_p));
    REQUIRE(pool.has(SamplerKind::basic));
    CHECK_FALSE(pool.has(SamplerKind::min_p));

    const auto& top_p = pool.entries(SamplerKind::top_p);
    REQUIRE(top_p.size() == 2);
    CHECK(top_p[0].hyper == 0.8);  // sorted by (hyper, temperature)
    CHECK(top_p[0].score == 2.0);
    CHECK(top_p[0].seed_count == 2);
    CHECK(top_p[1].hyper == 0.9);
    CHECK(top_p[1].score == 3.0);

    CHECK_THROWS_AS(pool.entries(SamplerKind::min_p), UnknownSampler);
    CHECK_THROWS_AS(aggregate_seeds({}), EmptyInput);
}

TEST_CASE("duplicate seeds in one config are rejected") {
    const std::vector<ScoreRecord> records = {
        rec(SamplerKind::top_k, 5, 1.0, 0, 1.0),
        rec(SamplerKind::top_k, 5, 1.0, 0, 2.0),
    };
    CHECK_THROWS_AS(aggregate_seeds(records), DataError);
}

TEST_CASE("configs short of the table-wide seed count are flagged") {
    const std::vector<ScoreRecord> records = {
        rec(SamplerKind::top_k, 5, 1.0, 0, 1.0),
        rec(SamplerKind::top_k, 5, 1.0, 1, 2.0),
        rec(SamplerKind::top_k, 10, 1.0, 0, 3.0),  // missing seed 1
    };
    const auto pool = aggregate_seeds(records);
    REQUIRE(pool.incomplete.size() == 1);
    CHECK(pool.incomplete[0].find("top_k") != std::string::npos);
}

TEST_CASE("exact expected max matches the closed form") {
    const std::vector<double> scores = {0.2, 0.4, 0.6, 0.8};
    CHECK(std::abs(exact_expected_max(scores, 2) - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(exact_expected_max(scores, 1) - 0.5) < 1e-15);
    CHECK(exact_expected_max(scores, 4) == 0.8);

    CHECK_THROWS_AS(exact_expected_max(scores, 0), InvalidSubsetSize);
    CHECK_THROWS_AS(exact_expected_max(scores, 5), InvalidSubsetSize);
    CHECK_THROWS_AS(exact_expected_max({}, 1), EmptyInput);
    CHECK_THROWS_AS(exact_expected_max(std::vector<double>(21, 0.5), 1), InvalidSubsetSize);
}

TEST_CASE("monte carlo curve straddles the exact oracle") {
    const std::vector<double> scores = {0.05, 0.2, 0.35, 0.5, 0.7, 0.95};
    const auto pool = pool_of(SamplerKind::min_p, scores);
    const auto curve =
        best_of_n_curve(pool, SamplerKind::min_p, {1, 2, 3, 4, 5, 6}, 20000, 7);
    REQUIRE(curve.points.size() == 6);
    for (const auto& pt : curve.points) {
        const double exact = exact_expected_max(scores, pt.n);
        if (pt.n == 6) {
            CHECK(pt.expected_max == exact);  // whole pool: exact, no variance
            CHECK(pt.std_error == 0.0);
        } else {
            CHECK(pt.std_error > 0.0);
            CHECK(std::abs(pt.expected_max - exact) <= 4.0 * pt.std_error);
        }
    }
}

TEST_CASE("subset sizes beyond the pool clamp to the pool max") {
    const auto pool = pool_of(SamplerKind::basic, {1.0, 3.0, 2.0});
    const auto curve = best_of_n_curve(pool, SamplerKind::basic, {3, 10}, 50, 0);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points[0].expected_max == 3.0);
    CHECK(curve.points[0].std_error == 0.0);
    CHECK(curve.points[1].expected_max == 3.0);
    CHECK(curve.points[1].std_error == 0.0);
}

TEST_CASE("curves are bit-identical at any thread count") {
    std::vector<double> scores;
    for (int i = 0; i < 15; ++i) scores.push_back(std::sin(i * 1.7) * 2.0);
    const auto pool = pool_of(SamplerKind::top_p, scores);
    const std::vector<int> ns = {1, 3, 5, 8, 15};

    BestOfNCurve single, many;
    {
        ThreadEnv env("1");
        single = best_of_n_curve(pool, SamplerKind::top_p, ns, 5000, 3);
    }
    {
        ThreadEnv env("8");
        many = best_of_n_curve(pool, SamplerKind::top_p, ns, 5000, 3);
    }
    REQUIRE(single.points.size() == many.points.size());
    for (std::size_t i = 0; i < single.points.size(); ++i) {
        CHECK(single.points[i].expected_max == many.points[i].expected_max);
        CHECK(single.points[i].std_error == many.points[i].std_error);
    }
}

TEST_CASE("curves are reproducible per seed and differ across seeds") {
    const auto pool = pool_of(SamplerKind::top_k, {0.1, 0.9, 0.4, 0.6, 0.2});
    const auto a = best_of_n_curve(pool, SamplerKind::top_k, {2}, 500, 11);
    const auto b = best_of_n_curve(pool, SamplerKind::top_k, {2}, 500, 11);
    const auto c = best_of_n_curve(pool, SamplerKind::top_k, {2}, 500, 12);
    CHECK(a.points[0].expected_max == b.points[0].expected_max);
    CHECK(a.points[0].expected_max != c.points[0].expected_max);
}

TEST_CASE("diff curve matches the hand-computed two-pool example") {
    ConfigPool pool;
    pool.samplers[SamplerKind::min_p] = {PoolConfig{0.1, 1.0, 0.2, 1},
                                         PoolConfig{0.2, 1.0, 0.8, 1}};
    pool.samplers[SamplerKind::top_p] = {PoolConfig{0.9, 1.0, 0.5, 1},
                                         PoolConfig{0.95, 1.0, 0.6, 1}};

    // N = 1: E[target] - E[best other] = 0.5 - 0.55 = -0.05
    const auto loose = diff_curve(pool, SamplerKind::min_p, {1}, 200000, 5);
    REQUIRE(loose.points.size() == 1);
    CHECK(loose.points[0].std_error > 0.0);
    CHECK(std::abs(loose.points[0].expected_diff - (-0.05)) <= 4.0 * loose.points[0].std_error);

    // N = 2 covers both pools entirely: diff is the constant 0.8 - 0.6
    const auto tight = diff_curve(pool, SamplerKind::min_p, {2}, 100, 5);
    CHECK(std::abs(tight.points[0].expected_diff - 0.2) < 1e-15);
    CHECK(tight.points[0].std_error == 0.0);
}

TEST_CASE("diff curve needs a target and at least one other sampler") {
    const auto lonely = pool_of(SamplerKind::min_p, {0.5, 0.7});
    CHECK_THROWS_AS(diff_curve(lonely, SamplerKind::min_p, {1}, 10, 0), DataError);
    CHECK_THROWS_AS(diff_curve(lonely, SamplerKind::basic, {1}, 10, 0), UnknownSampler);
}

TEST_CASE("curve argument validation") {
    const auto pool = pool_of(SamplerKind::basic, {1.0, 2.0});
    CHECK_THROWS_AS(best_of_n_curve(pool, SamplerKind::basic, {}, 10, 0), EmptyInput);
    CHECK_THROWS_AS(best_of_n_curve(pool, SamplerKind::basic, {0}, 10, 0), InvalidSubsetSize);
    CHECK_THROWS_AS(best_of_n_curve(pool, SamplerKind::basic, {1}, 0, 0), DataError);
    CHECK_THROWS_AS(best_of_n_curve(pool, SamplerKind::top_k, {1}, 10, 0), UnknownSampler);
}

}  // TEST_SUITE
