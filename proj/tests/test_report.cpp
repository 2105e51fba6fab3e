#include <doctest.h>

#include "saudit/errors.hpp"
#include "saudit/io.hpp"
#include "saudit/report.hpp"
#include "test_util.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace saudit;
using sampling::SamplerKind;

namespace {

csvio::HumanEvalRow row(const std::string& pid, SamplerKind kind, double tau,
                        const std::string& metric, double score) {
    csvio::HumanEvalRow r;
    r.participant_id = pid;
    r.sampler = kind;
    r.temperature = tau;
    r.diversity_setting = "default";
    r.metric = metric;
    r.score = score;
    return r;
}

// One complete (metric, tau) cell for min_p vs basic.
std::vector<csvio::HumanEvalRow> paired_cell(const std::string& metric, double tau,
                                             const std::vector<double>& minp,
                                             const std::vector<double>& basic) {
    std::vector<csvio::HumanEvalRow> rows;
    for (std::size_t i = 0; i < minp.size(); ++i) {
        rows.push_back(row("p" + std::to_string(i), SamplerKind::min_p, tau, metric, minp[i]));
    }
    for (std::size_t i = 0; i < basic.size(); ++i) {
        rows.push_back(row("p" + std::to_string(i), SamplerKind::basic, tau, metric, basic[i]));
    }
    return rows;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("fnv1a64_hex matches the reference vectors") {
    CHECK(report::fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(report::fnv1a64_hex("hello") == "a430d84680aabd0b");
    CHECK(report::fnv1a64_hex("hello") != report::fnv1a64_hex("hellp"));
    CHECK(report::fnv1a64_hex(std::string(1, '\0')).size() == 16);
}

TEST_CASE("alpha_suffix produces JSON-key-safe spellings") {
    CHECK(report::alpha_suffix(0.05) == "05");
    CHECK(report::alpha_suffix(0.01) == "01");
    CHECK(report::alpha_suffix(0.001) == "001");
    CHECK(report::alpha_suffix(0.1) == "1");
    CHECK(report::alpha_suffix(1.5) == "1_5");
}

TEST_CASE("digest_file hashes the exact bytes") {
    testutil::ScratchDir scratch;
    const std::string path = scratch.file("input.txt");
    io::write_text_file(path, "hello");
    const report::InputDigest digest = report::digest_file(path);
    CHECK(digest.path == path);
    CHECK(digest.fnv1a64 == "a430d84680aabd0b");
    CHECK_THROWS_AS(report::digest_file(scratch.file("missing.txt")), DataError);
}

TEST_CASE("a parity battery lands on t = 0 and p = 0.5") {
    const auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0, 5.0}, {3.0, 4.0, 2.0, 5.0});
    const report::BatteryResult battery = report::run_battery(rows, {0.05, 0.01});
    REQUIRE(battery.entries.size() == 1);
    const report::BatteryEntry& entry = battery.entries[0];
    CHECK(entry.metric == "quality");
    CHECK(entry.temperature == 1.0);
    CHECK(entry.comparison == "min_p>basic");
    CHECK(entry.test.t == 0.0);
    CHECK(entry.test.p == 0.5);
    CHECK(entry.test.df == 3);
    CHECK(entry.test.mean_diff == 0.0);
    CHECK_FALSE(entry.degenerate_variance);
    CHECK(entry.dropped == 0);
    CHECK_FALSE(entry.significant_uncorrected.at(0.05));
    CHECK_FALSE(entry.significant_bonferroni.at(0.05));
    CHECK(battery.iut.iut_p == 0.5);
    CHECK_FALSE(battery.iut.reject_at.at(0.05));
    CHECK(battery.dropped_total == 0);
}

TEST_CASE("battery test statistics match a direct paired t-test") {
    const auto rows = paired_cell("quality", 0.7, {1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 2.0, 2.0});
    const report::BatteryResult battery = report::run_battery(rows, {0.05});
    REQUIRE(battery.entries.size() == 1);
    const report::BatteryEntry& entry = battery.entries[0];
    // d = [1,1,1,2]: mean 1.25, sd 0.5, t = 1.25 / (0.5/2) = 5, df = 3.
    CHECK(entry.test.t == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(entry.test.df == 3);
    CHECK(entry.test.p == doctest::Approx(stats::student_t_sf(5.0, 3)).epsilon(1e-12));
    CHECK(entry.test.mean_diff == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(entry.significant_uncorrected.at(0.05) == (entry.test.p <= 0.05));
}

TEST_CASE("constant nonzero differences use the infinite-t convention") {
    const auto up = paired_cell("quality", 1.0, {2.0, 3.0, 4.0}, {1.0, 2.0, 3.0});
    const report::BatteryResult wins = report::run_battery(up, {0.05});
    REQUIRE(wins.entries.size() == 1);
    CHECK(wins.entries[0].degenerate_variance);
    CHECK(std::isinf(wins.entries[0].test.t));
    CHECK(wins.entries[0].test.t > 0);
    CHECK(wins.entries[0].test.p == 0.0);
    CHECK(wins.entries[0].test.mean_diff == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(wins.entries[0].significant_uncorrected.at(0.05));
    const nlohmann::json j = report::battery_to_json(wins);
    CHECK(j["tests"][0]["t"] == "+inf");
    CHECK(j["tests"][0]["degenerate_variance"] == true);

    const auto down = paired_cell("quality", 1.0, {1.0, 2.0, 3.0}, {2.0, 3.0, 4.0});
    const report::BatteryResult losses = report::run_battery(down, {0.05});
    CHECK(losses.entries[0].test.p == 1.0);
    CHECK(report::battery_to_json(losses)["tests"][0]["t"] == "-inf");
}

TEST_CASE("participants missing one condition are dropped and counted") {
    auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0}, {1.0, 2.0, 3.0});
    rows.push_back(row("only_minp", SamplerKind::min_p, 1.0, "quality", 9.0));
    rows.push_back(row("only_basic", SamplerKind::basic, 1.0, "quality", 9.0));
    const report::BatteryResult battery = report::run_battery(rows, {0.05});
    REQUIRE(battery.entries.size() == 1);
    CHECK(battery.entries[0].dropped == 2);
    CHECK(battery.entries[0].test.df == 2);  // three complete pairs
    CHECK(battery.dropped_total == 2);
}

TEST_CASE("every baseline sampler is compared in every cell") {
    auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0}, {1.0, 2.0, 3.0});
    for (int i = 0; i < 3; ++i) {
        rows.push_back(row("p" + std::to_string(i), SamplerKind::top_p, 1.0, "quality",
                           2.0 + 0.5 * i));
    }
    auto diversity = paired_cell("diversity", 1.0, {0.5, 0.6, 0.7}, {0.4, 0.7, 0.5});
    for (int i = 0; i < 3; ++i) {
        diversity.push_back(row("p" + std::to_string(i), SamplerKind::top_p, 1.0, "diversity",
                                0.5 + 0.05 * i));
    }
    rows.insert(rows.end(), diversity.begin(), diversity.end());
    const report::BatteryResult battery = report::run_battery(rows, {0.05});
    REQUIRE(battery.entries.size() == 4);
    // Sorted by (metric, temperature, comparison).
    CHECK(battery.entries[0].metric == "diversity");
    CHECK(battery.entries[0].comparison == "min_p>basic");
    CHECK(battery.entries[1].metric == "diversity");
    CHECK(battery.entries[1].comparison == "min_p>top_p");
    CHECK(battery.entries[2].metric == "quality");
    CHECK(battery.entries[2].comparison == "min_p>basic");
    CHECK(battery.entries[3].comparison == "min_p>top_p");
    // The IUT pools all four cells: max p across entries.
    double max_p = 0.0;
    for (const auto& entry : battery.entries) max_p = std::max(max_p, entry.test.p);
    CHECK(battery.iut.iut_p == max_p);
}

TEST_CASE("group means summarize each sampler arm with a CI") {
    const auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0, 5.0}, {1.0, 2.0, 3.0, 4.0});
    const report::BatteryResult battery = report::run_battery(rows, {0.05}, 0.9);
    REQUIRE(battery.group_means.size() == 2);
    for (const report::GroupMean& group : battery.group_means) {
        CHECK(group.metric == "quality");
        CHECK(group.n == 4);
        CHECK(group.ci.level == 0.9);
        const std::vector<double> values = group.sampler == SamplerKind::min_p
                                               ? std::vector<double>{3.0, 4.0, 2.0, 5.0}
                                               : std::vector<double>{1.0, 2.0, 3.0, 4.0};
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= 4.0;
        CHECK(group.mean == doctest::Approx(mean).epsilon(1e-15));
        const stats::Interval ci = stats::mean_ci(values, 0.9);
        CHECK(group.ci.lower == ci.lower);
        CHECK(group.ci.upper == ci.upper);
    }
}

TEST_CASE("battery input validation names the offending cell") {
    // A cell with min_p rows only.
    auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0}, {1.0, 2.0, 3.0});
    rows.push_back(row("p0", SamplerKind::min_p, 2.0, "quality", 1.0));
    rows.push_back(row("p1", SamplerKind::min_p, 2.0, "quality", 2.0));
    try {
        report::run_battery(rows, {0.05});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find("metric=quality tau=2 min_p>basic") != std::string::npos);
        CHECK(what.find("no basic rows") != std::string::npos);
    }

    // Fewer than two complete pairs.
    std::vector<csvio::HumanEvalRow> thin = {
        row("p0", SamplerKind::min_p, 1.0, "quality", 1.0),
        row("p0", SamplerKind::basic, 1.0, "quality", 0.5),
        row("p1", SamplerKind::min_p, 1.0, "quality", 1.0),
        row("p2", SamplerKind::basic, 1.0, "quality", 0.5),
    };
    try {
        report::run_battery(thin, {0.05});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("fewer than 2 complete pairs") != std::string::npos);
    }

    // Duplicate participant rows within one arm.
    auto dup = paired_cell("quality", 1.0, {3.0, 4.0}, {1.0, 2.0});
    dup.push_back(row("p0", SamplerKind::min_p, 1.0, "quality", 3.5));
    CHECK_THROWS_AS(report::run_battery(dup, {0.05}), DataError);

    // Sampler coverage and argument checks.
    std::vector<csvio::HumanEvalRow> no_minp = {
        row("p0", SamplerKind::basic, 1.0, "quality", 1.0),
        row("p1", SamplerKind::basic, 1.0, "quality", 2.0),
    };
    CHECK_THROWS_AS(report::run_battery(no_minp, {0.05}), DataError);
    std::vector<csvio::HumanEvalRow> only_minp = {
        row("p0", SamplerKind::min_p, 1.0, "quality", 1.0),
        row("p1", SamplerKind::min_p, 1.0, "quality", 2.0),
    };
    CHECK_THROWS_AS(report::run_battery(only_minp, {0.05}), DataError);
    const auto ok = paired_cell("quality", 1.0, {1.0, 2.0}, {0.0, 1.0});
    CHECK_THROWS_AS(report::run_battery({}, {0.05}), EmptyInput);
    CHECK_THROWS_AS(report::run_battery(ok, {}), EmptyInput);
    CHECK_THROWS_AS(report::run_battery(ok, {0.0}), DataError);
    CHECK_THROWS_AS(report::run_battery(ok, {1.0}), DataError);
    CHECK_THROWS_AS(report::run_battery(ok, {0.05}, 0.0), DataError);
    CHECK_THROWS_AS(report::run_battery(ok, {0.05}, 1.0), DataError);
}

TEST_CASE("battery JSON carries per-alpha keys and pooled blocks") {
    const auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0, 5.0}, {1.0, 2.0, 3.0, 4.0});
    const report::BatteryResult battery = report::run_battery(rows, {0.05, 0.01});
    const nlohmann::json j = report::battery_to_json(battery);
    REQUIRE(j["tests"].size() == 1);
    const nlohmann::json& test = j["tests"][0];
    CHECK(test.contains("significant_uncorrected_05"));
    CHECK(test.contains("significant_uncorrected_01"));
    CHECK(test.contains("significant_bonferroni_05"));
    CHECK(test["p"] == battery.entries[0].test.p);
    CHECK(test["df"] == 3);
    CHECK(j["iut"].contains("iut_p"));
    CHECK(j["iut"].contains("reject_05"));
    CHECK(j["iut"].contains("reject_01"));
    CHECK(j["group_means"].size() == 2);
    CHECK(j["alphas"] == nlohmann::json(std::vector<double>{0.05, 0.01}));
    CHECK(j["dropped_pairs"] == 0);
}

TEST_CASE("battery text table lists every cell and the pooled verdict") {
    const auto rows = paired_cell("quality", 1.0, {3.0, 4.0, 2.0, 5.0}, {1.0, 2.0, 3.0, 4.0});
    const report::BatteryResult battery = report::run_battery(rows, {0.05});
    const std::string table = report::battery_text_table(battery);
    CHECK(table.find("metric") != std::string::npos);
    CHECK(table.find("min_p>basic") != std::string::npos);
    CHECK(table.find("IUT max p = ") != std::string::npos);
    CHECK(table.find("dropped pairs: 0") != std::string::npos);
    CHECK(table.find("sig@0.05") != std::string::npos);
    CHECK(table.find("bonf@0.05") != std::string::npos);
}

TEST_CASE("reports serialize deterministically with sorted keys") {
    const std::vector<report::InputDigest> inputs = {{"scores.csv", "cbf29ce484222325"}};
    nlohmann::json results;
    results["answer"] = 42;
    const nlohmann::json report = report::make_report("sampler-audit analyze-iut", inputs, results);
    CHECK(report["tool"] == "sampler-audit");
    CHECK(report["version"] == report::TOOL_VERSION);
    CHECK(report["schema_version"] == report::SCHEMA_VERSION);
    CHECK(report["command"] == "sampler-audit analyze-iut");
    REQUIRE(report["inputs"].size() == 1);
    CHECK(report["inputs"][0]["path"] == "scores.csv");
    CHECK(report["inputs"][0]["fnv1a64"] == "cbf29ce484222325");
    CHECK(report["results"]["answer"] == 42);

    const std::string once = report::report_to_string(report);
    const std::string twice =
        report::report_to_string(report::make_report("sampler-audit analyze-iut", inputs, results));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
    // nlohmann::json objects iterate in sorted key order.
    CHECK(once.find("\"command\"") < once.find("\"inputs\""));
    CHECK(once.find("\"inputs\"") < once.find("\"results\""));
}

}  // TEST_SUITE
