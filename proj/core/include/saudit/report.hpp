#pragma once

#include "saudit/csv.hpp"
#include "saudit/stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace saudit::report {

inline constexpr const char* TOOL_NAME = "sampler-audit";
inline constexpr const char* TOOL_VERSION = "0.1.0";
inline constexpr int SCHEMA_VERSION = 1;

// FNV-1a 64-bit content digest as 16 lowercase hex digits; ties report
// outputs to the exact bytes of their inputs.
std::string fnv1a64_hex(const std::string& content);

// JSON-key-safe spelling of a significance level: "0.05" -> "05",
// "0.01" -> "01"; values without a leading "0." swap '.' for '_'.
std::string alpha_suffix(double alpha);

// Seed-averaged location of one (metric, temperature, sampler) group, with a
// mean confidence interval across participants.
struct GroupMean {
    std::string metric;
    double temperature = 0.0;
    sampling::SamplerKind sampler = sampling::SamplerKind::basic;
    double mean = 0.0;
    stats::Interval ci;
    int n = 0;
};

struct BatteryEntry {
    std::string metric;
    double temperature = 0.0;
    std::string comparison;  // "min_p>basic" or "min_p>top_p"
    stats::TTestResult test;
    bool degenerate_variance = false;  // test.t is the +/-inf convention value
    int dropped = 0;                   // participants without both conditions
    std::map<double, bool> significant_uncorrected;
    std::map<double, bool> significant_bonferroni;
};

struct BatteryResult {
    std::vector<BatteryEntry> entries;  // sorted by (metric, temperature, comparison)
    stats::IUTResult iut;
    std::vector<double> alphas;
    int dropped_total = 0;
    double ci_level = 0.95;
    std::vector<GroupMean> group_means;
};

// Pivots the human-eval rows into one paired test per (metric, temperature,
// min_p-vs-baseline) cell, alternative = greater with min_p as condition A.
// Participants lacking either condition in a cell are dropped and counted.
// Bonferroni runs across the full grid; the IUT pools every cell's p-value.
// A cell missing one side entirely, or left with fewer than 2 complete
// pairs, throws DataError naming the cell. Cells where the paired
// differences are a nonzero constant are rendered with the documented
// t = +/-inf convention instead of failing the whole battery.
BatteryResult run_battery(const std::vector<csvio::HumanEvalRow>& rows,
                          const std::vector<double>& alphas, double ci_level = 0.95);

// Battery payload for the JSON report: a `tests` array (one object per
// entry; infinite t values are rendered as the strings "+inf"/"-inf"), an
// `iut` block, `group_means`, `alphas`, and the dropped-pair total.
nlohmann::json battery_to_json(const BatteryResult& battery);

// Fixed-width text rendering of the same grid.
std::string battery_text_table(const BatteryResult& battery);

struct InputDigest {
    std::string path;
    std::string fnv1a64;
};

InputDigest digest_file(const std::string& path);

// Wraps a results payload with tool/version/schema, the command line, and
// input digests. No timestamps: identical inputs give identical bytes.
nlohmann::json make_report(const std::string& command, const std::vector<InputDigest>& inputs,
                           const nlohmann::json& results);

// Canonical serialization: sorted keys, 2-space indent, trailing newline.
std::string report_to_string(const nlohmann::json& report);

} // namespace saudit::report
