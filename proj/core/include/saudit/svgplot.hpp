#pragma once

#include "saudit/bestofn.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace saudit::plot {

// Self-contained SVG (no external assets): one line per sampler with a
// shaded band at +/- 1 standard error. Throws DataError on empty input.
std::string curves_svg(const std::vector<bestofn::BestOfNCurve>& curves,
                       const std::string& title);

// gnuplot-ready TSV: '#'-prefixed header, tab-separated columns, one block
// per sampler separated by two blank lines (gnuplot `index` addressing).
std::string curves_tsv(const std::vector<bestofn::BestOfNCurve>& curves);

// Difference curve with +/- 1 standard-error band and a dashed zero line.
std::string diff_svg(const bestofn::DiffCurve& curve, const std::string& title);
std::string diff_tsv(const bestofn::DiffCurve& curve);

// Grouped bars from a test battery's `group_means`: one panel per metric,
// temperature groups on x, one bar per sampler with its confidence-interval
// whisker. `results` is the battery payload (the report's `results` object).
std::string battery_svg(const nlohmann::json& results, const std::string& title);
std::string battery_tsv(const nlohmann::json& results);

} // namespace saudit::plot
