#include <doctest.h>

#include "saudit/errors.hpp"
#include "saudit/report.hpp"
#include "saudit/svgplot.hpp"

#include <string>
#include <vector>

using namespace saudit;
using sampling::SamplerKind;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::vector<bestofn::BestOfNCurve> sample_curves() {
    std::vector<bestofn::BestOfNCurve> curves(2);
    curves[0].sampler = SamplerKind::min_p;
    curves[0].points = {{1, 0.5, 0.02, 100}, {2, 0.6, 0.015, 100}, {4, 0.7, 0.0, 100}};
    curves[1].sampler = SamplerKind::top_p;
    curves[1].points = {{1, 0.45, 0.02, 100}, {2, 0.5, 0.01, 100}, {4, 0.55, 0.0, 100}};
    return curves;
}

nlohmann::json battery_results() {
    std::vector<csvio::HumanEvalRow> rows;
    for (int i = 0; i < 4; ++i) {
        csvio::HumanEvalRow r;
        r.participant_id = "p" + std::to_string(i);
        r.temperature = 1.0;
        r.diversity_setting = "default";
        r.metric = "quality";
        r.sampler = SamplerKind::min_p;
        r.score = 3.0 + i;
        rows.push_back(r);
        r.sampler = SamplerKind::basic;
        r.score = 2.0 + 0.5 * i;
        rows.push_back(r);
    }
    return report::battery_to_json(report::run_battery(rows, {0.05}));
}

}  // namespace

TEST_SUITE("svgplot") {

TEST_CASE("curve plots are self-contained SVG with a legend per sampler") {
    const std::string svg = plot::curves_svg(sample_curves(), "expected best-of-n score");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(contains(svg, "</svg>"));
    CHECK(contains(svg, "expected best-of-n score"));
    CHECK(contains(svg, ">min_p</text>"));
    CHECK(contains(svg, ">top_p</text>"));
    CHECK(contains(svg, "<polyline"));
    CHECK(contains(svg, "N (configs subsampled)"));
    CHECK_FALSE(contains(svg, "href"));  // no external references
}

TEST_CASE("plot titles are XML-escaped") {
    const std::string svg = plot::curves_svg(sample_curves(), "a < b & c");
    CHECK(contains(svg, "a &lt; b &amp; c"));
    CHECK_FALSE(contains(svg, "a < b & c"));
}

TEST_CASE("curves_tsv separates samplers with two blank lines") {
    const std::string tsv = plot::curves_tsv(sample_curves());
    CHECK(tsv.rfind("# sampler\tn\texpected_max\tstd_error\trepeats\n", 0) == 0);
    CHECK(contains(tsv, "min_p\t1\t0.5\t0.02\t100\n"));
    CHECK(contains(tsv, "\n\n\ntop_p\t1\t0.45\t0.02\t100\n"));
    CHECK(tsv.back() == '\n');
}

TEST_CASE("curve plotting rejects empty input") {
    CHECK_THROWS_AS(plot::curves_svg({}, "t"), DataError);
    CHECK_THROWS_AS(plot::curves_tsv({}), DataError);
    std::vector<bestofn::BestOfNCurve> hollow(1);
    hollow[0].sampler = SamplerKind::basic;
    CHECK_THROWS_AS(plot::curves_svg(hollow, "t"), DataError);
    CHECK_THROWS_AS(plot::curves_tsv(hollow), DataError);
}

TEST_CASE("difference plots draw a dashed zero line") {
    bestofn::DiffCurve curve;
    curve.target = SamplerKind::min_p;
    curve.points = {{1, -0.05, 0.01, 500}, {2, 0.1, 0.008, 500}, {4, 0.25, 0.0, 500}};
    const std::string svg = plot::diff_svg(curve, "best-of-n score difference");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(contains(svg, "stroke-dasharray"));
    CHECK(contains(svg, "min_p - best other"));
    CHECK(contains(svg, "expected score difference"));

    const std::string tsv = plot::diff_tsv(curve);
    CHECK(tsv.rfind("# n\texpected_diff\tstd_error\trepeats\n", 0) == 0);
    CHECK(contains(tsv, "1\t-0.05\t0.01\t500\n"));
    CHECK(contains(tsv, "4\t0.25\t0\t500\n"));

    CHECK_THROWS_AS(plot::diff_svg(bestofn::DiffCurve{}, "t"), DataError);
    CHECK_THROWS_AS(plot::diff_tsv(bestofn::DiffCurve{}), DataError);
}

TEST_CASE("battery plots render one bar group per temperature") {
    const nlohmann::json results = battery_results();
    const std::string svg = plot::battery_svg(results, "scores by sampler");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(contains(svg, "scores by sampler"));
    CHECK(contains(svg, ">quality</text>"));
    CHECK(contains(svg, "tau=1"));
    CHECK(contains(svg, ">basic</text>"));
    CHECK(contains(svg, ">min_p</text>"));
    CHECK(contains(svg, "<rect"));

    const std::string tsv = plot::battery_tsv(results);
    CHECK(tsv.rfind("# metric\ttemperature\tsampler\tmean\tci_lower\tci_upper\n", 0) == 0);
    CHECK(contains(tsv, "quality\t1\tbasic\t"));
    CHECK(contains(tsv, "quality\t1\tmin_p\t"));
}

TEST_CASE("battery plots reject payloads without group means") {
    nlohmann::json empty;
    CHECK_THROWS_AS(plot::battery_svg(empty, "t"), DataError);
    CHECK_THROWS_AS(plot::battery_tsv(empty), DataError);
    nlohmann::json hollow;
    hollow["group_means"] = nlohmann::json::array();
    CHECK_THROWS_AS(plot::battery_svg(hollow, "t"), DataError);
    nlohmann::json malformed;
    malformed["group_means"] = nlohmann::json::array({{{"metric", "quality"}}});
    CHECK_THROWS_AS(plot::battery_svg(malformed, "t"), DataError);
}

}  // TEST_SUITE
