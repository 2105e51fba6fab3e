#include <doctest.h>

#include "saudit/csv.hpp"
#include "saudit/errors.hpp"
#include "saudit/io.hpp"
#include "test_util.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace saudit;
using sampling::SamplerKind;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

template <typename Fn>
std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("format_double writes the shortest round-trip form") {
    CHECK(csvio::format_double(0.1 + 0.2) == "0.30000000000000004");
    CHECK(csvio::format_double(0.5) == "0.5");
    CHECK(csvio::format_double(2.0) == "2");
    CHECK(csvio::format_double(-0.25) == "-0.25");
    CHECK(csvio::format_double(0.0) == "0");
    for (double value : {0.1, 1.0 / 3.0, 1e-300, -7.25e88, 123456.789}) {
        CHECK(csvio::parse_double(csvio::format_double(value), "value") == value);
    }
}

TEST_CASE("numeric parsers demand the whole field") {
    CHECK(csvio::parse_double("1.5", "x") == 1.5);
    CHECK(csvio::parse_double("-2e3", "x") == -2000.0);
    CHECK_THROWS_AS(csvio::parse_double("", "x"), DataError);
    CHECK_THROWS_AS(csvio::parse_double("1.5q", "x"), DataError);
    CHECK_THROWS_AS(csvio::parse_double(" 1.5", "x"), DataError);
    CHECK(csvio::parse_int64("42", "x") == 42);
    CHECK(csvio::parse_int64("-7", "x") == -7);
    CHECK_THROWS_AS(csvio::parse_int64("3.5", "x"), DataError);
    CHECK_THROWS_AS(csvio::parse_int64("", "x"), DataError);
    CHECK(contains(error_message([] { csvio::parse_double("bad", "temperature"); }),
                   "malformed temperature: 'bad'"));
}

TEST_CASE("logit files parse the vocab header and one row per step") {
    const std::string content =
        "# three tokens\n"
        "vocab_size,3\n"
        "\n"
        "0.5,-1,2\n"
        "1,1,1\n";
    const csvio::LogitFile file = csvio::parse_logit_csv(content, "mem");
    CHECK(file.vocab_size == 3);
    REQUIRE(file.steps.size() == 2);
    CHECK(file.steps[0].values == std::vector<double>{0.5, -1.0, 2.0});
    CHECK(file.steps[1].values == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("logit file errors carry the origin and line number") {
    CHECK(contains(error_message([] { csvio::parse_logit_csv("", "mem"); }), "mem: empty file"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("tokens,3\n1,1,1\n", "mem"); }),
                   "mem:1: expected header 'vocab_size,<N>'"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("vocab_size,0\n", "mem"); }),
                   "vocab_size must be >= 1"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("vocab_size,3\n1,2\n", "mem"); }),
                   "mem:2: expected 3 fields, found 2"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("vocab_size,2\n1,inf\n", "mem"); }),
                   "mem:2: non-finite logit"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("vocab_size,2\n1,soup\n", "mem"); }),
                   "malformed logit"));
    CHECK(contains(error_message([] { csvio::parse_logit_csv("vocab_size,2\n", "mem"); }),
                   "mem: no logit rows"));
}

TEST_CASE("read_logit_csv round-trips through a file") {
    testutil::ScratchDir scratch;
    const std::string path = scratch.file("logits.csv");
    io::write_text_file(path, "vocab_size,2\n0.25,0.75\n");
    const csvio::LogitFile file = csvio::read_logit_csv(path);
    CHECK(file.vocab_size == 2);
    REQUIRE(file.steps.size() == 1);
    CHECK(file.steps[0].values == std::vector<double>{0.25, 0.75});
    CHECK(contains(error_message([&] { csvio::read_logit_csv(scratch.file("nope.csv")); }),
                   "cannot open"));
}

TEST_CASE("human evaluation tables accept only the supported samplers and metrics") {
    const std::string header =
        "participant_id,sampler,temperature,diversity_setting,metric,score\n";
    const auto rows = csvio::parse_human_eval_csv(
        header + "p1,min_p,1.0,high,quality,4.5\np2,basic,0.7,low,diversity,-1\n", "mem");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].participant_id == "p1");
    CHECK(rows[0].sampler == SamplerKind::min_p);
    CHECK(rows[0].temperature == 1.0);
    CHECK(rows[0].diversity_setting == "high");
    CHECK(rows[0].metric == "quality");
    CHECK(rows[0].score == 4.5);
    CHECK(rows[1].sampler == SamplerKind::basic);
    CHECK(rows[1].score == -1.0);

    CHECK(contains(
        error_message([&] {
            csvio::parse_human_eval_csv(header + "p1,top_k,1.0,high,quality,4\n", "mem");
        }),
        "sampler must be basic, top_p, or min_p"));
    CHECK(contains(
        error_message([&] {
            csvio::parse_human_eval_csv(header + "p1,basic,1.0,high,speed,4\n", "mem");
        }),
        "metric must be quality or diversity"));
    CHECK(contains(error_message([&] {
                       csvio::parse_human_eval_csv(header + ",basic,1.0,high,quality,4\n", "mem");
                   }),
                   "empty participant_id"));
    CHECK(contains(error_message([&] {
                       csvio::parse_human_eval_csv(header + "p1,basic,1.0,high,quality,nan\n",
                                                   "mem");
                   }),
                   "non-finite value"));
    CHECK(contains(error_message([&] { csvio::parse_human_eval_csv(header, "mem"); }),
                   "no data rows"));
    CHECK(contains(error_message([&] { csvio::parse_human_eval_csv("a,b\n", "mem"); }),
                   "expected header"));
}

TEST_CASE("score tables leave the hyper field empty only for basic") {
    const std::string content =
        "sampler,hyper,temperature,seed,score\n"
        "basic,,1,0,0.5\n"
        "top_p,0.9,1,0,0.625\n"
        "top_k,5,0.7,1,-0.25\n"
        "min_p,0.1,1.3,2,0.125\n";
    const auto records = csvio::parse_score_table(content, "mem");
    REQUIRE(records.size() == 4);
    CHECK(records[0].sampler == SamplerKind::basic);
    CHECK(records[0].hyper == 0.0);
    CHECK(records[0].score == 0.5);
    CHECK(records[1].sampler == SamplerKind::top_p);
    CHECK(records[1].hyper == 0.9);
    CHECK(records[2].sampler == SamplerKind::top_k);
    CHECK(records[2].hyper == 5.0);
    CHECK(records[2].seed == 1);
    CHECK(records[3].temperature == 1.3);

    CHECK(contains(error_message([] {
                       csvio::parse_score_table(
                           "sampler,hyper,temperature,seed,score\ntop_p,,1,0,0.5\n", "mem");
                   }),
                   "missing hyper for top_p"));
    CHECK_THROWS_AS(csvio::parse_score_table("sampler,score\n", "mem"), DataError);
    CHECK_THROWS_AS(csvio::parse_score_table("sampler,hyper,temperature,seed,score\n", "mem"),
                    DataError);
}

TEST_CASE("sweep tables round-trip bit-identically") {
    std::vector<harness::SweepRow> rows(3);
    rows[0] = {SamplerKind::basic, 0.0, 0.1 + 0.2, -4, -1.25, 0.5};
    rows[1] = {SamplerKind::top_k, 7.0, 1.0, 0, -0.7071067811865476, 1.0 / 3.0};
    rows[2] = {SamplerKind::min_p, 0.05, 2.0, 12, 0.0, 0.0};

    testutil::ScratchDir scratch;
    const std::string path = scratch.file("sweep.csv");
    csvio::write_sweep_table(path, rows);
    const std::string bytes = io::read_text_file(path);
    CHECK(bytes.rfind(csvio::sweep_header() + "\n", 0) == 0);
    CHECK(contains(bytes, "basic,,0.30000000000000004,-4,-1.25,0.5"));

    const auto parsed = csvio::read_sweep_table(path);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].sampler == rows[i].sampler);
        CHECK(parsed[i].hyper == rows[i].hyper);
        CHECK(parsed[i].temperature == rows[i].temperature);
        CHECK(parsed[i].seed == rows[i].seed);
        CHECK(parsed[i].quality == rows[i].quality);
        CHECK(parsed[i].diversity == rows[i].diversity);
    }

    // A header-only sweep table is valid and empty (resume reads rely on it).
    CHECK(csvio::parse_sweep_table(csvio::sweep_header() + "\n", "mem").empty());
}

TEST_CASE("is_sweep_table sniffs the header") {
    CHECK(csvio::is_sweep_table("sampler,hyper,temperature,seed,quality,diversity\n"));
    CHECK(csvio::is_sweep_table("# note\nsampler,hyper,temperature,seed,quality,diversity\n"));
    CHECK_FALSE(csvio::is_sweep_table("sampler,hyper,temperature,seed,score\n"));
    CHECK_FALSE(csvio::is_sweep_table(""));
    CHECK_FALSE(csvio::is_sweep_table("whatever\n"));
}

TEST_CASE("to_score_records projects one metric column") {
    std::vector<harness::SweepRow> rows(2);
    rows[0] = {SamplerKind::basic, 0.0, 1.0, 0, -1.5, 0.25};
    rows[1] = {SamplerKind::top_p, 0.9, 0.7, 1, -0.5, 0.75};
    const auto quality = csvio::to_score_records(rows, "quality");
    REQUIRE(quality.size() == 2);
    CHECK(quality[0].score == -1.5);
    CHECK(quality[1].score == -0.5);
    CHECK(quality[1].sampler == SamplerKind::top_p);
    CHECK(quality[1].hyper == 0.9);
    CHECK(quality[1].temperature == 0.7);
    CHECK(quality[1].seed == 1);
    const auto diversity = csvio::to_score_records(rows, "diversity");
    CHECK(diversity[0].score == 0.25);
    CHECK(diversity[1].score == 0.75);
    CHECK_THROWS_AS(csvio::to_score_records(rows, "speed"), DataError);
}

TEST_CASE("curve files group points by sampler in first-seen order") {
    std::vector<bestofn::BestOfNCurve> curves(2);
    curves[0].sampler = SamplerKind::min_p;
    curves[0].points = {{1, 0.5, 0.01, 100}, {2, 0.625, 0.0125, 100}};
    curves[1].sampler = SamplerKind::top_p;
    curves[1].points = {{1, 0.4375, 0.02, 100}};

    testutil::ScratchDir scratch;
    const std::string path = scratch.file("curves.csv");
    csvio::write_curves_csv(path, curves);
    const std::string bytes = io::read_text_file(path);
    CHECK(bytes.rfind(csvio::curve_header() + "\n", 0) == 0);

    const auto parsed = csvio::read_curves_csv(path);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].sampler == SamplerKind::min_p);
    REQUIRE(parsed[0].points.size() == 2);
    CHECK(parsed[0].points[0].n == 1);
    CHECK(parsed[0].points[0].expected_max == 0.5);
    CHECK(parsed[0].points[0].std_error == 0.01);
    CHECK(parsed[0].points[0].repeats == 100);
    CHECK(parsed[0].points[1].expected_max == 0.625);
    CHECK(parsed[1].sampler == SamplerKind::top_p);
    REQUIRE(parsed[1].points.size() == 1);

    // Interleaved rows still group by sampler, keeping first-seen order.
    const std::string interleaved = csvio::curve_header() +
                                    "\ntop_k,1,0.5,0,10\nmin_p,1,0.25,0,10\ntop_k,2,0.75,0,10\n";
    const auto grouped = csvio::parse_curves_csv(interleaved, "mem");
    REQUIRE(grouped.size() == 2);
    CHECK(grouped[0].sampler == SamplerKind::top_k);
    CHECK(grouped[0].points.size() == 2);
    CHECK(grouped[1].sampler == SamplerKind::min_p);

    CHECK_THROWS_AS(csvio::parse_curves_csv(csvio::curve_header() + "\n", "mem"), DataError);
    CHECK_THROWS_AS(csvio::parse_curves_csv("n,expected_max\n", "mem"), DataError);
    CHECK(contains(error_message([&] {
                       csvio::parse_curves_csv(csvio::curve_header() + "\nbanana,1,0.5,0,10\n",
                                               "mem");
                   }),
                   "mem:2:"));
}

TEST_CASE("difference curve files round-trip") {
    bestofn::DiffCurve curve;
    curve.target = SamplerKind::min_p;
    curve.points = {{1, -0.05, 0.001, 1000}, {4, 0.25, 0.0, 1000}};

    testutil::ScratchDir scratch;
    const std::string path = scratch.file("diff.csv");
    csvio::write_diff_csv(path, curve);
    const std::string bytes = io::read_text_file(path);
    CHECK(bytes.rfind(csvio::diff_header() + "\n", 0) == 0);
    CHECK(contains(bytes, "1,-0.05,0.001,1000"));

    const bestofn::DiffCurve parsed = csvio::read_diff_csv(path);
    REQUIRE(parsed.points.size() == 2);
    CHECK(parsed.points[0].n == 1);
    CHECK(parsed.points[0].expected_diff == -0.05);
    CHECK(parsed.points[0].std_error == 0.001);
    CHECK(parsed.points[0].repeats == 1000);
    CHECK(parsed.points[1].n == 4);
    CHECK(parsed.points[1].expected_diff == 0.25);

    CHECK_THROWS_AS(csvio::parse_diff_csv(csvio::diff_header() + "\n", "mem"), DataError);
    CHECK_THROWS_AS(csvio::parse_diff_csv("x\n", "mem"), DataError);
    CHECK(contains(error_message([&] {
                       csvio::parse_diff_csv(csvio::diff_header() + "\n1,0.5,zero,10\n", "mem");
                   }),
                   "malformed std_error"));
}

}  // TEST_SUITE
