#include "saudit/csv.hpp"

#include "saudit/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace saudit::csvio {

namespace {

struct Line {
    std::size_t number = 0;  // 1-based, for error messages
    std::string text;
};

// Content -> data lines, with CR stripped and blank/'#' lines dropped.
std::vector<Line> data_lines(const std::string& content) {
    std::vector<Line> lines;
    std::size_t start = 0;
    std::size_t number = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string text = content.substr(start, end - start);
        ++number;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (!text.empty() && text[0] != '#') lines.push_back({number, text});
        if (end == content.size()) break;
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& text) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(text.substr(start));
            break;
        }
        fields.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& message) {
    throw DataError(origin + ":" + std::to_string(line) + ": " + message);
}

void expect_header(const std::vector<Line>& lines, const std::string& expected,
                   const std::string& origin) {
    if (lines.empty()) throw DataError(origin + ": empty file");
    if (lines.front().text != expected) {
        fail(origin, lines.front().number, "expected header '" + expected + "'");
    }
}

void expect_fields(const std::vector<std::string>& fields, std::size_t count,
                   const std::string& origin, std::size_t line) {
    if (fields.size() != count) {
        fail(origin, line,
             "expected " + std::to_string(count) + " fields, found " +
                 std::to_string(fields.size()));
    }
}

constexpr const char* SCORE_HEADER = "sampler,hyper,temperature,seed,score";
constexpr const char* SWEEP_HEADER = "sampler,hyper,temperature,seed,quality,diversity";
constexpr const char* CURVE_HEADER = "sampler,n,expected_max,std_error,repeats";
constexpr const char* DIFF_HEADER = "n,expected_diff,std_error,repeats";

// hyper field: empty for basic, numeric otherwise.
double parse_hyper(const std::string& field, sampling::SamplerKind kind) {
    if (field.empty()) {
        if (kind != sampling::SamplerKind::basic) {
            throw DataError(std::string("missing hyper for ") + sampling::to_string(kind));
        }
        return 0.0;
    }
    return parse_double(field, "hyper");
}

std::string hyper_field(sampling::SamplerKind kind, double hyper) {
    return kind == sampling::SamplerKind::basic ? std::string() : format_double(hyper);
}

} // namespace

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) throw DataError("cannot format number");
    return std::string(buffer.data(), ptr);
}

double parse_double(const std::string& field, const std::string& what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw DataError("malformed " + what + ": '" + field + "'");
    }
    return value;
}

std::int64_t parse_int64(const std::string& field, const std::string& what) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw DataError("malformed " + what + ": '" + field + "'");
    }
    return value;
}

LogitFile parse_logit_csv(const std::string& content, const std::string& origin) {
    const auto lines = data_lines(content);
    if (lines.empty()) throw DataError(origin + ": empty file");
    const auto header = split_fields(lines.front().text);
    if (header.size() != 2 || header[0] != "vocab_size") {
        fail(origin, lines.front().number, "expected header 'vocab_size,<N>'");
    }
    const std::int64_t vocab = parse_int64(header[1], "vocab_size");
    if (vocab < 1) fail(origin, lines.front().number, "vocab_size must be >= 1");

    LogitFile file;
    file.vocab_size = static_cast<std::size_t>(vocab);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, file.vocab_size, origin, lines[i].number);
        sampling::LogitVector logits;
        logits.values.reserve(fields.size());
        for (const std::string& field : fields) {
            const double v = parse_double(field, "logit");
            if (!std::isfinite(v)) fail(origin, lines[i].number, "non-finite logit");
            logits.values.push_back(v);
        }
        file.steps.push_back(std::move(logits));
    }
    if (file.steps.empty()) throw DataError(origin + ": no logit rows");
    return file;
}

LogitFile read_logit_csv(const std::string& path) {
    return parse_logit_csv(io::read_text_file(path), path);
}

std::vector<HumanEvalRow> parse_human_eval_csv(const std::string& content,
                                               const std::string& origin) {
    const auto lines = data_lines(content);
    expect_header(lines, "participant_id,sampler,temperature,diversity_setting,metric,score",
                  origin);
    std::vector<HumanEvalRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, 6, origin, lines[i].number);
        HumanEvalRow row;
        row.participant_id = fields[0];
        if (row.participant_id.empty()) fail(origin, lines[i].number, "empty participant_id");
        try {
            row.sampler = sampling::sampler_kind_from_string(fields[1]);
            row.temperature = parse_double(fields[2], "temperature");
            row.score = parse_double(fields[5], "score");
        } catch (const DataError& e) {
            fail(origin, lines[i].number, e.what());
        }
        if (row.sampler == sampling::SamplerKind::top_k) {
            fail(origin, lines[i].number, "sampler must be basic, top_p, or min_p");
        }
        row.diversity_setting = fields[3];
        row.metric = fields[4];
        if (row.metric != "quality" && row.metric != "diversity") {
            fail(origin, lines[i].number, "metric must be quality or diversity");
        }
        if (!std::isfinite(row.score) || !std::isfinite(row.temperature)) {
            fail(origin, lines[i].number, "non-finite value");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(origin + ": no data rows");
    return rows;
}

std::vector<HumanEvalRow> read_human_eval_csv(const std::string& path) {
    return parse_human_eval_csv(io::read_text_file(path), path);
}

std::vector<bestofn::ScoreRecord> parse_score_table(const std::string& content,
                                                    const std::string& origin) {
    const auto lines = data_lines(content);
    expect_header(lines, SCORE_HEADER, origin);
    std::vector<bestofn::ScoreRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, 5, origin, lines[i].number);
        bestofn::ScoreRecord record;
        try {
            record.sampler = sampling::sampler_kind_from_string(fields[0]);
            record.hyper = parse_hyper(fields[1], record.sampler);
            record.temperature = parse_double(fields[2], "temperature");
            record.seed = parse_int64(fields[3], "seed");
            record.score = parse_double(fields[4], "score");
        } catch (const DataError& e) {
            fail(origin, lines[i].number, e.what());
        }
        records.push_back(record);
    }
    if (records.empty()) throw DataError(origin + ": no data rows");
    return records;
}

std::vector<bestofn::ScoreRecord> read_score_table(const std::string& path) {
    return parse_score_table(io::read_text_file(path), path);
}

std::string sweep_header() { return SWEEP_HEADER; }
std::string curve_header() { return CURVE_HEADER; }
std::string diff_header() { return DIFF_HEADER; }

std::string sweep_row_line(const harness::SweepRow& row) {
    std::ostringstream out;
    out << sampling::to_string(row.sampler) << ',' << hyper_field(row.sampler, row.hyper) << ','
        << format_double(row.temperature) << ',' << row.seed << ','
        << format_double(row.quality) << ',' << format_double(row.diversity);
    return out.str();
}

std::vector<harness::SweepRow> parse_sweep_table(const std::string& content,
                                                 const std::string& origin) {
    const auto lines = data_lines(content);
    expect_header(lines, SWEEP_HEADER, origin);
    std::vector<harness::SweepRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, 6, origin, lines[i].number);
        harness::SweepRow row;
        try {
            row.sampler = sampling::sampler_kind_from_string(fields[0]);
            row.hyper = parse_hyper(fields[1], row.sampler);
            row.temperature = parse_double(fields[2], "temperature");
            row.seed = parse_int64(fields[3], "seed");
            row.quality = parse_double(fields[4], "quality");
            row.diversity = parse_double(fields[5], "diversity");
        } catch (const DataError& e) {
            fail(origin, lines[i].number, e.what());
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<harness::SweepRow> read_sweep_table(const std::string& path) {
    return parse_sweep_table(io::read_text_file(path), path);
}

void write_sweep_table(const std::string& path, const std::vector<harness::SweepRow>& rows) {
    std::ostringstream out;
    out << SWEEP_HEADER << '\n';
    for (const harness::SweepRow& row : rows) out << sweep_row_line(row) << '\n';
    io::write_text_file(path, out.str());
}

std::vector<bestofn::ScoreRecord> to_score_records(const std::vector<harness::SweepRow>& rows,
                                                   const std::string& metric) {
    if (metric != "quality" && metric != "diversity") {
        throw DataError("metric must be quality or diversity, got '" + metric + "'");
    }
    std::vector<bestofn::ScoreRecord> records;
    records.reserve(rows.size());
    for (const harness::SweepRow& row : rows) {
        bestofn::ScoreRecord record;
        record.sampler = row.sampler;
        record.hyper = row.hyper;
        record.temperature = row.temperature;
        record.seed = row.seed;
        record.score = metric == "quality" ? row.quality : row.diversity;
        records.push_back(record);
    }
    return records;
}

bool is_sweep_table(const std::string& content) {
    const auto lines = data_lines(content);
    return !lines.empty() && lines.front().text == SWEEP_HEADER;
}

void write_curves_csv(const std::string& path,
                      const std::vector<bestofn::BestOfNCurve>& curves) {
    std::ostringstream out;
    out << CURVE_HEADER << '\n';
    for (const bestofn::BestOfNCurve& curve : curves) {
        for (const bestofn::CurvePoint& point : curve.points) {
            out << sampling::to_string(curve.sampler) << ',' << point.n << ','
                << format_double(point.expected_max) << ',' << format_double(point.std_error)
                << ',' << point.repeats << '\n';
        }
    }
    io::write_text_file(path, out.str());
}

std::vector<bestofn::BestOfNCurve> parse_curves_csv(const std::string& content,
                                                    const std::string& origin) {
    const auto lines = data_lines(content);
    expect_header(lines, CURVE_HEADER, origin);
    std::vector<bestofn::BestOfNCurve> curves;
    std::map<int, std::size_t> positions;  // sampler -> index, first-seen order kept
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, 5, origin, lines[i].number);
        bestofn::CurvePoint point;
        sampling::SamplerKind sampler{};
        try {
            sampler = sampling::sampler_kind_from_string(fields[0]);
            point.n = static_cast<int>(parse_int64(fields[1], "n"));
            point.expected_max = parse_double(fields[2], "expected_max");
            point.std_error = parse_double(fields[3], "std_error");
            point.repeats = static_cast<int>(parse_int64(fields[4], "repeats"));
        } catch (const DataError& e) {
            fail(origin, lines[i].number, e.what());
        }
        const int key = static_cast<int>(sampler);
        if (positions.find(key) == positions.end()) {
            positions[key] = curves.size();
            curves.push_back(bestofn::BestOfNCurve{sampler, {}});
        }
        curves[positions[key]].points.push_back(point);
    }
    if (curves.empty()) throw DataError(origin + ": no curve points");
    return curves;
}

std::vector<bestofn::BestOfNCurve> read_curves_csv(const std::string& path) {
    return parse_curves_csv(io::read_text_file(path), path);
}

void write_diff_csv(const std::string& path, const bestofn::DiffCurve& curve) {
    std::ostringstream out;
    out << DIFF_HEADER << '\n';
    for (const bestofn::DiffPoint& point : curve.points) {
        out << point.n << ',' << format_double(point.expected_diff) << ','
            << format_double(point.std_error) << ',' << point.repeats << '\n';
    }
    io::write_text_file(path, out.str());
}

bestofn::DiffCurve parse_diff_csv(const std::string& content, const std::string& origin) {
    const auto lines = data_lines(content);
    expect_header(lines, DIFF_HEADER, origin);
    bestofn::DiffCurve curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        expect_fields(fields, 4, origin, lines[i].number);
        bestofn::DiffPoint point;
        try {
            point.n = static_cast<int>(parse_int64(fields[0], "n"));
            point.expected_diff = parse_double(fields[1], "expected_diff");
            point.std_error = parse_double(fields[2], "std_error");
            point.repeats = static_cast<int>(parse_int64(fields[3], "repeats"));
        } catch (const DataError& e) {
            fail(origin, lines[i].number, e.what());
        }
        curve.points.push_back(point);
    }
    if (curve.points.empty()) throw DataError(origin + ": no curve points");
    return curve;
}

bestofn::DiffCurve read_diff_csv(const std::string& path) {
    return parse_diff_csv(io::read_text_file(path), path);
}

} // namespace saudit::csvio
