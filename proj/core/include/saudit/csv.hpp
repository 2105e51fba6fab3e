#pragma once

#include "saudit/bestofn.hpp"
#include "saudit/ngram.hpp"
#include "saudit/sampling.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace saudit::csvio {

// Shortest decimal that round-trips the double (std::to_chars), so values
// written to CSV parse back bit-identical.
std::string format_double(double value);

// Strict numeric field parsers: the whole field must be consumed.
double parse_double(const std::string& field, const std::string& what);
std::int64_t parse_int64(const std::string& field, const std::string& what);

// Logit file: header line `vocab_size,<N>`, then one row of N logits per
// sampling step. '#' lines and blank lines are ignored.
struct LogitFile {
    std::size_t vocab_size = 0;
    std::vector<sampling::LogitVector> steps;
};
LogitFile parse_logit_csv(const std::string& content, const std::string& origin);
LogitFile read_logit_csv(const std::string& path);

// Human-evaluation table: header
// `participant_id,sampler,temperature,diversity_setting,metric,score`,
// samplers restricted to basic/top_p/min_p, metric to quality/diversity.
struct HumanEvalRow {
    std::string participant_id;
    sampling::SamplerKind sampler = sampling::SamplerKind::basic;
    double temperature = 1.0;
    std::string diversity_setting;
    std::string metric;
    double score = 0.0;
};
std::vector<HumanEvalRow> parse_human_eval_csv(const std::string& content,
                                               const std::string& origin);
std::vector<HumanEvalRow> read_human_eval_csv(const std::string& path);

// Single-score table: header `sampler,hyper,temperature,seed,score`; the
// hyper field is empty for basic rows.
std::vector<bestofn::ScoreRecord> parse_score_table(const std::string& content,
                                                    const std::string& origin);
std::vector<bestofn::ScoreRecord> read_score_table(const std::string& path);

// Sweep table: header `sampler,hyper,temperature,seed,quality,diversity` —
// the score table shape with the harness's two metric columns.
std::string sweep_header();
std::string curve_header();
std::string diff_header();
std::string sweep_row_line(const harness::SweepRow& row);
std::vector<harness::SweepRow> parse_sweep_table(const std::string& content,
                                                 const std::string& origin);
std::vector<harness::SweepRow> read_sweep_table(const std::string& path);
void write_sweep_table(const std::string& path, const std::vector<harness::SweepRow>& rows);

// Projects one sweep metric column ("quality" or "diversity") into plain
// score records.
std::vector<bestofn::ScoreRecord> to_score_records(const std::vector<harness::SweepRow>& rows,
                                                   const std::string& metric);

// True when the file's header is the sweep-table header rather than the
// single-score header.
bool is_sweep_table(const std::string& content);

// Best-of-N curves: `sampler,n,expected_max,std_error,repeats`, one file
// holding one line per (sampler, N).
void write_curves_csv(const std::string& path,
                      const std::vector<bestofn::BestOfNCurve>& curves);
std::vector<bestofn::BestOfNCurve> parse_curves_csv(const std::string& content,
                                                    const std::string& origin);
std::vector<bestofn::BestOfNCurve> read_curves_csv(const std::string& path);

// Difference curve: `n,expected_diff,std_error,repeats`.
void write_diff_csv(const std::string& path, const bestofn::DiffCurve& curve);
bestofn::DiffCurve parse_diff_csv(const std::string& content, const std::string& origin);
bestofn::DiffCurve read_diff_csv(const std::string& path);

} // namespace saudit::csvio
