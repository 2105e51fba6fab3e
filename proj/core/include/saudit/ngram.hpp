#pragma once

#include "saudit/errors.hpp"
#include "saudit/sampling.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace saudit::harness {

// Character-level n-gram model with add-constant smoothing. Symbols are the
// corpus's distinct bytes; a newline marks a sentence boundary and becomes
// the reserved end symbol (present only when the corpus contains newlines).
// Unseen contexts fall back to the uniform distribution.
class NGramModel {
public:
    // Throws CorpusTooSmall when the corpus has at most `order` symbols, and
    // DataError for order < 0 or smoothing <= 0. order = 0 is a unigram model.
    static NGramModel build(const std::string& corpus, int order, double smoothing);

    int order() const { return order_; }
    double smoothing() const { return smoothing_; }
    std::size_t vocab_size() const { return alphabet_.size() + (has_eos_ ? 1 : 0); }
    bool has_eos() const { return has_eos_; }
    std::uint32_t eos_id() const { return static_cast<std::uint32_t>(alphabet_.size()); }

    // Throws DataError for a byte outside the corpus alphabet.
    std::uint32_t id_of(char symbol) const;
    char char_of(std::uint32_t id) const;
    std::vector<std::uint32_t> ids_of(const std::string& text) const;

    // Smoothed next-symbol probabilities for a context of exactly order()
    // ids: (count + s) / (total + s * V), or uniform when the context never
    // occurred in the corpus.
    std::vector<double> next_probs(const std::vector<std::uint32_t>& context) const;

    // log(next_probs), the logits handed to the samplers.
    sampling::LogitVector next_logits(const std::vector<std::uint32_t>& context) const;

    // Smoothed probability of one (context, next) transition.
    double prob(const std::vector<std::uint32_t>& context, std::uint32_t next) const;

    // Raw corpus count for one (context, next) transition; 0 when unseen.
    std::uint64_t count(const std::vector<std::uint32_t>& context, std::uint32_t next) const;

private:
    struct Row {
        std::vector<std::uint32_t> counts;
        std::uint64_t total = 0;
    };

    std::string context_key(const std::vector<std::uint32_t>& context) const;

    int order_ = 0;
    double smoothing_ = 1.0;
    bool has_eos_ = false;
    std::vector<char> alphabet_;                    // id -> byte, sorted
    std::unordered_map<char, std::uint32_t> ids_;   // byte -> id
    std::unordered_map<std::string, Row> rows_;     // encoded context -> counts
};

// Autoregressive completion: one seeded sample() call per step with
// draw_index = step, stopping at max_len symbols or the end symbol. Returns
// the continuation only — prompt and end symbol excluded. Deterministic in
// (config, seed, prompt); the RNG stream does not depend on the sampler
// config, so equivalent configs produce identical strings.
std::string generate(const NGramModel& model, const sampling::SamplerConfig& config,
                     std::uint64_t seed, const std::string& prompt, int max_len);

// One sweep cell: the continuations generated for every prompt at one
// (config, seed), prompts aligned with sequences.
struct GenerationRun {
    sampling::SamplerConfig config;
    std::int64_t seed = 0;
    std::vector<std::string> prompts;
    std::vector<std::string> sequences;
    std::string prompt_set;
};

// Runs generate() per prompt with the per-prompt stream derived from
// (seed, prompt index).
GenerationRun make_run(const NGramModel& model, const sampling::SamplerConfig& config,
                       std::int64_t seed, const std::vector<std::string>& prompts, int max_len);

struct MetricPair {
    double quality = 0.0;    // mean per-symbol log-likelihood in nats, <= 0
    double diversity = 0.0;  // distinct-2 ratio across sequences, in [0, 1]
};

// quality: mean over non-empty sequences of the mean log P(symbol | context),
// contexts seeded from each prompt. diversity: distinct 2-grams pooled across
// sequences divided by total 2-gram slots (0 when no sequence reaches length
// 2). Throws EmptyGeneration when every sequence is empty.
MetricPair score_run(const GenerationRun& run, const NGramModel& model);

// Sweep definition: model parameters, prompts, and the sampler grid, loadable
// from a plain key-value config file.
struct HarnessConfig {
    std::string corpus_path;  // resolved against the config file's directory
    int ngram_order = 3;
    double smoothing = 1.0;
    int max_len = 200;
    std::vector<std::string> prompts;
    std::vector<double> temperatures;
    std::vector<int> top_k;
    std::vector<double> top_p;
    std::vector<double> min_p;
    std::vector<std::int64_t> seeds;
    sampling::TruncationOrder truncation = sampling::TruncationOrder::temp_before_truncation;

    // basic x temperatures, then each top_k / top_p / min_p hyper crossed
    // with the full temperature list, in declaration order.
    std::vector<sampling::SamplerConfig> build_grid() const;
};

// Parses `key = value` lines ('#' starts a comment; `prompt` repeats; lists
// are comma-separated). Unknown keys and malformed values -> DataError.
HarnessConfig load_harness_config(const std::string& path);

struct SweepRow {
    sampling::SamplerKind sampler = sampling::SamplerKind::basic;
    double hyper = 0.0;
    double temperature = 1.0;
    std::int64_t seed = 0;
    double quality = 0.0;
    double diversity = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // complete table: resumed rows + new rows
    std::size_t generated = 0;   // cells computed by this call
    std::size_t resumed = 0;     // cells already present in the output file
};

// One row per (config, seed). Cells run in parallel; rows land in grid order.
// When csv_path is non-empty, rows already present there (keyed on sampler,
// hyper, temperature, seed) are kept as-is and only missing cells run; new
// rows are appended to the file. Empty csv_path keeps everything in memory.
SweepResult run_sweep(const NGramModel& model, const std::vector<sampling::SamplerConfig>& grid,
                      const std::vector<std::int64_t>& seeds,
                      const std::vector<std::string>& prompts, int max_len,
                      const std::string& csv_path);

} // namespace saudit::harness
