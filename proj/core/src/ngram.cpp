#include "saudit/ngram.hpp"

#include "saudit/csv.hpp"
#include "saudit/io.hpp"
#include "saudit/parallel.hpp"
#include "saudit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace saudit::harness {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
    while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
    return text.substr(begin, end - begin);
}

// Values may be quoted to preserve leading/trailing spaces (prompts need it).
std::string unquote(const std::string& value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return value.substr(1, value.size() - 2);
    }
    return value;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        const std::string item = trim(value.substr(start, comma - start));
        if (!item.empty()) items.push_back(item);
        start = comma + 1;
    }
    return items;
}

std::string cell_label(const sampling::SamplerConfig& config, std::int64_t seed) {
    std::ostringstream out;
    out << sampling::to_string(config.kind) << " hyper=" << config.hyper_value()
        << " tau=" << config.temperature << " seed=" << seed;
    return out.str();
}

// Resume key; built from round-tripped fields so parsed rows match computed ones.
std::string row_key(sampling::SamplerKind sampler, double hyper, double temperature,
                    std::int64_t seed) {
    std::string key = sampling::to_string(sampler);
    key += '|';
    if (sampler != sampling::SamplerKind::basic) key += csvio::format_double(hyper);
    key += '|';
    key += csvio::format_double(temperature);
    key += '|';
    key += std::to_string(seed);
    return key;
}

} // namespace

NGramModel NGramModel::build(const std::string& corpus, int order, double smoothing) {
    if (order < 0) throw DataError("n-gram order must be >= 0");
    if (!(smoothing > 0.0)) throw DataError("smoothing constant must be > 0");

    NGramModel model;
    model.order_ = order;
    model.smoothing_ = smoothing;
    model.has_eos_ = corpus.find('\n') != std::string::npos;

    std::set<unsigned char> distinct;
    for (char c : corpus) {
        if (c != '\n') distinct.insert(static_cast<unsigned char>(c));
    }
    for (unsigned char c : distinct) model.alphabet_.push_back(static_cast<char>(c));
    for (std::uint32_t id = 0; id < model.alphabet_.size(); ++id) {
        model.ids_[model.alphabet_[id]] = id;
    }

    std::vector<std::uint32_t> stream;
    stream.reserve(corpus.size());
    for (char c : corpus) {
        stream.push_back(c == '\n' ? model.eos_id() : model.ids_.at(c));
    }
    if (stream.size() <= static_cast<std::size_t>(order)) {
        throw CorpusTooSmall("corpus has " + std::to_string(stream.size()) +
                             " symbols, need more than " + std::to_string(order));
    }

    const std::size_t vocab = model.vocab_size();
    const std::size_t n = static_cast<std::size_t>(order);
    std::string key(2 * n, '\0');
    for (std::size_t i = 0; i + n < stream.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            key[2 * j] = static_cast<char>(stream[i + j] & 0xFF);
            key[2 * j + 1] = static_cast<char>((stream[i + j] >> 8) & 0xFF);
        }
        Row& row = model.rows_[key];
        if (row.counts.empty()) row.counts.assign(vocab, 0);
        ++row.counts[stream[i + n]];
        ++row.total;
    }
    return model;
}

std::uint32_t NGramModel::id_of(char symbol) const {
    const auto it = ids_.find(symbol);
    if (it == ids_.end()) {
        throw DataError("symbol not in the model alphabet: byte " +
                        std::to_string(static_cast<int>(static_cast<unsigned char>(symbol))));
    }
    return it->second;
}

char NGramModel::char_of(std::uint32_t id) const {
    if (id >= alphabet_.size()) throw DataError("symbol id out of range");
    return alphabet_[id];
}

std::vector<std::uint32_t> NGramModel::ids_of(const std::string& text) const {
    std::vector<std::uint32_t> ids;
    ids.reserve(text.size());
    for (char c : text) ids.push_back(id_of(c));
    return ids;
}

std::string NGramModel::context_key(const std::vector<std::uint32_t>& context) const {
    if (context.size() != static_cast<std::size_t>(order_)) {
        throw DataError("context length " + std::to_string(context.size()) +
                        " does not match model order " + std::to_string(order_));
    }
    std::string key(2 * context.size(), '\0');
    for (std::size_t j = 0; j < context.size(); ++j) {
        key[2 * j] = static_cast<char>(context[j] & 0xFF);
        key[2 * j + 1] = static_cast<char>((context[j] >> 8) & 0xFF);
    }
    return key;
}

std::vector<double> NGramModel::next_probs(const std::vector<std::uint32_t>& context) const {
    const std::size_t vocab = vocab_size();
    std::vector<double> probs(vocab);
    const auto it = rows_.find(context_key(context));
    if (it == rows_.end()) {
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(vocab));
        return probs;
    }
    const Row& row = it->second;
    const double denom =
        static_cast<double>(row.total) + smoothing_ * static_cast<double>(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        probs[i] = (static_cast<double>(row.counts[i]) + smoothing_) / denom;
    }
    return probs;
}

sampling::LogitVector NGramModel::next_logits(const std::vector<std::uint32_t>& context) const {
    sampling::LogitVector logits;
    logits.values = next_probs(context);
    for (double& v : logits.values) v = std::log(v);
    return logits;
}

double NGramModel::prob(const std::vector<std::uint32_t>& context, std::uint32_t next) const {
    const std::size_t vocab = vocab_size();
    if (next >= vocab) throw DataError("symbol id out of range");
    const auto it = rows_.find(context_key(context));
    if (it == rows_.end()) return 1.0 / static_cast<double>(vocab);
    const Row& row = it->second;
    const double denom =
        static_cast<double>(row.total) + smoothing_ * static_cast<double>(vocab);
    return (static_cast<double>(row.counts[next]) + smoothing_) / denom;
}

std::uint64_t NGramModel::count(const std::vector<std::uint32_t>& context,
                                std::uint32_t next) const {
    if (next >= vocab_size()) throw DataError("symbol id out of range");
    const auto it = rows_.find(context_key(context));
    if (it == rows_.end()) return 0;
    return it->second.counts[next];
}

std::string generate(const NGramModel& model, const sampling::SamplerConfig& config,
                     std::uint64_t seed, const std::string& prompt, int max_len) {
    config.validate();
    if (max_len < 0) throw DataError("max_len must be >= 0");
    const std::vector<std::uint32_t> prompt_ids = model.ids_of(prompt);
    const std::size_t n = static_cast<std::size_t>(model.order());
    if (prompt_ids.size() < n) {
        throw DataError("prompt has " + std::to_string(prompt_ids.size()) +
                        " symbols, model order needs " + std::to_string(n));
    }
    std::vector<std::uint32_t> context(prompt_ids.end() - static_cast<std::ptrdiff_t>(n),
                                       prompt_ids.end());
    std::string out;
    out.reserve(static_cast<std::size_t>(max_len));
    for (int step = 0; step < max_len; ++step) {
        const sampling::LogitVector logits = model.next_logits(context);
        const std::uint32_t token =
            sampling::sample(config, logits, seed, static_cast<std::uint64_t>(step));
        if (model.has_eos() && token == model.eos_id()) break;
        out.push_back(model.char_of(token));
        if (n > 0) {
            context.erase(context.begin());
            context.push_back(token);
        }
    }
    return out;
}

GenerationRun make_run(const NGramModel& model, const sampling::SamplerConfig& config,
                       std::int64_t seed, const std::vector<std::string>& prompts, int max_len) {
    if (prompts.empty()) throw EmptyInput("no prompts");
    GenerationRun run;
    run.config = config;
    run.seed = seed;
    run.prompts = prompts;
    run.sequences.reserve(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        const std::uint64_t prompt_seed = rng::derive(static_cast<std::uint64_t>(seed), i);
        run.sequences.push_back(generate(model, config, prompt_seed, prompts[i], max_len));
    }
    return run;
}

MetricPair score_run(const GenerationRun& run, const NGramModel& model) {
    if (run.sequences.empty() || run.sequences.size() != run.prompts.size()) {
        throw DataError("generation run needs aligned prompts and sequences");
    }
    const std::size_t n = static_cast<std::size_t>(model.order());
    double quality_sum = 0.0;
    std::size_t scored_sequences = 0;
    std::unordered_set<std::string> bigrams;
    std::size_t slots = 0;

    for (std::size_t i = 0; i < run.sequences.size(); ++i) {
        const std::string& sequence = run.sequences[i];
        if (!sequence.empty()) {
            const std::vector<std::uint32_t> prompt_ids = model.ids_of(run.prompts[i]);
            if (prompt_ids.size() < n) {
                throw DataError("prompt shorter than model order in run");
            }
            std::vector<std::uint32_t> context(
                prompt_ids.end() - static_cast<std::ptrdiff_t>(n), prompt_ids.end());
            double log_lik = 0.0;
            for (char c : sequence) {
                const std::uint32_t id = model.id_of(c);
                log_lik += std::log(model.prob(context, id));
                if (n > 0) {
                    context.erase(context.begin());
                    context.push_back(id);
                }
            }
            quality_sum += log_lik / static_cast<double>(sequence.size());
            ++scored_sequences;
        }
        if (sequence.size() >= 2) {
            for (std::size_t j = 0; j + 1 < sequence.size(); ++j) {
                bigrams.insert(sequence.substr(j, 2));
            }
            slots += sequence.size() - 1;
        }
    }
    if (scored_sequences == 0) throw EmptyGeneration("every sequence in the run is empty");

    MetricPair metrics;
    metrics.quality = quality_sum / static_cast<double>(scored_sequences);
    metrics.diversity =
        slots == 0 ? 0.0 : static_cast<double>(bigrams.size()) / static_cast<double>(slots);
    return metrics;
}

std::vector<sampling::SamplerConfig> HarnessConfig::build_grid() const {
    std::vector<sampling::SamplerConfig> grid;
    using sampling::SamplerConfig;
    for (double tau : temperatures) grid.push_back(SamplerConfig::make_basic(tau, truncation));
    for (int k : top_k) {
        for (double tau : temperatures) {
            grid.push_back(SamplerConfig::make_top_k(k, tau, truncation));
        }
    }
    for (double p : top_p) {
        for (double tau : temperatures) {
            grid.push_back(SamplerConfig::make_top_p(p, tau, truncation));
        }
    }
    for (double p : min_p) {
        for (double tau : temperatures) {
            grid.push_back(SamplerConfig::make_min_p(p, tau, truncation));
        }
    }
    return grid;
}

HarnessConfig load_harness_config(const std::string& path) {
    const std::string content = io::read_text_file(path);
    const std::string dir = io::dirname(path);

    HarnessConfig config;
    bool saw_corpus = false;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(start, end - start);
        const bool last = end == content.size();
        start = end + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            if (last) break;
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw DataError(path + ":" + std::to_string(line_number) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = unquote(trim(stripped.substr(eq + 1)));
        try {
            if (key == "corpus") {
                config.corpus_path = io::join_path(dir, value);
                saw_corpus = true;
            } else if (key == "ngram_order") {
                config.ngram_order = static_cast<int>(csvio::parse_int64(value, key));
            } else if (key == "smoothing") {
                config.smoothing = csvio::parse_double(value, key);
            } else if (key == "max_len") {
                config.max_len = static_cast<int>(csvio::parse_int64(value, key));
            } else if (key == "prompt") {
                config.prompts.push_back(value);
            } else if (key == "temperatures") {
                for (const std::string& item : split_list(value)) {
                    config.temperatures.push_back(csvio::parse_double(item, key));
                }
            } else if (key == "top_k") {
                for (const std::string& item : split_list(value)) {
                    config.top_k.push_back(static_cast<int>(csvio::parse_int64(item, key)));
                }
            } else if (key == "top_p") {
                for (const std::string& item : split_list(value)) {
                    config.top_p.push_back(csvio::parse_double(item, key));
                }
            } else if (key == "min_p") {
                for (const std::string& item : split_list(value)) {
                    config.min_p.push_back(csvio::parse_double(item, key));
                }
            } else if (key == "seeds") {
                for (const std::string& item : split_list(value)) {
                    config.seeds.push_back(csvio::parse_int64(item, key));
                }
            } else if (key == "truncation") {
                config.truncation = sampling::truncation_order_from_string(value);
            } else {
                throw DataError("unknown key '" + key + "'");
            }
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_number) + ": " + e.what());
        }
        if (last) break;
    }

    if (!saw_corpus) throw DataError(path + ": missing corpus");
    if (config.prompts.empty()) throw DataError(path + ": needs at least one prompt");
    if (config.temperatures.empty()) throw DataError(path + ": needs temperatures");
    if (config.seeds.empty()) throw DataError(path + ": needs seeds");
    if (config.ngram_order < 0) throw DataError(path + ": ngram_order must be >= 0");
    if (!(config.smoothing > 0.0)) throw DataError(path + ": smoothing must be > 0");
    if (config.max_len < 1) throw DataError(path + ": max_len must be >= 1");
    for (double tau : config.temperatures) {
        if (!(tau >= 0.0)) throw DataError(path + ": temperatures must be >= 0");
    }
    for (int k : config.top_k) {
        if (k < 1) throw DataError(path + ": top_k values must be >= 1");
    }
    for (double p : config.top_p) {
        if (!(p > 0.0) || p > 1.0) throw DataError(path + ": top_p values must be in (0,1]");
    }
    for (double p : config.min_p) {
        if (!(p > 0.0) || p > 1.0) throw DataError(path + ": min_p values must be in (0,1]");
    }
    return config;
}

SweepResult run_sweep(const NGramModel& model, const std::vector<sampling::SamplerConfig>& grid,
                      const std::vector<std::int64_t>& seeds,
                      const std::vector<std::string>& prompts, int max_len,
                      const std::string& csv_path) {
    if (grid.empty()) throw EmptyInput("empty sampler grid");
    if (seeds.empty()) throw EmptyInput("no seeds");
    if (prompts.empty()) throw EmptyInput("no prompts");
    for (const sampling::SamplerConfig& config : grid) config.validate();
    for (const std::string& prompt : prompts) {
        const auto ids = model.ids_of(prompt);  // rejects out-of-alphabet bytes
        if (ids.size() < static_cast<std::size_t>(model.order())) {
            throw DataError("prompt '" + prompt + "' is shorter than the model order");
        }
    }

    std::map<std::string, SweepRow> existing;
    bool had_file = false;
    if (!csv_path.empty() && io::file_exists(csv_path)) {
        had_file = true;
        for (const SweepRow& row : csvio::read_sweep_table(csv_path)) {
            existing.emplace(row_key(row.sampler, row.hyper, row.temperature, row.seed), row);
        }
    }

    struct Cell {
        const sampling::SamplerConfig* config;
        std::int64_t seed;
        bool fresh = false;
    };
    std::vector<Cell> cells;
    cells.reserve(grid.size() * seeds.size());
    SweepResult result;
    result.rows.resize(grid.size() * seeds.size());
    for (const sampling::SamplerConfig& config : grid) {
        for (std::int64_t seed : seeds) {
            Cell cell{&config, seed, false};
            const auto it = existing.find(
                row_key(config.kind, config.hyper_value(), config.temperature, seed));
            if (it != existing.end()) {
                result.rows[cells.size()] = it->second;
                ++result.resumed;
            } else {
                cell.fresh = true;
                ++result.generated;
            }
            cells.push_back(cell);
        }
    }

    std::vector<std::string> errors(cells.size());
    parallel_for(cells.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (!cells[i].fresh) continue;
            const Cell& cell = cells[i];
            try {
                const GenerationRun run =
                    make_run(model, *cell.config, cell.seed, prompts, max_len);
                const MetricPair metrics = score_run(run, model);
                SweepRow row;
                row.sampler = cell.config->kind;
                row.hyper = cell.config->hyper_value();
                row.temperature = cell.config->temperature;
                row.seed = cell.seed;
                row.quality = metrics.quality;
                row.diversity = metrics.diversity;
                result.rows[i] = row;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    });
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i].empty()) {
            throw DataError("sweep cell " + cell_label(*cells[i].config, cells[i].seed) +
                            " failed: " + errors[i]);
        }
    }

    if (!csv_path.empty()) {
        std::ostringstream out;
        if (!had_file) out << csvio::sweep_header() << '\n';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].fresh) out << csvio::sweep_row_line(result.rows[i]) << '\n';
        }
        if (!had_file) {
            io::write_text_file(csv_path, out.str());
        } else {
            io::append_text_file(csv_path, out.str());
        }
    }
    return result;
}

} // namespace saudit::harness
