// sampler-audit: command line front end for the sampler + audit library.
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <saudit/bestofn.hpp>
#include <saudit/csv.hpp>
#include <saudit/errors.hpp>
#include <saudit/io.hpp>
#include <saudit/ngram.hpp>
#include <saudit/report.hpp>
#include <saudit/sampling.hpp>
#include <saudit/stats.hpp>
#include <saudit/svgplot.hpp>

namespace {

using nlohmann::json;
namespace sampling = saudit::sampling;
namespace csvio = saudit::csvio;
namespace harness = saudit::harness;
namespace bestofn = saudit::bestofn;
namespace report = saudit::report;
namespace svgplot = saudit::plot;
namespace stats = saudit::stats;

// Wrong invocation (bad flag combinations, bad enum values). Exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string join_command(int argc, char** argv) {
    std::string out = report::TOOL_NAME;
    for (int i = 1; i < argc; ++i) {
        out += ' ';
        out += argv[i];
    }
    return out;
}

sampling::SamplerKind parse_kind(const std::string& name) {
    try {
        return sampling::sampler_kind_from_string(name);
    } catch (const saudit::Error&) {
        throw UsageError("unknown sampler '" + name + "' (expected basic, top_k, top_p, or min_p)");
    }
}

sampling::TruncationOrder parse_order(const std::string& name) {
    try {
        return sampling::truncation_order_from_string(name);
    } catch (const saudit::Error&) {
        throw UsageError("unknown order '" + name + "' (expected temp-before or temp-after)");
    }
}

std::string format_vector(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += csvio::format_double(values[i]);
    }
    out += "]";
    return out;
}

void write_report_file(const std::string& path, const std::string& command,
                       const std::vector<std::string>& input_paths, json results) {
    std::vector<report::InputDigest> inputs;
    inputs.reserve(input_paths.size());
    for (const auto& p : input_paths) inputs.push_back(report::digest_file(p));
    const json doc = report::make_report(command, inputs, std::move(results));
    saudit::io::write_text_file(path, report::report_to_string(doc));
}

json curves_to_json(const std::vector<bestofn::BestOfNCurve>& curves) {
    json arr = json::array();
    for (const auto& curve : curves) {
        json points = json::array();
        for (const auto& pt : curve.points) {
            points.push_back({{"n", pt.n},
                              {"expected_max", pt.expected_max},
                              {"std_error", pt.std_error},
                              {"repeats", pt.repeats}});
        }
        arr.push_back({{"sampler", sampling::to_string(curve.sampler)}, {"points", points}});
    }
    return json{{"curves", arr}};
}

json diff_to_json(const bestofn::DiffCurve& curve) {
    json points = json::array();
    for (const auto& pt : curve.points) {
        points.push_back({{"n", pt.n},
                          {"expected_diff", pt.expected_diff},
                          {"std_error", pt.std_error},
                          {"repeats", pt.repeats}});
    }
    return json{{"target", sampling::to_string(curve.target)}, {"points", points}};
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
    std::string logits_path;
    std::string sampler = "basic";
    int k = 0;
    double p = 0.0;
    double temperature = 1.0;
    std::string order = "temp-before";
    std::uint64_t seed = 0;
    int row = 0;
    int draws = 1;
    int draw_index = 0;
    bool explain = false;
    bool k_set = false;
    bool p_set = false;
};

sampling::SamplerConfig config_from_args(const SampleArgs& args) {
    const sampling::SamplerKind kind = parse_kind(args.sampler);
    const sampling::TruncationOrder order = parse_order(args.order);
    switch (kind) {
        case sampling::SamplerKind::basic:
            if (args.k_set || args.p_set)
                throw UsageError("sampler 'basic' takes neither --k nor --p");
            return sampling::SamplerConfig::make_basic(args.temperature, order);
        case sampling::SamplerKind::top_k:
            if (!args.k_set) throw UsageError("sampler 'top_k' requires --k");
            if (args.p_set) throw UsageError("sampler 'top_k' takes --k, not --p");
            return sampling::SamplerConfig::make_top_k(args.k, args.temperature, order);
        case sampling::SamplerKind::top_p:
            if (!args.p_set) throw UsageError("sampler 'top_p' requires --p");
            if (args.k_set) throw UsageError("sampler 'top_p' takes --p, not --k");
            return sampling::SamplerConfig::make_top_p(args.p, args.temperature, order);
        case sampling::SamplerKind::min_p:
            if (!args.p_set) throw UsageError("sampler 'min_p' requires --p");
            if (args.k_set) throw UsageError("sampler 'min_p' takes --p, not --k");
            return sampling::SamplerConfig::make_min_p(args.p, args.temperature, order);
    }
    throw UsageError("unknown sampler '" + args.sampler + "'");
}

void check_trace(const sampling::SamplerConfig& config, const sampling::LogitVector& logits,
                 const sampling::SampleTrace& trace, std::uint64_t seed, int draw_index) {
    constexpr double TOL = 1e-12;
    double max_delta = 0.0;
    const std::uint32_t replayed =
        sampling::sample(config, logits, seed, static_cast<std::uint64_t>(draw_index));
    if (replayed != trace.token)
        throw std::runtime_error("trace re-check failed: replayed token differs");
    if (!trace.greedy) {
        const sampling::ProbabilityDistribution dist =
            sampling::token_distribution(config, logits);
        if (dist.size() != trace.final_dist.size())
            throw std::runtime_error("trace re-check failed: distribution size differs");
        double total = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            max_delta = std::max(max_delta, std::abs(dist.probs[i] - trace.final_dist.probs[i]));
            total += trace.final_dist.probs[i];
        }
        max_delta = std::max(max_delta, std::abs(total - 1.0));
        if (max_delta > TOL)
            throw std::runtime_error("trace re-check failed: max delta " +
                                     csvio::format_double(max_delta));
    }
    std::cout << "re-check: ok (max delta " << csvio::format_double(max_delta) << ")\n";
}

void run_sample(const SampleArgs& args) {
    const sampling::SamplerConfig config = config_from_args(args);
    if (args.row < 0) throw UsageError("--row must be >= 0");
    if (args.draws < 1) throw UsageError("--draws must be >= 1");
    if (args.draw_index < 0) throw UsageError("--draw-index must be >= 0");

    const csvio::LogitFile file = csvio::read_logit_csv(args.logits_path);
    if (static_cast<std::size_t>(args.row) >= file.steps.size())
        throw saudit::DataError(args.logits_path + ": row " + std::to_string(args.row) +
                                " out of range (file has " + std::to_string(file.steps.size()) +
                                " rows)");
    const sampling::LogitVector& logits = file.steps[static_cast<std::size_t>(args.row)];

    if (!args.explain) {
        for (int i = 0; i < args.draws; ++i)
            std::cout << sampling::sample(config, logits, args.seed,
                                          static_cast<std::uint64_t>(args.draw_index + i))
                      << "\n";
        return;
    }

    const sampling::SampleTrace trace = sampling::sample_explain(
        config, logits, args.seed, static_cast<std::uint64_t>(args.draw_index));
    std::cout << "sampler: " << sampling::to_string(config.kind);
    if (config.kind == sampling::SamplerKind::top_k)
        std::cout << " (k = " << config.k << ")";
    else if (config.kind != sampling::SamplerKind::basic)
        std::cout << " (p = " << csvio::format_double(config.p) << ")";
    std::cout << "\norder: " << sampling::to_string(config.order) << "\n";
    std::cout << "temperature: " << csvio::format_double(config.temperature) << "\n";
    std::cout << "logits: " << format_vector(logits.values) << "\n";
    if (trace.greedy) {
        std::cout << "temperature 0: greedy argmax\n";
        std::cout << "token: " << trace.token << "\n";
        check_trace(config, logits, trace, args.seed, args.draw_index);
        return;
    }
    std::cout << "scaled logits: " << format_vector(trace.scaled_logits) << "\n";
    std::cout << "pre-truncation probs: " << format_vector(trace.pre_truncation.probs) << "\n";
    std::cout << "keep set (" << trace.keep.size() << " of " << logits.vocab_size() << "):";
    for (const std::uint32_t idx : trace.keep.indices) std::cout << ' ' << idx;
    std::cout << "\nfinal probs: " << format_vector(trace.final_dist.probs) << "\n";
    std::cout << "u: " << csvio::format_double(trace.u) << "\n";
    std::cout << "token: " << trace.token << "\n";
    check_trace(config, logits, trace, args.seed, args.draw_index);
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string config_path;
    std::string out_path;
    std::string order;
    int max_len = -1;
};

void run_sweep_cmd(const SweepArgs& args) {
    harness::HarnessConfig cfg = harness::load_harness_config(args.config_path);
    if (!args.order.empty()) cfg.truncation = parse_order(args.order);
    if (args.max_len >= 0) cfg.max_len = args.max_len;

    const std::string corpus = saudit::io::read_text_file(cfg.corpus_path);
    const harness::NGramModel model =
        harness::NGramModel::build(corpus, cfg.ngram_order, cfg.smoothing);
    const std::vector<sampling::SamplerConfig> grid = cfg.build_grid();

    const harness::SweepResult result =
        harness::run_sweep(model, grid, cfg.seeds, cfg.prompts, cfg.max_len, args.out_path);

    std::cout << "grid: " << grid.size() << " configs x " << cfg.seeds.size() << " seeds = "
              << result.rows.size() << " cells\n";
    std::cout << "generated " << result.generated << ", resumed " << result.resumed << "\n";
    std::cout << "wrote " << args.out_path << "\n";
}

// ---- analyze-ttests --------------------------------------------------------

struct TTestArgs {
    std::string input_path;
    std::vector<double> alphas;
    double ci_level = 0.95;
    std::string json_path;
};

void run_analyze_ttests(const TTestArgs& args, const std::string& command) {
    const auto rows = csvio::read_human_eval_csv(args.input_path);
    const report::BatteryResult battery = report::run_battery(rows, args.alphas, args.ci_level);
    std::cout << report::battery_text_table(battery);
    if (!args.json_path.empty()) {
        write_report_file(args.json_path, command, {args.input_path},
                          report::battery_to_json(battery));
        std::cout << "wrote " << args.json_path << "\n";
    }
}

// ---- analyze-iut -----------------------------------------------------------

struct IUTArgs {
    std::string input_path;
    std::vector<double> pvalues;
    std::vector<double> alphas;
    std::string json_path;
};

void run_analyze_iut(const IUTArgs& args, const std::string& command) {
    if (args.input_path.empty() == args.pvalues.empty())
        throw UsageError("pass exactly one of --input or --pvalues");

    std::vector<double> pvalues = args.pvalues;
    std::vector<std::string> inputs;
    if (!args.input_path.empty()) {
        const auto rows = csvio::read_human_eval_csv(args.input_path);
        const report::BatteryResult battery = report::run_battery(rows, args.alphas, 0.95);
        pvalues = battery.iut.component_pvalues;
        inputs.push_back(args.input_path);
    }
    const stats::IUTResult result = stats::iut(pvalues, args.alphas);

    std::cout << "components: " << result.component_pvalues.size() << "\n";
    std::cout << "iut p (max component p): " << csvio::format_double(result.iut_p) << "\n";
    for (const double alpha : args.alphas) {
        std::cout << "reject at alpha " << csvio::format_double(alpha) << ": "
                  << (result.reject_at.at(alpha) ? "yes" : "no") << "\n";
    }

    if (!args.json_path.empty()) {
        json iut_json{{"iut_p", result.iut_p}, {"component_pvalues", result.component_pvalues}};
        for (const double alpha : args.alphas)
            iut_json["reject_" + report::alpha_suffix(alpha)] = result.reject_at.at(alpha);
        write_report_file(args.json_path, command, inputs, json{{"iut", iut_json}});
        std::cout << "wrote " << args.json_path << "\n";
    }
}

// ---- analyze-bestofn / analyze-diff ---------------------------------------

struct BestOfNArgs {
    std::string scores_path;
    std::string metric = "quality";
    std::string target = "min_p";
    std::vector<int> ns;
    int n_min = 1;
    int n_max = 100;
    int repeats = 200;
    std::uint64_t seed = 0;
    std::vector<std::string> samplers;
    std::string out_path;
    std::string json_path;
};

std::vector<bestofn::ScoreRecord> load_score_records(const BestOfNArgs& args) {
    const std::string content = saudit::io::read_text_file(args.scores_path);
    if (args.metric != "quality" && args.metric != "diversity")
        throw UsageError("unknown metric '" + args.metric + "' (expected quality or diversity)");
    if (csvio::is_sweep_table(content)) {
        const auto rows = csvio::parse_sweep_table(content, args.scores_path);
        return csvio::to_score_records(rows, args.metric);
    }
    return csvio::parse_score_table(content, args.scores_path);
}

std::vector<int> resolve_ns(const BestOfNArgs& args) {
    if (!args.ns.empty()) {
        for (const int n : args.ns)
            if (n < 1) throw UsageError("--ns entries must be >= 1");
        return args.ns;
    }
    if (args.n_min < 1) throw UsageError("--n-min must be >= 1");
    if (args.n_max < args.n_min) throw UsageError("--n-max must be >= --n-min");
    std::vector<int> ns;
    ns.reserve(static_cast<std::size_t>(args.n_max - args.n_min + 1));
    for (int n = args.n_min; n <= args.n_max; ++n) ns.push_back(n);
    return ns;
}

void warn_incomplete(const bestofn::ConfigPool& pool) {
    if (pool.incomplete.empty()) return;
    std::cerr << "warning: " << pool.incomplete.size()
              << " config(s) have missing seeds:";
    for (const auto& label : pool.incomplete) std::cerr << " [" << label << "]";
    std::cerr << "\n";
}

void run_analyze_bestofn(const BestOfNArgs& args, const std::string& command) {
    if (args.repeats < 1) throw UsageError("--repeats must be >= 1");
    const auto records = load_score_records(args);
    const bestofn::ConfigPool pool = bestofn::aggregate_seeds(records);
    warn_incomplete(pool);
    const std::vector<int> ns = resolve_ns(args);

    std::vector<sampling::SamplerKind> kinds;
    if (args.samplers.empty()) {
        for (const auto& [kind, configs] : pool.samplers)
            if (!configs.empty()) kinds.push_back(kind);
    } else {
        for (const auto& name : args.samplers) kinds.push_back(parse_kind(name));
    }
    if (kinds.empty()) throw saudit::DataError(args.scores_path + ": no usable configs");

    std::vector<bestofn::BestOfNCurve> curves;
    curves.reserve(kinds.size());
    for (const auto kind : kinds)
        curves.push_back(bestofn::best_of_n_curve(pool, kind, ns, args.repeats, args.seed));

    csvio::write_curves_csv(args.out_path, curves);
    std::cout << "curves: " << curves.size() << " sampler(s) x " << ns.size()
              << " subset sizes (" << args.repeats << " repeats)\n";
    std::cout << "wrote " << args.out_path << "\n";
    if (!args.json_path.empty()) {
        write_report_file(args.json_path, command, {args.scores_path}, curves_to_json(curves));
        std::cout << "wrote " << args.json_path << "\n";
    }
}

void run_analyze_diff(const BestOfNArgs& args, const std::string& command) {
    if (args.repeats < 1) throw UsageError("--repeats must be >= 1");
    const auto records = load_score_records(args);
    const bestofn::ConfigPool pool = bestofn::aggregate_seeds(records);
    warn_incomplete(pool);
    const std::vector<int> ns = resolve_ns(args);
    const sampling::SamplerKind target = parse_kind(args.target);

    const bestofn::DiffCurve curve =
        bestofn::diff_curve(pool, target, ns, args.repeats, args.seed);
    csvio::write_diff_csv(args.out_path, curve);
    std::cout << "diff curve: " << sampling::to_string(target) << " minus best other, "
              << ns.size() << " subset sizes (" << args.repeats << " repeats)\n";
    std::cout << "wrote " << args.out_path << "\n";
    if (!args.json_path.empty()) {
        write_report_file(args.json_path, command, {args.scores_path}, diff_to_json(curve));
        std::cout << "wrote " << args.json_path << "\n";
    }
}

// ---- plot ------------------------------------------------------------------

struct PlotArgs {
    std::string input_path;
    std::string format = "svg";
    std::string out_path;
    std::string title;
};

bool looks_like_json(const std::string& content) {
    for (const char c : content) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return c == '{';
    }
    return false;
}

std::string first_data_line(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return line;
    }
    return "";
}

void run_plot(const PlotArgs& args) {
    if (args.format != "svg" && args.format != "tsv")
        throw UsageError("unknown format '" + args.format + "' (expected svg or tsv)");
    const bool svg = args.format == "svg";
    const std::string content = saudit::io::read_text_file(args.input_path);

    std::string title = args.title;
    std::string rendered;
    if (looks_like_json(content)) {
        json doc;
        try {
            doc = json::parse(content);
        } catch (const json::exception& e) {
            throw saudit::DataError(args.input_path + ": malformed JSON: " + e.what());
        }
        const json results = doc.contains("results") ? doc["results"] : doc;
        if (title.empty()) title = "score by sampler and temperature";
        rendered = svg ? svgplot::battery_svg(results, title) : svgplot::battery_tsv(results);
    } else {
        const std::string header = first_data_line(content);
        if (header == csvio::curve_header()) {
            const auto curves = csvio::parse_curves_csv(content, args.input_path);
            if (title.empty()) title = "expected best-of-n score";
            rendered = svg ? svgplot::curves_svg(curves, title) : svgplot::curves_tsv(curves);
        } else if (header == csvio::diff_header()) {
            const auto curve = csvio::parse_diff_csv(content, args.input_path);
            if (title.empty()) title = "best-of-n score difference";
            rendered = svg ? svgplot::diff_svg(curve, title) : svgplot::diff_tsv(curve);
        } else {
            throw saudit::DataError(args.input_path +
                                    ": unrecognized input (expected a curve CSV, a diff CSV, or "
                                    "a battery report JSON)");
        }
    }
    saudit::io::write_text_file(args.out_path, rendered);
    std::cout << "wrote " << args.out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temperature-scaled truncation samplers and their statistical audit"};
    app.set_version_flag("--version", std::string(report::TOOL_VERSION));
    app.require_subcommand(1);

    const std::string command = join_command(argc, argv);

    SampleArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample", "draw tokens from a logit CSV");
    sample_cmd->add_option("--logits", sample_args.logits_path, "logit CSV path")->required();
    sample_cmd->add_option("--sampler", sample_args.sampler,
                           "basic, top_k, top_p, or min_p (default basic)");
    auto* k_opt = sample_cmd->add_option("--k", sample_args.k, "top-k cutoff");
    auto* p_opt = sample_cmd->add_option("--p", sample_args.p, "top-p mass / min-p ratio");
    sample_cmd->add_option("--temperature", sample_args.temperature,
                           "temperature (default 1, 0 = greedy)");
    sample_cmd->add_option("--order", sample_args.order,
                           "temp-before or temp-after (default temp-before)");
    sample_cmd->add_option("--seed", sample_args.seed, "RNG seed (default 0)");
    sample_cmd->add_option("--row", sample_args.row, "logit row to sample from (default 0)");
    sample_cmd->add_option("--draws", sample_args.draws, "number of draws (default 1)");
    sample_cmd->add_option("--draw-index", sample_args.draw_index,
                           "index of the first draw in the seed's stream (default 0)");
    sample_cmd->add_flag("--explain", sample_args.explain,
                         "print the full pipeline trace for one draw");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the generation grid for a harness config");
    sweep_cmd->add_option("--config", sweep_args.config_path, "harness config path")->required();
    sweep_cmd->add_option("--out", sweep_args.out_path, "output CSV (resumable)")->required();
    sweep_cmd->add_option("--order", sweep_args.order, "override the config's truncation order");
    sweep_cmd->add_option("--max-len", sweep_args.max_len, "override the config's max length");

    TTestArgs ttest_args;
    auto* ttest_cmd =
        app.add_subcommand("analyze-ttests", "paired one-sided t-tests over a human-eval CSV");
    ttest_cmd->add_option("--input", ttest_args.input_path, "human-eval CSV path")->required();
    ttest_cmd->add_option("--alpha", ttest_args.alphas,
                          "significance level(s), repeatable (default 0.05 0.01)")
        ->delimiter(',');
    ttest_cmd->add_option("--ci-level", ttest_args.ci_level,
                          "confidence level for group means (default 0.95)");
    ttest_cmd->add_option("--json", ttest_args.json_path, "write the battery report JSON here");

    IUTArgs iut_args;
    auto* iut_cmd =
        app.add_subcommand("analyze-iut", "intersection-union test over component p-values");
    iut_cmd->add_option("--input", iut_args.input_path, "human-eval CSV path");
    iut_cmd->add_option("--pvalues", iut_args.pvalues, "explicit component p-values")
        ->delimiter(',');
    iut_cmd->add_option("--alpha", iut_args.alphas,
                        "significance level(s), repeatable (default 0.05 0.01)")
        ->delimiter(',');
    iut_cmd->add_option("--json", iut_args.json_path, "write the IUT report JSON here");

    BestOfNArgs bestofn_args;
    auto* bestofn_cmd = app.add_subcommand(
        "analyze-bestofn", "expected best-of-n score curves from a score table");
    bestofn_cmd->add_option("--scores", bestofn_args.scores_path, "score or sweep CSV path")
        ->required();
    bestofn_cmd->add_option("--metric", bestofn_args.metric,
                            "column to score a sweep CSV by (default quality)");
    bestofn_cmd->add_option("--ns", bestofn_args.ns, "explicit subset sizes")->delimiter(',');
    bestofn_cmd->add_option("--n-min", bestofn_args.n_min, "smallest subset size (default 1)");
    bestofn_cmd->add_option("--n-max", bestofn_args.n_max, "largest subset size (default 100)");
    bestofn_cmd->add_option("--repeats", bestofn_args.repeats,
                            "Monte Carlo repeats per subset size (default 200)");
    bestofn_cmd->add_option("--seed", bestofn_args.seed, "RNG seed (default 0)");
    bestofn_cmd->add_option("--samplers", bestofn_args.samplers,
                            "samplers to include (default: all present)")
        ->delimiter(',');
    bestofn_cmd->add_option("--out", bestofn_args.out_path, "output curve CSV")->required();
    bestofn_cmd->add_option("--json", bestofn_args.json_path, "write the curve report JSON here");

    BestOfNArgs diff_args;
    auto* diff_cmd = app.add_subcommand(
        "analyze-diff", "best-of-n gap between one sampler and the best of the rest");
    diff_cmd->add_option("--scores", diff_args.scores_path, "score or sweep CSV path")->required();
    diff_cmd->add_option("--metric", diff_args.metric,
                         "column to score a sweep CSV by (default quality)");
    diff_cmd->add_option("--target", diff_args.target, "sampler to compare (default min_p)");
    diff_cmd->add_option("--ns", diff_args.ns, "explicit subset sizes")->delimiter(',');
    diff_cmd->add_option("--n-min", diff_args.n_min, "smallest subset size (default 1)");
    diff_cmd->add_option("--n-max", diff_args.n_max, "largest subset size (default 100)");
    diff_cmd->add_option("--repeats", diff_args.repeats,
                         "Monte Carlo repeats per subset size (default 200)");
    diff_cmd->add_option("--seed", diff_args.seed, "RNG seed (default 0)");
    diff_cmd->add_option("--out", diff_args.out_path, "output diff CSV")->required();
    diff_cmd->add_option("--json", diff_args.json_path, "write the diff report JSON here");

    PlotArgs plot_args;
    auto* plot_cmd =
        app.add_subcommand("plot", "render a curve CSV, diff CSV, or battery JSON");
    plot_cmd->add_option("--input", plot_args.input_path, "input path")->required();
    plot_cmd->add_option("--format", plot_args.format, "svg or tsv (default svg)");
    plot_cmd->add_option("--out", plot_args.out_path, "output path")->required();
    plot_cmd->add_option("--title", plot_args.title, "plot title (SVG only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sample_args.k_set = k_opt->count() > 0;
    sample_args.p_set = p_opt->count() > 0;
    if (ttest_args.alphas.empty()) ttest_args.alphas = {0.05, 0.01};
    if (iut_args.alphas.empty()) iut_args.alphas = {0.05, 0.01};

    try {
        if (app.got_subcommand(sample_cmd)) run_sample(sample_args);
        else if (app.got_subcommand(sweep_cmd)) run_sweep_cmd(sweep_args);
        else if (app.got_subcommand(ttest_cmd)) run_analyze_ttests(ttest_args, command);
        else if (app.got_subcommand(iut_cmd)) run_analyze_iut(iut_args, command);
        else if (app.got_subcommand(bestofn_cmd)) run_analyze_bestofn(bestofn_args, command);
        else if (app.got_subcommand(diff_cmd)) run_analyze_diff(diff_args, command);
        else if (app.got_subcommand(plot_cmd)) run_plot(plot_args);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const saudit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
