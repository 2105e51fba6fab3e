#include "saudit/report.hpp"

#include "saudit/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace saudit::report {

std::string alpha_suffix(double alpha) {
    std::string s = csvio::format_double(alpha);
    if (s.rfind("0.", 0) == 0) return s.substr(2);
    for (char& c : s) {
        if (c == '.') c = '_';
    }
    return s;
}

namespace {

std::string cell_name(const std::string& metric, double temperature,
                      const std::string& comparison) {
    return "metric=" + metric + " tau=" + csvio::format_double(temperature) + " " + comparison;
}

std::string format_t(double t) {
    if (std::isinf(t)) return t > 0 ? "+inf" : "-inf";
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << t;
    return out.str();
}

nlohmann::json t_to_json(double t) {
    if (std::isinf(t)) return t > 0 ? "+inf" : "-inf";
    return t;
}

} // namespace

std::string fnv1a64_hex(const std::string& content) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : content) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

BatteryResult run_battery(const std::vector<csvio::HumanEvalRow>& rows,
                          const std::vector<double>& alphas, double ci_level) {
    if (rows.empty()) throw EmptyInput("no human-eval rows");
    if (alphas.empty()) throw EmptyInput("no alpha levels");
    for (double alpha : alphas) {
        if (!(alpha > 0.0) || !(alpha < 1.0)) throw DataError("alpha must be in (0,1)");
    }
    if (!(ci_level > 0.0) || !(ci_level < 1.0)) throw DataError("CI level must be in (0,1)");

    using sampling::SamplerKind;
    // (metric, temperature) -> sampler -> participant -> score
    std::map<std::pair<std::string, double>, std::map<int, std::map<std::string, double>>> cells;
    std::set<int> samplers_seen;
    for (const csvio::HumanEvalRow& row : rows) {
        auto& by_participant = cells[{row.metric, row.temperature}][static_cast<int>(row.sampler)];
        if (!by_participant.emplace(row.participant_id, row.score).second) {
            throw DataError("duplicate row for participant " + row.participant_id + " in " +
                            cell_name(row.metric, row.temperature,
                                      sampling::to_string(row.sampler)));
        }
        samplers_seen.insert(static_cast<int>(row.sampler));
    }
    if (samplers_seen.count(static_cast<int>(SamplerKind::min_p)) == 0) {
        throw DataError("no min_p rows in the table");
    }
    std::vector<SamplerKind> baselines;
    for (int s : samplers_seen) {
        if (static_cast<SamplerKind>(s) != SamplerKind::min_p) {
            baselines.push_back(static_cast<SamplerKind>(s));
        }
    }
    if (baselines.empty()) throw DataError("no baseline sampler rows in the table");

    BatteryResult battery;
    battery.alphas = alphas;
    battery.ci_level = ci_level;

    for (const auto& [key, by_sampler] : cells) {
        const auto& [metric, temperature] = key;
        const auto minp_it = by_sampler.find(static_cast<int>(SamplerKind::min_p));
        for (SamplerKind baseline : baselines) {
            const std::string comparison =
                std::string("min_p>") + sampling::to_string(baseline);
            const std::string cell = cell_name(metric, temperature, comparison);
            if (minp_it == by_sampler.end()) {
                throw DataError("cell " + cell + " has no min_p rows");
            }
            const auto base_it = by_sampler.find(static_cast<int>(baseline));
            if (base_it == by_sampler.end()) {
                throw DataError("cell " + cell + " has no " +
                                std::string(sampling::to_string(baseline)) + " rows");
            }

            stats::PairedScores scores;
            std::size_t dropped = 0;
            for (const auto& [participant, score] : minp_it->second) {
                const auto other = base_it->second.find(participant);
                if (other == base_it->second.end()) {
                    ++dropped;
                    continue;
                }
                scores.subject_ids.push_back(participant);
                scores.a.push_back(score);
                scores.b.push_back(other->second);
            }
            for (const auto& [participant, score] : base_it->second) {
                if (minp_it->second.find(participant) == minp_it->second.end()) ++dropped;
            }
            if (scores.size() < 2) {
                throw DataError("cell " + cell + " has fewer than 2 complete pairs");
            }

            BatteryEntry entry;
            entry.metric = metric;
            entry.temperature = temperature;
            entry.comparison = comparison;
            entry.dropped = static_cast<int>(dropped);
            try {
                entry.test = stats::paired_ttest(scores, stats::Alternative::greater);
            } catch (const DegenerateVariance& e) {
                entry.degenerate_variance = true;
                entry.test.alternative = stats::Alternative::greater;
                entry.test.df = static_cast<int>(scores.size()) - 1;
                entry.test.t = e.convention_t;
                entry.test.p = e.convention_p;
                double mean = 0.0;
                for (std::size_t i = 0; i < scores.size(); ++i) mean += scores.a[i] - scores.b[i];
                entry.test.mean_diff = mean / static_cast<double>(scores.size());
            }
            battery.dropped_total += entry.dropped;
            battery.entries.push_back(std::move(entry));
        }
    }

    std::vector<double> pvalues;
    pvalues.reserve(battery.entries.size());
    for (const BatteryEntry& entry : battery.entries) pvalues.push_back(entry.test.p);
    for (double alpha : alphas) {
        const std::vector<bool> corrected = stats::bonferroni(pvalues, alpha);
        for (std::size_t i = 0; i < battery.entries.size(); ++i) {
            battery.entries[i].significant_uncorrected[alpha] = pvalues[i] <= alpha;
            battery.entries[i].significant_bonferroni[alpha] = corrected[i];
        }
    }
    battery.iut = stats::iut(pvalues, alphas);

    for (const auto& [key, by_sampler] : cells) {
        const auto& [metric, temperature] = key;
        for (const auto& [sampler_int, by_participant] : by_sampler) {
            GroupMean group;
            group.metric = metric;
            group.temperature = temperature;
            group.sampler = static_cast<SamplerKind>(sampler_int);
            group.n = static_cast<int>(by_participant.size());
            std::vector<double> values;
            values.reserve(by_participant.size());
            for (const auto& [participant, score] : by_participant) values.push_back(score);
            for (double v : values) group.mean += v;
            group.mean /= static_cast<double>(values.size());
            if (values.size() >= 2) {
                group.ci = stats::mean_ci(values, ci_level);
            } else {
                group.ci = stats::Interval{group.mean, group.mean, ci_level};
            }
            battery.group_means.push_back(std::move(group));
        }
    }
    return battery;
}

nlohmann::json battery_to_json(const BatteryResult& battery) {
    nlohmann::json tests = nlohmann::json::array();
    for (const BatteryEntry& entry : battery.entries) {
        nlohmann::json j;
        j["metric"] = entry.metric;
        j["temperature"] = entry.temperature;
        j["comparison"] = entry.comparison;
        j["t"] = t_to_json(entry.test.t);
        j["df"] = entry.test.df;
        j["p"] = entry.test.p;
        j["mean_diff"] = entry.test.mean_diff;
        j["dropped"] = entry.dropped;
        j["degenerate_variance"] = entry.degenerate_variance;
        for (const auto& [alpha, decision] : entry.significant_uncorrected) {
            j["significant_uncorrected_" + alpha_suffix(alpha)] = decision;
        }
        for (const auto& [alpha, decision] : entry.significant_bonferroni) {
            j["significant_bonferroni_" + alpha_suffix(alpha)] = decision;
        }
        tests.push_back(std::move(j));
    }

    nlohmann::json iut;
    iut["iut_p"] = battery.iut.iut_p;
    for (const auto& [alpha, decision] : battery.iut.reject_at) {
        iut["reject_" + alpha_suffix(alpha)] = decision;
    }

    nlohmann::json groups = nlohmann::json::array();
    for (const GroupMean& group : battery.group_means) {
        nlohmann::json j;
        j["metric"] = group.metric;
        j["temperature"] = group.temperature;
        j["sampler"] = sampling::to_string(group.sampler);
        j["mean"] = group.mean;
        j["ci_lower"] = group.ci.lower;
        j["ci_upper"] = group.ci.upper;
        j["level"] = group.ci.level;
        j["n"] = group.n;
        groups.push_back(std::move(j));
    }

    nlohmann::json out;
    out["tests"] = std::move(tests);
    out["iut"] = std::move(iut);
    out["group_means"] = std::move(groups);
    out["alphas"] = battery.alphas;
    out["dropped_pairs"] = battery.dropped_total;
    return out;
}

std::string battery_text_table(const BatteryResult& battery) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "metric" << std::setw(6) << "tau" << std::setw(14)
        << "comparison" << std::setw(9) << "t" << std::setw(4) << "df" << std::setw(9) << "p"
        << std::setw(9) << "dropped";
    for (double alpha : battery.alphas) {
        out << std::setw(10) << ("sig@" + csvio::format_double(alpha));
        out << std::setw(10) << ("bonf@" + csvio::format_double(alpha));
    }
    out << '\n';
    for (const BatteryEntry& entry : battery.entries) {
        std::ostringstream p_text;
        p_text << std::fixed << std::setprecision(4) << entry.test.p;
        out << std::left << std::setw(10) << entry.metric << std::setw(6)
            << csvio::format_double(entry.temperature) << std::setw(14) << entry.comparison
            << std::setw(9) << format_t(entry.test.t) << std::setw(4) << entry.test.df
            << std::setw(9) << p_text.str() << std::setw(9) << entry.dropped;
        for (double alpha : battery.alphas) {
            out << std::setw(10)
                << (entry.significant_uncorrected.at(alpha) ? "yes" : "no");
            out << std::setw(10) << (entry.significant_bonferroni.at(alpha) ? "yes" : "no");
        }
        out << '\n';
    }
    out << "IUT max p = " << csvio::format_double(battery.iut.iut_p);
    for (const auto& [alpha, decision] : battery.iut.reject_at) {
        out << "; reject@" << csvio::format_double(alpha) << " = " << (decision ? "yes" : "no");
    }
    out << '\n';
    out << "dropped pairs: " << battery.dropped_total << '\n';
    return out.str();
}

InputDigest digest_file(const std::string& path) {
    return InputDigest{path, fnv1a64_hex(io::read_text_file(path))};
}

nlohmann::json make_report(const std::string& command, const std::vector<InputDigest>& inputs,
                           const nlohmann::json& results) {
    nlohmann::json report;
    report["tool"] = TOOL_NAME;
    report["version"] = TOOL_VERSION;
    report["schema_version"] = SCHEMA_VERSION;
    report["command"] = command;
    nlohmann::json input_list = nlohmann::json::array();
    for (const InputDigest& input : inputs) {
        input_list.push_back({{"path", input.path}, {"fnv1a64", input.fnv1a64}});
    }
    report["inputs"] = std::move(input_list);
    report["results"] = results;
    return report;
}

std::string report_to_string(const nlohmann::json& report) { return report.dump(2) + "\n"; }

} // namespace saudit::report
