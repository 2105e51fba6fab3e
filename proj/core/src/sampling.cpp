#include "saudit/sampling.hpp"

#include "saudit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace saudit::sampling {

void LogitVector::validate() const {
    if (values.empty()) {
        throw InvalidLogits("logit vector is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidLogits("non-finite logit at index " + std::to_string(i));
        }
    }
}

std::vector<std::uint32_t> ProbabilityDistribution::support() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::uint32_t ProbabilityDistribution::argmax() const {
    std::uint32_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = static_cast<std::uint32_t>(i);
    }
    return best;
}

const char* to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::basic: return "basic";
        case SamplerKind::top_k: return "top_k";
        case SamplerKind::top_p: return "top_p";
        case SamplerKind::min_p: return "min_p";
    }
    return "?";
}

const char* to_string(TruncationOrder order) {
    return order == TruncationOrder::temp_before_truncation ? "temp-before" : "temp-after";
}

SamplerKind sampler_kind_from_string(const std::string& name) {
    if (name == "basic") return SamplerKind::basic;
    if (name == "top_k" || name == "top-k") return SamplerKind::top_k;
    if (name == "top_p" || name == "top-p") return SamplerKind::top_p;
    if (name == "min_p" || name == "min-p") return SamplerKind::min_p;
    throw DataError("unknown sampler kind: " + name);
}

TruncationOrder truncation_order_from_string(const std::string& name) {
    if (name == "temp-before" || name == "temp_before_truncation") {
        return TruncationOrder::temp_before_truncation;
    }
    if (name == "temp-after" || name == "temp_after_truncation") {
        return TruncationOrder::temp_after_truncation;
    }
    throw DataError("unknown truncation order: " + name);
}

SamplerConfig SamplerConfig::make_basic(double tau, TruncationOrder order) {
    SamplerConfig c;
    c.kind = SamplerKind::basic;
    c.temperature = tau;
    c.order = order;
    return c;
}

SamplerConfig SamplerConfig::make_top_k(int k, double tau, TruncationOrder order) {
    SamplerConfig c;
    c.kind = SamplerKind::top_k;
    c.k = k;
    c.temperature = tau;
    c.order = order;
    return c;
}

SamplerConfig SamplerConfig::make_top_p(double p, double tau, TruncationOrder order) {
    SamplerConfig c;
    c.kind = SamplerKind::top_p;
    c.p = p;
    c.temperature = tau;
    c.order = order;
    return c;
}

SamplerConfig SamplerConfig::make_min_p(double p, double tau, TruncationOrder order) {
    SamplerConfig c;
    c.kind = SamplerKind::min_p;
    c.p = p;
    c.temperature = tau;
    c.order = order;
    return c;
}

double SamplerConfig::hyper_value() const {
    switch (kind) {
        case SamplerKind::basic: return 0.0;
        case SamplerKind::top_k: return static_cast<double>(k);
        case SamplerKind::top_p:
        case SamplerKind::min_p: return p;
    }
    return 0.0;
}

void SamplerConfig::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw InvalidTemperature("temperature must be finite and >= 0");
    }
    switch (kind) {
        case SamplerKind::basic:
            break;
        case SamplerKind::top_k:
            if (k < 1) throw DataError("top_k requires k >= 1");
            break;
        case SamplerKind::top_p:
        case SamplerKind::min_p:
            if (!(p > 0.0) || !(p <= 1.0)) {
                throw DataError(std::string(to_string(kind)) + " requires 0 < p <= 1");
            }
            break;
    }
}

bool KeepSet::contains(std::uint32_t index) const {
    return std::binary_search(indices.begin(), indices.end(), index);
}

ProbabilityDistribution stable_softmax(const LogitVector& logits) {
    logits.validate();
    const auto& x = logits.values;
    const double max_x = *std::max_element(x.begin(), x.end());
    ProbabilityDistribution dist;
    dist.probs.resize(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = std::exp(x[i] - max_x);
        dist.probs[i] = e;
        sum += e;
    }
    for (double& p : dist.probs) p /= sum;
    return dist;
}

LogitVector apply_temperature(const LogitVector& logits, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidTemperature("temperature must be finite and > 0");
    }
    logits.validate();
    LogitVector out = logits;
    for (double& v : out.values) v /= tau;
    return out;
}

namespace {

// Indices sorted descending by probability, ascending by index on ties.
// The single ordering every truncation rule uses, so tie-breaking is
// identical across rules and platforms.
std::vector<std::uint32_t> descending_order(const ProbabilityDistribution& dist) {
    std::vector<std::uint32_t> idx(dist.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (dist.probs[a] != dist.probs[b]) return dist.probs[a] > dist.probs[b];
        return a < b;
    });
    return idx;
}

KeepSet keep_from(std::vector<std::uint32_t> kept) {
    std::sort(kept.begin(), kept.end());
    KeepSet ks;
    ks.indices = std::move(kept);
    return ks;
}

KeepSet keep_everything(std::size_t vocab) {
    KeepSet ks;
    ks.indices.resize(vocab);
    std::iota(ks.indices.begin(), ks.indices.end(), 0u);
    return ks;
}

} // namespace

KeepSet truncate_top_k(const ProbabilityDistribution& dist, int k) {
    if (k < 1) throw DataError("top_k requires k >= 1");
    const std::size_t keep_n = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
    if (keep_n == dist.size()) return keep_everything(dist.size());
    auto order = descending_order(dist);
    order.resize(keep_n);
    return keep_from(std::move(order));
}

KeepSet truncate_top_p(const ProbabilityDistribution& dist, double p) {
    if (!(p > 0.0) || p > 1.0) throw DataError("top_p requires 0 < p <= 1");
    // p = 1 asks for the full mass; return everything rather than letting
    // cumulative rounding decide whether the smallest token makes the cut.
    if (p == 1.0) return keep_everything(dist.size());
    const auto order = descending_order(dist);
    std::vector<std::uint32_t> kept;
    double cum = 0.0;
    for (std::uint32_t i : order) {
        kept.push_back(i);
        cum += dist.probs[i];
        if (cum >= p) break;
    }
    return keep_from(std::move(kept));
}

KeepSet truncate_min_p(const ProbabilityDistribution& dist, double p_base) {
    if (!(p_base > 0.0) || p_base > 1.0) throw DataError("min_p requires 0 < p <= 1");
    const double p_max = dist.probs[dist.argmax()];
    const double threshold = p_base * p_max;
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs[i] >= threshold) kept.push_back(static_cast<std::uint32_t>(i));
    }
    return keep_from(std::move(kept));
}

KeepSet truncate(const ProbabilityDistribution& dist, const SamplerConfig& config) {
    switch (config.kind) {
        case SamplerKind::basic: return keep_everything(dist.size());
        case SamplerKind::top_k: return truncate_top_k(dist, config.k);
        case SamplerKind::top_p: return truncate_top_p(dist, config.p);
        case SamplerKind::min_p: return truncate_min_p(dist, config.p);
    }
    return keep_everything(dist.size());
}

ProbabilityDistribution renormalize(const ProbabilityDistribution& dist, const KeepSet& keep) {
    if (keep.indices.empty()) throw DegenerateKeepSet("keep set is empty");
    double total = 0.0;
    for (std::uint32_t i : keep.indices) total += dist.probs[i];
    if (total <= 0.0) throw DegenerateKeepSet("keep set has zero total mass");
    ProbabilityDistribution out;
    out.probs.assign(dist.size(), 0.0);
    for (std::uint32_t i : keep.indices) out.probs[i] = dist.probs[i] / total;
    return out;
}

namespace {

struct Pipeline {
    std::vector<double> scaled_logits;
    ProbabilityDistribution pre_truncation;
    KeepSet keep;
    ProbabilityDistribution final_dist;
};

// Softmax over the kept subset of `logits`; zero elsewhere.
ProbabilityDistribution subset_softmax(const std::vector<double>& logits, const KeepSet& keep) {
    double max_x = logits[keep.indices.front()];
    for (std::uint32_t i : keep.indices) max_x = std::max(max_x, logits[i]);
    ProbabilityDistribution out;
    out.probs.assign(logits.size(), 0.0);
    double sum = 0.0;
    for (std::uint32_t i : keep.indices) {
        const double e = std::exp(logits[i] - max_x);
        out.probs[i] = e;
        sum += e;
    }
    for (std::uint32_t i : keep.indices) out.probs[i] /= sum;
    return out;
}

Pipeline run_pipeline(const SamplerConfig& config, const LogitVector& logits) {
    Pipeline pl;
    const double tau = config.temperature;
    LogitVector scaled = apply_temperature(logits, tau);
    pl.scaled_logits = scaled.values;
    // basic has no truncation step, so the orderings coincide and share the
    // temp-before path.
    if (config.order == TruncationOrder::temp_before_truncation ||
        config.kind == SamplerKind::basic) {
        pl.pre_truncation = stable_softmax(scaled);
        pl.keep = truncate(pl.pre_truncation, config);
        pl.final_dist = renormalize(pl.pre_truncation, pl.keep);
    } else {
        // Truncate at tau = 1, then reheat the survivors' original logits.
        pl.pre_truncation = stable_softmax(logits);
        pl.keep = truncate(pl.pre_truncation, config);
        pl.final_dist = subset_softmax(pl.scaled_logits, pl.keep);
    }
    return pl;
}

std::uint32_t greedy_argmax(const LogitVector& logits) {
    std::uint32_t best = 0;
    for (std::size_t i = 1; i < logits.values.size(); ++i) {
        if (logits.values[i] > logits.values[best]) best = static_cast<std::uint32_t>(i);
    }
    return best;
}

// Inverse CDF over survivors in ascending index order. Falls back to the
// last survivor if rounding leaves the cumulative sum short of u.
std::uint32_t invert_cdf(const ProbabilityDistribution& dist, const KeepSet& keep, double u) {
    double cum = 0.0;
    for (std::uint32_t i : keep.indices) {
        cum += dist.probs[i];
        if (u < cum) return i;
    }
    return keep.indices.back();
}

} // namespace

ProbabilityDistribution token_distribution(const SamplerConfig& config, const LogitVector& logits) {
    config.validate();
    logits.validate();
    if (config.temperature == 0.0) {
        throw InvalidTemperature("token_distribution requires temperature > 0 (tau = 0 is greedy)");
    }
    return run_pipeline(config, logits).final_dist;
}

std::uint32_t sample(const SamplerConfig& config, const LogitVector& logits,
                     std::uint64_t rng_seed, std::uint64_t draw_index) {
    config.validate();
    logits.validate();
    if (config.temperature == 0.0) return greedy_argmax(logits);
    const Pipeline pl = run_pipeline(config, logits);
    const double u = rng::uniform_at(rng_seed, draw_index);
    return invert_cdf(pl.final_dist, pl.keep, u);
}

SampleTrace sample_explain(const SamplerConfig& config, const LogitVector& logits,
                           std::uint64_t rng_seed, std::uint64_t draw_index) {
    config.validate();
    logits.validate();
    SampleTrace trace;
    if (config.temperature == 0.0) {
        trace.greedy = true;
        trace.token = greedy_argmax(logits);
        return trace;
    }
    Pipeline pl = run_pipeline(config, logits);
    trace.scaled_logits = std::move(pl.scaled_logits);
    trace.pre_truncation = std::move(pl.pre_truncation);
    trace.keep = std::move(pl.keep);
    trace.u = rng::uniform_at(rng_seed, draw_index);
    trace.token = invert_cdf(pl.final_dist, trace.keep, trace.u);
    trace.final_dist = std::move(pl.final_dist);
    return trace;
}

} // namespace saudit::sampling
