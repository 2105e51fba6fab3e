#pragma once

#include "saudit/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace saudit::sampling {

// Raw unnormalized log-scores over a vocabulary. Entries must be finite.
struct LogitVector {
    std::vector<double> values;

    std::size_t vocab_size() const { return values.size(); }

    // Throws InvalidLogits when empty or any entry is NaN/inf.
    void validate() const;
};

// Softmax-normalized probabilities over the same index space.
struct ProbabilityDistribution {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }

    // Indices with prob > 0.
    std::vector<std::uint32_t> support() const;

    // Highest-probability index, ties to the lowest index.
    std::uint32_t argmax() const;
};

enum class SamplerKind { basic, top_k, top_p, min_p };

// Whether temperature is applied to the logits before the truncation rule
// runs, or only to the survivors afterwards (the implementation discrepancy
// between the two generations of the study).
enum class TruncationOrder { temp_before_truncation, temp_after_truncation };

const char* to_string(SamplerKind kind);
const char* to_string(TruncationOrder order);
SamplerKind sampler_kind_from_string(const std::string& name);
TruncationOrder truncation_order_from_string(const std::string& name);

// One point in sweep space: sampler kind + hyperparameter + temperature +
// truncation ordering.
struct SamplerConfig {
    SamplerKind kind = SamplerKind::basic;
    int k = 0;         // top_k only
    double p = 0.0;    // top_p / min_p only
    double temperature = 1.0;
    TruncationOrder order = TruncationOrder::temp_before_truncation;

    static SamplerConfig make_basic(double tau,
                                    TruncationOrder order = TruncationOrder::temp_before_truncation);
    static SamplerConfig make_top_k(int k, double tau,
                                    TruncationOrder order = TruncationOrder::temp_before_truncation);
    static SamplerConfig make_top_p(double p, double tau,
                                    TruncationOrder order = TruncationOrder::temp_before_truncation);
    static SamplerConfig make_min_p(double p, double tau,
                                    TruncationOrder order = TruncationOrder::temp_before_truncation);

    // Hyperparameter as a number for table output; 0 for basic.
    double hyper_value() const;

    // Throws InvalidTemperature / InvalidLogits-family errors on bad fields.
    void validate() const;
};

// Indices surviving truncation, ascending and unique. Never empty; always
// contains an argmax of the distribution it was derived from.
struct KeepSet {
    std::vector<std::uint32_t> indices;

    std::size_t size() const { return indices.size(); }
    bool contains(std::uint32_t index) const;
};

// probs = exp(x_i - max x) / sum_j exp(x_j - max x); sums to 1 within 1e-12.
ProbabilityDistribution stable_softmax(const LogitVector& logits);

// Divides every logit by tau. tau must be > 0 (tau = 0 is handled by sample()
// as greedy and never reaches here).
LogitVector apply_temperature(const LogitVector& logits, double tau);

// Keep the min(k, vocab) highest-probability indices. Ties at the boundary
// break toward the lower index.
KeepSet truncate_top_k(const ProbabilityDistribution& dist, int k);

// Keep the smallest descending-probability prefix with cumulative mass >= p.
KeepSet truncate_top_p(const ProbabilityDistribution& dist, double p);

// Keep every index with probs[i] >= p_base * max_j probs[j] (inclusive).
KeepSet truncate_min_p(const ProbabilityDistribution& dist, double p_base);

// Truncation for a full config; basic keeps every index.
KeepSet truncate(const ProbabilityDistribution& dist, const SamplerConfig& config);

// Zero probabilities outside `keep`, rescale inside to sum to 1.
ProbabilityDistribution renormalize(const ProbabilityDistribution& dist, const KeepSet& keep);

// The distribution a draw is taken from, after temperature, truncation and
// renormalization in the configured order. Requires temperature > 0.
ProbabilityDistribution token_distribution(const SamplerConfig& config, const LogitVector& logits);

// Deterministic seeded draw: same (config, logits, seed, draw_index) -> same
// token. tau = 0 is greedy argmax. The uniform variate comes from
// rng::uniform_at(seed, draw_index) and is inverted against the cumulative
// distribution over survivors in ascending index order.
std::uint32_t sample(const SamplerConfig& config, const LogitVector& logits,
                     std::uint64_t rng_seed, std::uint64_t draw_index);

// Full pipeline trace for one draw, for inspection tooling.
struct SampleTrace {
    bool greedy = false;
    std::vector<double> scaled_logits;        // logits / tau (empty when greedy)
    ProbabilityDistribution pre_truncation;   // distribution the truncation rule saw
    KeepSet keep;
    ProbabilityDistribution final_dist;       // distribution the draw used
    double u = 0.0;                           // uniform variate (0 when greedy)
    std::uint32_t token = 0;
};

SampleTrace sample_explain(const SamplerConfig& config, const LogitVector& logits,
                           std::uint64_t rng_seed, std::uint64_t draw_index);

} // namespace saudit::sampling
