#include "saudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace saudit::stats {

namespace {

constexpr double CF_TOL = 1e-12;
constexpr int CF_MAX_ITERS = 300;
constexpr double LENTZ_TINY = 1e-300;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta, modified Lentz form.
double incomplete_beta_cf(double a, double b, double x) {
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < LENTZ_TINY) d = LENTZ_TINY;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m <= CF_MAX_ITERS; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < LENTZ_TINY) d = LENTZ_TINY;
        c = 1.0 + num / c;
        if (std::fabs(c) < LENTZ_TINY) c = LENTZ_TINY;
        d = 1.0 / d;
        f *= d * c;

        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < LENTZ_TINY) d = LENTZ_TINY;
        c = 1.0 + num / c;
        if (std::fabs(c) < LENTZ_TINY) c = LENTZ_TINY;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < CF_TOL) break;
    }
    return f;
}

// Lower regularized incomplete gamma P(a, x) by power series, for x < a + 1.
double incomplete_gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < CF_MAX_ITERS; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * CF_TOL) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction, x >= a + 1.
double incomplete_gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / LENTZ_TINY;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= CF_MAX_ITERS; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < LENTZ_TINY) d = LENTZ_TINY;
        c = b + an / c;
        if (std::fabs(c) < LENTZ_TINY) c = LENTZ_TINY;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < CF_TOL) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
}

} // namespace

void PairedScores::validate() const {
    if (a.size() != b.size()) {
        throw DataError("paired scores have mismatched lengths");
    }
    if (!subject_ids.empty() && subject_ids.size() != a.size()) {
        throw DataError("subject ids do not align with scores");
    }
    if (a.size() < 2) {
        throw InsufficientData("paired t-test needs at least 2 pairs");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw DataError("non-finite score at pair " + std::to_string(i));
        }
    }
}

const char* to_string(Alternative alt) {
    switch (alt) {
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
        case Alternative::two_sided: return "two-sided";
    }
    return "?";
}

Alternative alternative_from_string(const std::string& name) {
    if (name == "greater") return Alternative::greater;
    if (name == "less") return Alternative::less;
    if (name == "two-sided" || name == "two_sided") return Alternative::two_sided;
    throw DataError("unknown alternative: " + name);
}

double incomplete_beta_reg(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // <= so x exactly at the split evaluates directly; the reflected call then
    // always lands strictly below its own split and cannot recurse again.
    if (x <= (a + 1.0) / (a + b + 2.0)) {
        const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
        return front * incomplete_beta_cf(a, b, x) / a;
    }
    return 1.0 - incomplete_beta_reg(b, a, 1.0 - x);
}

double student_t_sf(double t, int df) {
    if (df < 1) throw InvalidDof("t distribution requires df >= 1");
    if (t == 0.0) return 0.5;
    const double nu = static_cast<double>(df);
    const double x = nu / (nu + t * t);
    const double half_tail = 0.5 * incomplete_beta_reg(nu / 2.0, 0.5, x);
    return t > 0.0 ? half_tail : 1.0 - half_tail;
}

double student_t_quantile(double level, int df) {
    if (df < 1) throw InvalidDof("t distribution requires df >= 1");
    if (!(level > 0.0) || !(level < 1.0)) throw DataError("quantile level must be in (0,1)");
    if (level == 0.5) return 0.0;
    if (level < 0.5) return -student_t_quantile(1.0 - level, df);
    const double target_sf = 1.0 - level;  // < 0.5, so the root is positive
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_sf(hi, df) > target_sf) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (student_t_sf(mid, df) > target_sf) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normal_quantile(double level) {
    if (!(level > 0.0) || !(level < 1.0)) throw DataError("quantile level must be in (0,1)");

    // Acklam's rational approximation, |relative error| < 1.15e-9.
    static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double P_LOW = 0.02425;

    double x;
    if (level < P_LOW) {
        const double q = std::sqrt(-2.0 * std::log(level));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (level <= 1.0 - P_LOW) {
        const double q = level - 0.5;
        const double r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-level));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }

    // One Halley step against the exact cdf brings the error to ~1e-15.
    const double e = normal_cdf(x) - level;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw InvalidDof("chi-square requires df >= 1");
    if (x <= 0.0) return 1.0;
    const double a = df / 2.0;
    const double y = x / 2.0;
    if (y < a + 1.0) return 1.0 - incomplete_gamma_p_series(a, y);
    return incomplete_gamma_q_cf(a, y);
}

TTestResult paired_ttest(const PairedScores& scores, Alternative alternative) {
    scores.validate();
    const std::size_t n = scores.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = scores.a[i] - scores.b[i];

    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult result;
    result.df = static_cast<int>(n) - 1;
    result.alternative = alternative;
    result.mean_diff = mean;

    if (sd == 0.0) {
        if (mean == 0.0) {
            // a == b pairwise: t = 0/0, reported as the null-consistent 0.
            result.t = 0.0;
            result.p = alternative == Alternative::two_sided ? 1.0 : 0.5;
            return result;
        }
        const double inf = std::numeric_limits<double>::infinity();
        const double t_conv = mean > 0.0 ? inf : -inf;
        double p_conv = 0.0;
        if (alternative == Alternative::greater) p_conv = mean > 0.0 ? 0.0 : 1.0;
        if (alternative == Alternative::less) p_conv = mean < 0.0 ? 0.0 : 1.0;
        throw DegenerateVariance("paired differences have zero variance", t_conv, p_conv);
    }

    result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    switch (alternative) {
        case Alternative::greater: result.p = student_t_sf(result.t, result.df); break;
        case Alternative::less: result.p = 1.0 - student_t_sf(result.t, result.df); break;
        case Alternative::two_sided:
            result.p = 2.0 * student_t_sf(std::fabs(result.t), result.df);
            break;
    }
    return result;
}

std::vector<bool> bonferroni(const std::vector<double>& pvalues, double alpha) {
    if (pvalues.empty()) throw EmptyInput("no p-values to correct");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw DataError("alpha must be in (0,1)");
    const double threshold = alpha / static_cast<double>(pvalues.size());
    std::vector<bool> decisions(pvalues.size());
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double p = pvalues[i];
        if (!(p >= 0.0) || p > 1.0) {
            throw DataError("p-value out of [0,1] at index " + std::to_string(i));
        }
        decisions[i] = p <= threshold;
    }
    return decisions;
}

IUTResult iut(const std::vector<double>& pvalues, const std::vector<double>& alphas) {
    if (pvalues.empty()) throw EmptyInput("no p-values for the intersection-union test");
    IUTResult result;
    result.component_pvalues = pvalues;
    result.iut_p = 0.0;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double p = pvalues[i];
        if (!(p >= 0.0) || p > 1.0) {
            throw DataError("p-value out of [0,1] at index " + std::to_string(i));
        }
        result.iut_p = std::max(result.iut_p, p);
    }
    for (double alpha : alphas) result.reject_at[alpha] = result.iut_p <= alpha;
    return result;
}

Interval mean_ci(const std::vector<double>& samples, double level) {
    if (samples.size() < 2) throw InsufficientData("mean CI needs at least 2 samples");
    if (!(level > 0.0) || !(level < 1.0)) throw DataError("level must be in (0,1)");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double tq = student_t_quantile(0.5 * (1.0 + level), static_cast<int>(samples.size()) - 1);
    const double half = tq * sd / std::sqrt(n);
    return Interval{mean - half, mean + half, level};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials == 0) throw InsufficientData("Wilson interval needs at least 1 trial");
    if (successes > trials) throw DataError("successes exceed trials");
    if (!(level > 0.0) || !(level < 1.0)) throw DataError("level must be in (0,1)");
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    // center -/+ half cancels exactly at the boundaries in real arithmetic;
    // pin them so float rounding cannot leave a stray 1e-17.
    const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
    return Interval{lower, upper, level};
}

GofResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                         const std::vector<double>& probs,
                         double min_expected) {
    if (observed.empty() || observed.size() != probs.size()) {
        throw DataError("observed counts and probabilities must align and be non-empty");
    }
    double prob_sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("probabilities must be in [0,1]");
        prob_sum += p;
    }
    if (std::abs(prob_sum - 1.0) > 1e-9) throw DataError("probabilities must sum to 1");
    std::uint64_t total = 0;
    for (std::uint64_t o : observed) total += o;
    if (total == 0) throw EmptyInput("no observations");

    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    double statistic = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(total);
        if (expected <= 0.0 && observed[i] == 0) continue;
        if (expected < min_expected) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += expected;
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected;
        statistic += diff * diff / expected;
        ++bins;
    }
    if (pooled_exp > 0.0) {
        const double diff = pooled_obs - pooled_exp;
        statistic += diff * diff / pooled_exp;
        ++bins;
    }

    GofResult result;
    result.statistic = statistic;
    result.df = bins - 1;
    result.p = result.df >= 1 ? chi_square_sf(statistic, result.df) : 1.0;
    return result;
}

} // namespace saudit::stats
