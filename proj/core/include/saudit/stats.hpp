#pragma once

#include "saudit/errors.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace saudit::stats {

// Per-subject paired measurements for two conditions.
struct PairedScores {
    std::vector<std::string> subject_ids;  // optional labels; empty or same length as a/b
    std::vector<double> a;
    std::vector<double> b;

    std::size_t size() const { return a.size(); }

    // Throws InsufficientData for n < 2, DataError on length mismatch or
    // non-finite entries.
    void validate() const;
};

enum class Alternative { greater, less, two_sided };

const char* to_string(Alternative alt);
Alternative alternative_from_string(const std::string& name);

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p = 1.0;
    Alternative alternative = Alternative::greater;
    double mean_diff = 0.0;
};

struct IUTResult {
    std::vector<double> component_pvalues;
    double iut_p = 1.0;                 // max of the components
    std::map<double, bool> reject_at;   // alpha -> (iut_p <= alpha)
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
};

// Regularized incomplete beta I_x(a; b), evaluated by a Lentz continued
// fraction with the symmetry switch at x = (a+1)/(a+b+2); tolerance 1e-12.
double incomplete_beta_reg(double a, double b, double x);

// Upper-tail probability P(T_df > t) of Student's t distribution.
// Absolute error <= 1e-10 over the tested range.
double student_t_sf(double t, int df);

// t with P(T_df <= t) = level, by bisecting the survival function.
double student_t_quantile(double level, int df);

// Standard normal quantile: Acklam's rational approximation plus one Halley
// refinement against erfc, giving near machine precision.
double normal_quantile(double level);

// Upper-tail probability P(X > x) for chi-square with df degrees of freedom
// (regularized upper incomplete gamma Q(df/2, x/2)).
double chi_square_sf(double x, int df);

// d_i = a_i - b_i; t = mean(d) / (sd(d)/sqrt(n)) with the n-1 sample sd;
// df = n-1. All-zero differences give t = 0 (one-sided p = 0.5). A constant
// nonzero difference has sd = 0 and throws DegenerateVariance carrying the
// convention values (t = +/-inf, p = 0 or 1 for the requested alternative).
TTestResult paired_ttest(const PairedScores& scores, Alternative alternative);

// decision_i = (p_i <= alpha / m), m = pvalues.size(). Empty -> EmptyInput.
std::vector<bool> bonferroni(const std::vector<double>& pvalues, double alpha);

// Intersection-union test: iut_p = max p, reject at alpha iff iut_p <= alpha.
IUTResult iut(const std::vector<double>& pvalues, const std::vector<double>& alphas);

// mean +/- t_{(1+level)/2, n-1} * sd / sqrt(n). n < 2 -> InsufficientData.
Interval mean_ci(const std::vector<double>& samples, double level);

// Wilson score interval for a binomial proportion, clamped to [0, 1].
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double level);

struct GofResult {
    double statistic = 0.0;
    int df = 0;
    double p = 1.0;
};

// Pearson chi-square goodness of fit of observed counts against expected
// probabilities. Bins with expected count < min_expected are pooled into one
// bin before the statistic is formed; df = pooled bins - 1. Fewer than two
// pooled bins cannot reject (p = 1).
GofResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                         const std::vector<double>& probs,
                         double min_expected = 5.0);

} // namespace saudit::stats
