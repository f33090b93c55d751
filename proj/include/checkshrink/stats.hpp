#ifndef CHECKSHRINK_STATS_HPP
#define CHECKSHRINK_STATS_HPP

#include <span>
#include <vector>

namespace checkshrink::stats {

inline constexpr double kPhi0 = 0.3989422804014326779;  // 1/sqrt(2*pi)

double norm_pdf(double x);

// Absolute error below 1e-12 everywhere (erfc-based).
double norm_cdf(double x);

// Inverse of norm_cdf on (0,1). Rational approximation polished with one
// Newton step; |norm_cdf(norm_quantile(p)) - p| stays under 1e-9 across the
// whole domain. Throws std::domain_error outside (0,1).
double norm_quantile(double p);

// Probabilists' Hermite polynomial H_k evaluated through the three-term
// recurrence H_{k+1} = x H_k - k H_{k-1}. The recurrence runs on rescaled
// doubles so degrees in the thousands neither overflow nor lose the sign;
// value holds sign*exp(log_magnitude) when that is representable and +-inf
// past the double range, where the log-scale fields stay exact.
struct HermiteEval {
    int degree = 0;
    double value = 0.0;
    double log_magnitude = 0.0;  // -inf when the polynomial is exactly 0
    int sign = 0;                // -1, 0, +1
};

HermiteEval hermite_eval(int k, double x);

// Signs and log-magnitudes of H_0(x)..H_k(x) in one recurrence pass.
void hermite_log_table(int k, double x,
                       std::vector<int>& sign, std::vector<double>& log_mag);

// H_k(0): 0 for odd k, (-1)^{k/2} (k-1)!! for even k (+-inf once the
// double-factorial leaves the double range; use the log form below there).
double hermite_at_zero(int k);
int hermite_at_zero_sign(int k);
double hermite_at_zero_log(int k);  // ln|H_k(0)|, -inf for odd k

// Type-7 order-statistic quantile (linear interpolation, h = (n-1)*alpha).
double sample_quantile(std::span<const double> xs, double alpha);

enum class Alternative { Greater };

// One-sided signed-rank test p-value. Zeros are dropped; midranks for ties.
// Exact null distribution (rank-sum convolution) for up to 25 nonzero
// differences, normal approximation with continuity and tie corrections
// beyond. Throws std::invalid_argument with fewer than 5 nonzero diffs.
double wilcoxon_signed_rank(std::span<const double> diffs,
                            Alternative alt = Alternative::Greater);

} // namespace checkshrink::stats

#endif
