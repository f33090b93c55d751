#include "checkshrink/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace checkshrink::stats {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
} // namespace

double norm_pdf(double x) {
    return kPhi0 * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

namespace {

// Acklam's rational approximation to the normal quantile (~1.15e-9 relative
// error), used as the seed for a Newton step.
double quantile_seed(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("norm_quantile: p must lie in (0,1)");
    }
    // Reflect so the seed and polish run on the lower half; this also makes
    // norm_quantile(1-p) == -norm_quantile(p) hold exactly.
    if (p > 0.5) return -norm_quantile(1.0 - p);

    double x = quantile_seed(p);
    const double pdf = norm_pdf(x);
    if (pdf > 0.0) {
        const double err = norm_cdf(x) - p;
        // Halley step; one application takes the seed to full double accuracy.
        const double u = err / pdf;
        const double step = u / (1.0 + 0.5 * x * u);
        if (std::isfinite(step)) x -= step;
    }
    return x;
}

namespace {

// Rescale threshold for the Hermite recurrence; values are pulled back into
// range whenever they pass it, with the ln of the applied factor accumulated.
constexpr double kRescaleAt = 1e280;
const double kRescaleLog = std::log(kRescaleAt);

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

void hermite_log_table(int k, double x,
                       std::vector<int>& sign, std::vector<double>& log_mag) {
    sign.assign(static_cast<std::size_t>(k) + 1, 0);
    log_mag.assign(static_cast<std::size_t>(k) + 1, -kInf);

    double scale_log = 0.0;
    double prev = 1.0;  // H_0
    sign[0] = 1;
    log_mag[0] = 0.0;
    if (k == 0) return;

    double cur = x;  // H_1
    sign[1] = sgn(cur);
    log_mag[1] = cur == 0.0 ? -kInf : std::log(std::abs(cur));
    for (int j = 1; j < k; ++j) {
        const double next = x * cur - static_cast<double>(j) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleAt || std::abs(prev) > kRescaleAt) {
            prev /= kRescaleAt;
            cur /= kRescaleAt;
            scale_log += kRescaleLog;
        }
        sign[j + 1] = sgn(cur);
        log_mag[j + 1] = cur == 0.0 ? -kInf : std::log(std::abs(cur)) + scale_log;
    }
}

HermiteEval hermite_eval(int k, double x) {
    if (k < 0) throw std::invalid_argument("hermite_eval: negative degree");
    std::vector<int> sign;
    std::vector<double> log_mag;
    hermite_log_table(k, x, sign, log_mag);

    HermiteEval out;
    out.degree = k;
    out.sign = sign[static_cast<std::size_t>(k)];
    out.log_magnitude = log_mag[static_cast<std::size_t>(k)];
    out.value = out.sign == 0 ? 0.0 : out.sign * std::exp(out.log_magnitude);
    return out;
}

int hermite_at_zero_sign(int k) {
    if (k % 2 != 0) return 0;
    return (k / 2) % 2 == 0 ? 1 : -1;
}

double hermite_at_zero_log(int k) {
    if (k % 2 != 0) return -kInf;
    // ln (k-1)!! = ln k! - ln( 2^{k/2} (k/2)! )
    const double m = k / 2;
    return std::lgamma(k + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
}

double hermite_at_zero(int k) {
    if (k < 0) throw std::invalid_argument("hermite_at_zero: negative degree");
    const int s = hermite_at_zero_sign(k);
    if (s == 0) return 0.0;
    return s * std::exp(hermite_at_zero_log(k));
}

double sample_quantile(std::span<const double> xs, double alpha) {
    if (xs.empty()) throw std::invalid_argument("sample_quantile: empty input");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("sample_quantile: alpha outside [0,1]");
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * alpha;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double wilcoxon_signed_rank(std::span<const double> diffs, Alternative) {
    std::vector<double> abs_d;
    std::vector<bool> pos;
    for (double d : diffs) {
        if (d == 0.0) continue;
        abs_d.push_back(std::abs(d));
        pos.push_back(d > 0.0);
    }
    const std::size_t n = abs_d.size();
    if (n < 5) {
        throw std::invalid_argument("wilcoxon_signed_rank: fewer than 5 nonzero differences");
    }

    // Midranks of |d|, doubled so ties stay integral.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });

    std::vector<long> rank2(n, 0);
    double tie_correction = 0.0;  // sum(t^3 - t) over tie groups
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
        const long sum2 = static_cast<long>(i + 1 + j) * static_cast<long>(j - i);  // 2*sum of ranks i+1..j
        const long mid2 = sum2 / static_cast<long>(j - i);
        for (std::size_t t = i; t < j; ++t) rank2[order[t]] = mid2;
        const double tlen = static_cast<double>(j - i);
        tie_correction += tlen * tlen * tlen - tlen;
        i = j;
    }

    long w2 = 0;      // 2 * (positive rank sum)
    long total2 = 0;  // 2 * n(n+1)/2
    for (std::size_t t = 0; t < n; ++t) {
        total2 += rank2[t];
        if (pos[t]) w2 += rank2[t];
    }

    if (n <= 25) {
        // Exact null tail by convolving the doubled ranks: counts[s] is the
        // number of sign assignments whose doubled positive rank sum is s.
        std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
        counts[0] = 1.0;
        long reach = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const long r = rank2[t];
            reach += r;
            for (long s = reach; s >= r; --s) {
                counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
            }
        }
        double ge = 0.0;
        for (long s = w2; s <= total2; ++s) ge += counts[static_cast<std::size_t>(s)];
        return ge / std::ldexp(1.0, static_cast<int>(n));
    }

    const double nn = static_cast<double>(n);
    const double w_plus = static_cast<double>(w2) / 2.0;
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
    const double z = (w_plus - mean - 0.5) / std::sqrt(var);
    return 1.0 - norm_cdf(z);
}

} // namespace checkshrink::stats
