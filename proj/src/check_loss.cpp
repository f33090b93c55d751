#include "checkshrink/check_loss.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "checkshrink/stats.hpp"

namespace checkshrink {

double ProblemInstance::mean_x() const {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

void ProblemInstance::validate() const {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("ProblemInstance: empty instance");
    if (sigma_p.size() != n || sigma_f.size() != n || b.size() != n || h.size() != n) {
        throw std::invalid_argument("ProblemInstance: vector length mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sigma_p[i] > 0.0) || !(sigma_f[i] > 0.0)) {
            throw std::invalid_argument("ProblemInstance: variances must be positive");
        }
        if (!(b[i] > 0.0) || !(h[i] > 0.0)) {
            throw std::invalid_argument("ProblemInstance: cost weights must be positive");
        }
        const double bt = b[i] / (b[i] + h[i]);
        if (!(bt > 0.0 && bt < 1.0)) {
            throw std::invalid_argument("ProblemInstance: critical ratio outside (0,1)");
        }
    }
}

double shrinkage_alpha(double tau, double sigma_p) {
    if (std::isinf(tau)) return 1.0;
    if (tau <= 0.0) return 0.0;
    return tau / (tau + sigma_p);
}

double tau_from_alpha(double alpha, double sigma_p) {
    if (alpha >= 1.0) return std::numeric_limits<double>::infinity();
    if (alpha <= 0.0) return 0.0;
    return sigma_p * alpha / (1.0 - alpha);
}

double g_fn(double w, double beta) {
    if (w > 40.0) return (1.0 - beta) * w;
    if (w < -40.0) return -beta * w;
    return stats::norm_pdf(w) + w * stats::norm_cdf(w) - beta * w;
}

double expected_check_loss(double theta, double sigma_f, double b, double h, double q) {
    const double s = std::sqrt(sigma_f);
    return (b + h) * s * g_fn((q - theta) / s, b / (b + h));
}

double bayes_predict(double x, double eta, double tau,
                     double sigma_p, double sigma_f, double b, double h) {
    const double alpha = shrinkage_alpha(tau, sigma_p);
    const double s = std::sqrt(sigma_f + alpha * sigma_p);
    return alpha * x + (1.0 - alpha) * eta + s * stats::norm_quantile(b / (b + h));
}

std::vector<double> predict_class(const ProblemInstance& inst, const HyperParams& hp) {
    double eta = 0.0;
    switch (hp.class_tag) {
        case ShrinkageClass::Origin: eta = 0.0; break;
        case ShrinkageClass::GrandMean: eta = inst.mean_x(); break;
        case ShrinkageClass::DataDriven: eta = hp.eta; break;
    }
    std::vector<double> q(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
        q[i] = bayes_predict(inst.x[i], eta, hp.tau,
                             inst.sigma_p[i], inst.sigma_f[i], inst.b[i], inst.h[i]);
    }
    return q;
}

double cumulative_loss(const TruthInstance& truth, const ProblemInstance& inst,
                       std::span<const double> q) {
    const std::size_t n = inst.size();
    if (truth.theta.size() != n || q.size() != n) {
        throw std::invalid_argument("cumulative_loss: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += expected_check_loss(truth.theta[i], inst.sigma_f[i], inst.b[i], inst.h[i], q[i]);
    }
    return acc / static_cast<double>(n);
}

RiskCoeffs risk_coeffs(double tau, double sigma_p, double sigma_f, double b, double h) {
    RiskCoeffs rc;
    rc.alpha = shrinkage_alpha(tau, sigma_p);
    const double v = sigma_f + rc.alpha * rc.alpha * sigma_p;
    const double s = std::sqrt(v);
    rc.c = std::sqrt((sigma_f + rc.alpha * sigma_p) / v) * stats::norm_quantile(b / (b + h));
    rc.d = -(1.0 - rc.alpha) / s;
    rc.scale = (b + h) * s;
    return rc;
}

double coord_risk(double theta, double tau,
                  double sigma_p, double sigma_f, double b, double h) {
    const RiskCoeffs rc = risk_coeffs(tau, sigma_p, sigma_f, b, h);
    return rc.scale * g_fn(rc.c + rc.d * theta, b / (b + h));
}

double total_risk(const TruthInstance& truth, const ProblemInstance& inst,
                  const HyperParams& hp) {
    const std::size_t n = inst.size();
    if (truth.theta.size() != n) throw std::invalid_argument("total_risk: length mismatch");

    double shift = 0.0;
    if (hp.class_tag == ShrinkageClass::DataDriven) {
        shift = hp.eta;
    } else if (hp.class_tag == ShrinkageClass::GrandMean) {
        shift = std::accumulate(truth.theta.begin(), truth.theta.end(), 0.0) /
                static_cast<double>(n);
    }

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += coord_risk(truth.theta[i] - shift, hp.tau,
                          inst.sigma_p[i], inst.sigma_f[i], inst.b[i], inst.h[i]);
    }
    return acc / static_cast<double>(n);
}

} // namespace checkshrink
