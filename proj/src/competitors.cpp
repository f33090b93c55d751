#include "checkshrink/competitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "checkshrink/stats.hpp"

namespace checkshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenTol = 1e-8;  // in the u = tau/(tau+s) parametrization
constexpr std::size_t kCoarsePoints = 1000;

double marginal_nll(const ProblemInstance& inst, double tau, double eta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const double v = tau + inst.sigma_p[i];
        const double r = inst.x[i] - eta;
        acc += r * r / v + std::log(v);
    }
    return acc / static_cast<double>(inst.size());
}

// Minimize f over u in [0,1) via coarse grid + golden-section refinement on
// the bracketing interval.
template <typename F>
double minimize_u(F f) {
    double best_u = 0.0;
    double best_v = kInf;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < kCoarsePoints; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(kCoarsePoints);
        const double v = f(u);
        if (v < best_v) {
            best_v = v;
            best_u = u;
            best_idx = i;
        }
    }
    double lo = best_idx == 0 ? 0.0
                              : static_cast<double>(best_idx - 1) / kCoarsePoints;
    double hi = std::min(1.0 - 1e-12,
                         static_cast<double>(best_idx + 1) / kCoarsePoints);

    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > kGoldenTol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double u_mid = 0.5 * (a + b);
    return f(u_mid) < best_v ? u_mid : best_u;
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Are: return "ARE";
        case Method::Ebml: return "EBML";
        case Method::Ebmm: return "EBMM";
        case Method::OracleLoss: return "OracleLoss";
        case Method::OracleRisk: return "OracleRisk";
        case Method::Unshrunken: return "Unshrunken";
    }
    return "?";
}

SelectionResult ebml_origin(const ProblemInstance& inst) {
    inst.validate();
    const double s = reference_sigma_p(inst);
    const auto obj = [&](double u) { return marginal_nll(inst, s * u / (1.0 - u), 0.0); };
    const double u = minimize_u(obj);

    SelectionResult out;
    out.method = Method::Ebml;
    out.hp = {0.0, s * u / (1.0 - u), ShrinkageClass::Origin};
    out.objective_value = obj(u);
    return out;
}

SelectionResult ebmm_origin(const ProblemInstance& inst) {
    inst.validate();
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        acc += inst.x[i] * inst.x[i] - inst.sigma_p[i];
    }
    SelectionResult out;
    out.method = Method::Ebmm;
    out.hp = {0.0, std::max(acc / static_cast<double>(inst.size()), 0.0),
              ShrinkageClass::Origin};
    out.objective_value = out.hp.tau;
    return out;
}

double profile_location(const ProblemInstance& inst, double tau) {
    double num = 0.0, den = 0.0;
    if (std::isinf(tau)) {
        // Equal weights in the limit.
        for (double xi : inst.x) num += xi;
        den = static_cast<double>(inst.size());
    } else {
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const double w = 1.0 / (tau + inst.sigma_p[i]);
            num += w * inst.x[i];
            den += w;
        }
    }
    const auto [lo, hi] = m_hat_interval(inst);
    return std::clamp(num / den, lo, hi);
}

SelectionResult ebml_datadriven(const ProblemInstance& inst) {
    inst.validate();
    const double s = reference_sigma_p(inst);
    const auto obj = [&](double u) {
        const double tau = s * u / (1.0 - u);
        return marginal_nll(inst, tau, profile_location(inst, tau));
    };
    const double u = minimize_u(obj);
    const double tau = s * u / (1.0 - u);

    SelectionResult out;
    out.method = Method::Ebml;
    out.hp = {profile_location(inst, tau), tau, ShrinkageClass::DataDriven};
    out.objective_value = obj(u);
    return out;
}

SelectionResult ebmm_datadriven(const ProblemInstance& inst) {
    inst.validate();
    const std::size_t n = inst.size();
    const double scale = 1.0 - 1.0 / static_cast<double>(n);

    double tau = ebmm_origin(inst).hp.tau;
    double eta = profile_location(inst, tau);
    SelectionResult out;
    out.method = Method::Ebmm;
    out.hp.class_tag = ShrinkageClass::DataDriven;

    constexpr int kMaxIter = 1000;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
        eta = profile_location(inst, tau);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = inst.x[i] - eta;
            acc += r * r - scale * inst.sigma_p[i];
        }
        const double next = std::max(acc, 0.0) / static_cast<double>(n - 1 == 0 ? 1 : n - 1);
        const bool done = std::abs(next - tau) < 1e-8;
        tau = next;
        if (done) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        out.warnings.push_back("moment equations did not converge within 1000 sweeps");
    }
    out.hp.tau = tau;
    out.hp.eta = profile_location(inst, tau);
    out.objective_value = tau;
    return out;
}

namespace {

std::vector<double> eta_grid_over_interval(const ProblemInstance& inst, std::size_t points) {
    const auto [lo, hi] = m_hat_interval(inst);
    if (points < 2 || hi <= lo) return {lo};
    std::vector<double> etas(points);
    for (std::size_t i = 0; i < points; ++i) {
        etas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return etas;
}

} // namespace

SelectionResult oracle_select(const TruthInstance& truth, const ProblemInstance& inst,
                              ShrinkageClass class_tag, OracleObjective objective,
                              const std::vector<double>& fine_taus,
                              std::size_t eta_points) {
    inst.validate();
    std::vector<double> etas;
    if (class_tag == ShrinkageClass::DataDriven) {
        etas = eta_grid_over_interval(inst, eta_points);
    } else {
        etas = {0.0};
    }

    SelectionResult out;
    out.method = objective == OracleObjective::Loss ? Method::OracleLoss : Method::OracleRisk;
    out.hp.class_tag = class_tag;
    double best = kInf;
    for (double tau : fine_taus) {
        for (double eta : etas) {
            HyperParams hp{eta, tau, class_tag};
            const double v = objective == OracleObjective::Loss
                                 ? cumulative_loss(truth, inst, predict_class(inst, hp))
                                 : total_risk(truth, inst, hp);
            if (v < best) {
                best = v;
                out.hp = hp;
            }
        }
    }
    if (class_tag == ShrinkageClass::GrandMean) out.hp.eta = inst.mean_x();
    out.objective_value = best;
    return out;
}

double inefficiency(const TruthInstance& truth, const ProblemInstance& inst,
                    double selected_tau, ShrinkageClass class_tag,
                    std::size_t curve_points) {
    HyperParams hp{0.0, selected_tau, class_tag};
    return inefficiency(truth, inst, hp, curve_points);
}

double inefficiency(const TruthInstance& truth, const ProblemInstance& inst,
                    const HyperParams& hp, std::size_t curve_points) {
    const std::vector<double> taus = fine_tau_grid(inst, curve_points);
    std::vector<double> etas{hp.eta};
    if (hp.class_tag == ShrinkageClass::DataDriven) {
        etas = eta_grid_over_interval(inst, std::max<std::size_t>(curve_points / 10, 2));
    }

    double r_min = kInf, r_max = -kInf;
    for (double tau : taus) {
        for (double eta : etas) {
            const double r = total_risk(truth, inst, HyperParams{eta, tau, hp.class_tag});
            r_min = std::min(r_min, r);
            r_max = std::max(r_max, r);
        }
    }
    const double range = r_max - r_min;
    if (!(range > 1e-12)) {
        throw std::domain_error("inefficiency: risk curve is flat, metric undefined");
    }
    const double r_hat = total_risk(truth, inst, hp);
    return (r_hat - r_min) / range * 100.0;
}

} // namespace checkshrink
