#include "checkshrink/grids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "checkshrink/stats.hpp"

namespace checkshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double loglog(std::size_t n) {
    if (n < 3) throw std::invalid_argument("grid: need n >= 3 so loglog n > 0");
    return std::log(std::log(static_cast<double>(n)));
}

double tau_from_t(double t) {
    if (t >= 1.0) return kInf;
    if (t <= 0.0) return 0.0;
    return t / (1.0 - t);
}

// Equispaced t-grid (i+1)*delta for i >= 1, with t = 1 adjoined so the
// no-shrinkage rule is always a candidate. t = 0 is deliberately absent:
// the risk estimate's finite-sample bias is worst at full shrinkage, and a
// grid point there acts as a spurious attractor for the argmin.
std::vector<double> tau_points_from_delta(double delta) {
    std::vector<double> taus;
    for (int i = 1;; ++i) {
        const double t = (i + 1) * delta;
        if (t >= 1.0) break;
        taus.push_back(tau_from_t(t));
    }
    taus.push_back(kInf);
    return taus;
}

} // namespace

GridConstants grid_constants(const ProblemInstance& inst) {
    inst.validate();
    GridConstants c;
    c.c1 = 0.0;
    c.c2 = 0.0;
    double max_ratio = 0.0;
    double max_q = 0.0;
    double abs_x = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        c.c1 = std::max(c.c1, inst.b[i] + inst.h[i]);
        c.c2 = std::max({c.c2, inst.sigma_p[i], 1.0 / inst.sigma_p[i]});
        max_ratio = std::max(max_ratio, inst.sigma_p[i] / inst.sigma_f[i]);
        max_q = std::max(max_q, std::abs(stats::norm_quantile(inst.b_tilde(i))));
        abs_x += std::abs(inst.x[i]);
    }
    c.c3 = max_ratio * max_q;
    const double a_n = loglog(std::max<std::size_t>(inst.size(), 3));
    c.c4 = std::max(1.0, abs_x / static_cast<double>(inst.size()) / std::sqrt(a_n));
    return c;
}

Grid build_grid_origin(const ProblemInstance& inst, std::size_t n,
                       std::size_t min_points) {
    Grid g;
    g.a_n = loglog(n);
    g.constants = grid_constants(inst);
    const GridConstants& c = g.constants;
    g.delta = 1.0 / (2.0 * c.c1 * c.c2 *
                     (2.0 * stats::kPhi0 + c.c3 + std::sqrt(g.a_n) * c.c4 + g.a_n));
    if (min_points > 0) {
        g.delta = std::min(g.delta, 1.0 / static_cast<double>(min_points + 2));
    }
    g.tau_points = tau_points_from_delta(g.delta);
    return g;
}

Grid build_grid_datadriven(const ProblemInstance& inst, std::size_t n,
                           std::size_t min_points) {
    Grid g;
    g.a_n = loglog(n);
    g.constants = grid_constants(inst);
    const GridConstants& c = g.constants;
    g.delta = 1.0 / (2.0 * c.c1 * c.c2 *
                     (2.0 * stats::kPhi0 + c.c3 + std::sqrt(g.a_n) * c.c4 + g.a_n +
                      g.a_n * g.a_n));
    if (min_points > 0) {
        g.delta = std::min(g.delta, 1.0 / static_cast<double>(min_points + 2));
    }
    g.tau_points = tau_points_from_delta(g.delta);

    const auto [lo, hi] = m_hat_interval(inst);
    const double spacing = 1.0 / (2.0 * c.c1 * g.a_n);
    for (double eta = -g.a_n; eta <= g.a_n + 1e-12; eta += spacing) {
        if (eta >= lo && eta <= hi) g.eta_points.push_back(eta);
    }
    if (g.eta_points.empty()) {
        g.eta_points.push_back(lo);
        if (hi > lo) g.eta_points.push_back(hi);
    }
    return g;
}

std::pair<double, double> m_hat_interval(const ProblemInstance& inst) {
    inst.validate();
    double a1 = 1.0;
    double a2 = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        a1 = std::min(a1, inst.b_tilde(i));
        a2 = std::max(a2, inst.b_tilde(i));
    }
    return {stats::sample_quantile(inst.x, a1), stats::sample_quantile(inst.x, a2)};
}

double reference_sigma_p(const ProblemInstance& inst) {
    return stats::sample_quantile(inst.sigma_p, 0.5);
}

std::vector<double> fine_u_grid(std::size_t points) {
    if (points < 2) throw std::invalid_argument("fine grid: need at least 2 points");
    std::vector<double> u(points);
    for (std::size_t i = 0; i < points; ++i) {
        u[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return u;
}

std::vector<double> fine_tau_grid(const ProblemInstance& inst, std::size_t points) {
    const double s = reference_sigma_p(inst);
    std::vector<double> taus = fine_u_grid(points);
    for (double& t : taus) t = t >= 1.0 ? kInf : s * t / (1.0 - t);
    return taus;
}

} // namespace checkshrink
