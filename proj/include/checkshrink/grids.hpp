#ifndef CHECKSHRINK_GRIDS_HPP
#define CHECKSHRINK_GRIDS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "checkshrink/check_loss.hpp"

namespace checkshrink {

// Instance-derived bounds that size the search grids:
//   c1 >= max(b_i + h_i)
//   c2 >= max(max sigma_p, max 1/sigma_p)
//   c3 >= max(sigma_p/sigma_f) * max|PhiInv(b/(b+h))|
//   c4: data proxy (1/n) sum|x_i| / sqrt(loglog n), floored at 1.
struct GridConstants {
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c4 = 1.0;
};

// Hyperparameter search set. tau_points are strictly increasing, always end
// at +infinity, and come from equispaced points (i+1)*delta, i >= 1, of the
// reparametrization t = tau/(tau+1) mapped back by tau = t/(1-t). Full
// shrinkage (tau = 0) is not a search point: the risk estimate is most
// biased there and a grid point at 0 captures the argmin spuriously.
struct Grid {
    std::vector<double> tau_points;
    std::vector<double> eta_points;  // empty unless data-driven
    double delta = 0.0;              // spacing in t-space
    double a_n = 0.0;                // loglog n
    GridConstants constants{};
};

GridConstants grid_constants(const ProblemInstance& inst);

// tau grid with spacing 1/(2 c1 c2 (2 phi(0) + c3 + sqrt(a_n) c4 + a_n)).
// min_points > 0 refines the spacing to guarantee at least that many
// interior points. Requires n >= 3 so loglog n is positive.
Grid build_grid_origin(const ProblemInstance& inst, std::size_t n,
                       std::size_t min_points = 0);

// Product grid for joint (eta, tau) search: tau spacing gains an extra
// a_n^2 term; eta is equispaced on [-a_n, a_n] with spacing 1/(2 c1 a_n)
// and then intersected with the data interval below (falling back to the
// interval endpoints when the intersection is empty).
Grid build_grid_datadriven(const ProblemInstance& inst, std::size_t n,
                           std::size_t min_points = 0);

// [quantile(x, min b~), quantile(x, max b~)] -- the admissible range for a
// data-driven shrinkage location.
std::pair<double, double> m_hat_interval(const ProblemInstance& inst);

// Dense tau grid for oracle evaluation and smooth risk curves: `points`
// equispaced values of u in [0,1] mapped through tau = s u/(1-u) with s the
// median past variance (so u is the exact shrinkage factor in the
// homoscedastic case). Contains 0 and +infinity.
std::vector<double> fine_tau_grid(const ProblemInstance& inst, std::size_t points);

// The u-value (reference shrinkage factor) for each fine-grid tau.
std::vector<double> fine_u_grid(std::size_t points);

double reference_sigma_p(const ProblemInstance& inst);

} // namespace checkshrink

#endif
