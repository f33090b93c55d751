#ifndef CHECKSHRINK_COMPETITORS_HPP
#define CHECKSHRINK_COMPETITORS_HPP

#include <string>
#include <vector>

#include "checkshrink/check_loss.hpp"
#include "checkshrink/grids.hpp"

namespace checkshrink {

enum class Method { Are, Ebml, Ebmm, OracleLoss, OracleRisk, Unshrunken };

struct SelectionResult {
    Method method = Method::Are;
    HyperParams hp;
    double objective_value = 0.0;
    std::vector<std::string> warnings;
};

// Marginal maximum likelihood over tau (eta = 0):
//   argmin (1/n) sum_i [ x_i^2/(tau+sigma_p,i) + log(tau+sigma_p,i) ].
// Coarse bracketing on a 1000-point reparametrized grid, then golden-section
// to 1e-8; the objective can be multimodal under heteroscedasticity, so
// bracketing beats derivative root-finding here.
SelectionResult ebml_origin(const ProblemInstance& inst);

// Method of moments (eta = 0): max{(1/n) sum (x_i^2 - sigma_p,i), 0}.
SelectionResult ebmm_origin(const ProblemInstance& inst);

// Precision-weighted location estimate sum w_i x_i / sum w_i with
// w_i = 1/(tau+sigma_p,i), clipped into the m_hat interval.
double profile_location(const ProblemInstance& inst, double tau);

// Joint (eta, tau) maximum likelihood with eta profiled out as
// profile_location(tau) at every tau.
SelectionResult ebml_datadriven(const ProblemInstance& inst);

// Joint method of moments: alternate
//   tau <- (1/(n-1)) ( sum_i [ (x_i-eta)^2 - (1-1/n) sigma_p,i ] )_+
//   eta <- profile_location(tau)
// from the origin MM start until |dtau| < 1e-8; capped at 1000 sweeps with a
// warning instead of failure.
SelectionResult ebmm_datadriven(const ProblemInstance& inst);

enum class OracleObjective { Loss, Risk };

// Benchmark minimizer using the simulator's theta. Exhaustive over the fine
// tau grid (product with an eta grid over the m_hat interval for the
// DataDriven class); ties break toward smaller tau, then smaller eta.
SelectionResult oracle_select(const TruthInstance& truth, const ProblemInstance& inst,
                              ShrinkageClass class_tag, OracleObjective objective,
                              const std::vector<double>& fine_taus,
                              std::size_t eta_points = 201);

// Excess risk of the selected hyperparameters over the risk oracle,
// normalized by the risk range over the family and expressed in percent.
// Throws std::domain_error when the risk curve is flat (range < 1e-12).
double inefficiency(const TruthInstance& truth, const ProblemInstance& inst,
                    double selected_tau, ShrinkageClass class_tag,
                    std::size_t curve_points = 2001);

// DataDriven variant: normalizes over the (eta, tau) product family.
double inefficiency(const TruthInstance& truth, const ProblemInstance& inst,
                    const HyperParams& hp, std::size_t curve_points = 2001);

const char* method_name(Method m);

} // namespace checkshrink

#endif
