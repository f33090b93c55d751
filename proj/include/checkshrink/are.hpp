#ifndef CHECKSHRINK_ARE_HPP
#define CHECKSHRINK_ARE_HPP

#include <atomic>
#include <cstddef>
#include <vector>

#include "checkshrink/check_loss.hpp"
#include "checkshrink/competitors.hpp"
#include "checkshrink/grids.hpp"
#include "checkshrink/rng.hpp"

namespace checkshrink {

// Per-coordinate tuning of the risk estimator.
//   gamma_i:  threshold slope, rho * ((1/sqrt(2e)) - sqrt(2 sigma_p/sigma_f))
//             when that bound is positive, else the 0.05 fallback (with
//             a3_violated set) so the estimator stays usable when the
//             past/future variance ratio is too large.
//   lambda_i: gamma_i * sqrt(2 log n)
//   k_i:      1 + ceil(e^2 (gamma_i + sqrt(2 sigma_p/sigma_f))^2 (2 log n)),
//             never below 2.
struct AreTuning {
    std::vector<double> gamma;
    std::vector<double> lambda_n;
    std::vector<int> k_n;
    int rb_reps = 5;
    double rho = 0.5;
    RngSeed seed;
    bool a3_violated = false;
};

AreTuning make_tuning(const ProblemInstance& inst, double rho, int rb_reps, RngSeed seed);

// Sample splitting: u and v are conditionally independent given theta and
// both carry it as mean; v selects the branch, u feeds the estimate.
struct SplitPair {
    double u = 0.0;
    double v = 0.0;
};

SplitPair split_sample(double x, double sigma_p, double z);

// Unbiased estimate of the truncated Taylor polynomial G_K(theta_t, b~) from
// one draw u_tau ~ N(theta_t, var_u):
//   phi(0) + (1/2 - b~) u_tau
//     + phi(0) sum_{l=0}^{K-2} [(-1)^l H_l(0)/(l+2)!] var_u^{(l+2)/2}
//                              H_{l+2}(u_tau/sqrt(var_u)).
// Terms are assembled in sign/log-magnitude form and summed largest first
// with compensation; degree-50 terms alternate in sign and cancel heavily.
double taylor_estimate(double u_tau, double var_u, double b_tilde, int k);

// Three-branch threshold rule on the transformed pair U(t) = c + d u,
// V(t) = c + d v:
//   V(t) < -lambda        -> -b~ U(t)
//   -lambda <= V(t) <= lambda -> series estimate truncated to +-trunc
//   V(t) > lambda         -> (1-b~) U(t)
// d == 0 (tau = inf) makes U(t) = V(t) = c deterministic; the middle branch
// is then the exact zero-variance limit G(c, b~).
struct ThresholdDiag {
    bool middle = false;   // middle branch fired
    bool clamped = false;  // |series| exceeded trunc
};

double threshold_estimate(const SplitPair& pair, const RiskCoeffs& rc,
                          double b_tilde, double sigma_p,
                          double lambda, int k, double trunc,
                          ThresholdDiag* diag = nullptr);

// Evaluates the risk estimate at any (eta, tau). The Rao-Blackwell z-draws
// are generated once per coordinate from seed-derived substreams and reused
// across every grid point (common random numbers), so evaluations are pure
// functions of (instance, tuning) and argmins are free of resampling jitter.
class AreEstimator {
public:
    AreEstimator(const ProblemInstance& inst, AreTuning tuning);

    double origin(double tau) const { return value(0.0, tau); }
    double datadriven(double eta, double tau) const { return value(eta, tau); }
    double grandmean(double tau) const { return value(x_bar_, tau); }

    // Rao-Blackwellized coordinate estimate at shrinkage location eta.
    double rao_blackwell_t(std::size_t i, double eta, double tau) const;

    const AreTuning& tuning() const { return tuning_; }

    // Running diagnostic: fraction of middle-branch series evaluations whose
    // magnitude hit the truncation bound. Should stay well under 1% at
    // realistic problem sizes.
    long long middle_branch_evals() const { return middle_count_; }
    long long truncated_evals() const { return clamp_count_; }
    double truncation_fraction() const;

private:
    double value(double eta, double tau) const;

    const ProblemInstance& inst_;
    AreTuning tuning_;
    std::vector<double> z_;  // n x rb_reps, row-major
    double x_bar_ = 0.0;
    double trunc_ = 0.0;
    mutable std::atomic<long long> middle_count_{0};
    mutable std::atomic<long long> clamp_count_{0};
};

// One-shot wrappers.
double are_origin(const ProblemInstance& inst, double tau, const AreTuning& tuning);
double are_datadriven(const ProblemInstance& inst, double eta, double tau,
                      const AreTuning& tuning);
double are_grandmean(const ProblemInstance& inst, double tau, const AreTuning& tuning);

// Minimizes the risk estimate over the grid (product grid for DataDriven).
// Ties break toward smaller tau, then smaller eta.
SelectionResult are_select(const ProblemInstance& inst, ShrinkageClass class_tag,
                           const Grid& grid, const AreTuning& tuning);

} // namespace checkshrink

#endif
