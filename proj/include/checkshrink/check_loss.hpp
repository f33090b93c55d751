#ifndef CHECKSHRINK_CHECK_LOSS_HPP
#define CHECKSHRINK_CHECK_LOSS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace checkshrink {

// Observed side of the prediction problem: past data X_i with known past and
// future variances and the asymmetric cost weights (b_i under-, h_i
// over-prediction). The critical ratio b/(b+h) must stay inside (0,1).
struct ProblemInstance {
    std::vector<double> x;
    std::vector<double> sigma_p;
    std::vector<double> sigma_f;
    std::vector<double> b;
    std::vector<double> h;

    std::size_t size() const { return x.size(); }
    double b_tilde(std::size_t i) const { return b[i] / (b[i] + h[i]); }
    double mean_x() const;

    // Throws std::invalid_argument on length mismatch, non-positive
    // variances/weights, or empty data.
    void validate() const;
};

// Means known only to the simulator; estimators never see this.
struct TruthInstance {
    std::vector<double> theta;
};

enum class ShrinkageClass { Origin, GrandMean, DataDriven };

// Prior location/scale pair. tau may be +infinity (no shrinkage, alpha = 1).
struct HyperParams {
    double eta = 0.0;
    double tau = 0.0;
    ShrinkageClass class_tag = ShrinkageClass::Origin;
};

// alpha(tau) = tau/(tau+sigma_p) with the tau=inf branch taken explicitly.
double shrinkage_alpha(double tau, double sigma_p);
double tau_from_alpha(double alpha, double sigma_p);

// G(w, beta) = phi(w) + w Phi(w) - beta w, switching to the linear
// asymptotes (1-beta)w / -beta w past |w| = 40 where the difference is far
// below double precision.
double g_fn(double w, double beta);

// E[ b (Y-q)^+ + h (q-Y)^+ ] for Y ~ N(theta, sigma_f):
// (b+h) sqrt(sigma_f) G((q-theta)/sqrt(sigma_f), b/(b+h)).
double expected_check_loss(double theta, double sigma_f, double b, double h, double q);

// Posterior-predictive b/(b+h) quantile under the conjugate normal prior:
// alpha x + (1-alpha) eta + sqrt(sigma_f + alpha sigma_p) PhiInv(b/(b+h)).
double bayes_predict(double x, double eta, double tau,
                     double sigma_p, double sigma_f, double b, double h);

// Coordinate-wise rule for a shrinkage class; eta is 0 (Origin), the grand
// mean of x (GrandMean), or hp.eta (DataDriven).
std::vector<double> predict_class(const ProblemInstance& inst, const HyperParams& hp);

double cumulative_loss(const TruthInstance& truth, const ProblemInstance& inst,
                       std::span<const double> q);

// Frequentist risk of the rule at fixed tau factors as
//   r(theta) = scale * G(c + d*theta, b/(b+h))
// with scale = (b+h) sqrt(sigma_f + alpha^2 sigma_p),
//      c = sqrt((sigma_f + alpha sigma_p)/(sigma_f + alpha^2 sigma_p)) PhiInv(b/(b+h)),
//      d = -(1-alpha)/sqrt(sigma_f + alpha^2 sigma_p).
struct RiskCoeffs {
    double alpha = 0.0;
    double c = 0.0;
    double d = 0.0;
    double scale = 0.0;
};
RiskCoeffs risk_coeffs(double tau, double sigma_p, double sigma_f, double b, double h);

double coord_risk(double theta, double tau,
                  double sigma_p, double sigma_f, double b, double h);

// Mean of coord_risk over coordinates. Exact risk for Origin/DataDriven
// (theta shifted by eta); for GrandMean this is the surrogate risk with
// theta shifted by its own mean.
double total_risk(const TruthInstance& truth, const ProblemInstance& inst,
                  const HyperParams& hp);

} // namespace checkshrink

#endif
