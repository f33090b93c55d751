#ifndef CHECKSHRINK_EXPERIMENTS_HPP
#define CHECKSHRINK_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "checkshrink/are.hpp"
#include "checkshrink/check_loss.hpp"
#include "checkshrink/competitors.hpp"
#include "checkshrink/rng.hpp"

namespace checkshrink {

enum class Scenario { Example1, Example2, Example3, Newsvendor, Custom };

struct ScenarioSpec {
    Scenario name = Scenario::Example1;
    std::size_t n = 100;
    int reps = 50;
    RngSeed seed;

    double sigma_ratio = 1.0 / 3.0;  // Example2: common sigma_p/sigma_f
    int case_id = 1;                 // Example3: 1..6

    // Newsvendor study.
    double markup = 0.15;
    double capital_rate = 0.15;
    double demand_sigma = 0.0;   // demand noise variance; must be set
    double highvol_flat = 0.0;   // additive cost on b for high-volume items
    std::string input_csv;       // optional (theta, price) source

    int rb_reps = 5;
    double rho = 0.5;
    std::size_t grid_min_points = 0;
};

struct ReportRow {
    std::string method;
    double mean_inefficiency = 0.0;
    double sd_inefficiency = 0.0;
    double mean_tau = 0.0;
    double sd_tau = 0.0;
    std::optional<double> mean_eta;
    std::optional<double> sd_eta;
    std::vector<double> per_rep_values;  // inefficiency or realized loss per rep
    std::vector<std::string> warnings;
};

struct Comparison {
    std::string pair;  // e.g. "ARE over US"
    double min = 0.0, q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0, max = 0.0;
    double wilcoxon_p = 0.0;
    std::vector<std::string> warnings;
};

struct EvalReport {
    std::string scenario;
    std::size_t n = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::vector<Comparison> comparisons;

    std::string to_json() const;
    std::string rows_csv() const;
};

// Scenario generators; each call consumes the stream, so a fresh substream
// per replication keeps runs independent and reproducible.
std::pair<TruthInstance, ProblemInstance> gen_example1(std::size_t n, RngStream& rng);
std::pair<TruthInstance, ProblemInstance> gen_example2(double sigma_ratio, std::size_t n,
                                                       RngStream& rng);
std::pair<TruthInstance, ProblemInstance> gen_example3(int case_id, std::size_t n,
                                                       RngStream& rng);

// Runs `reps` replications, selecting hyperparameters per method and scoring
// each selection by closed-form inefficiency. Known methods: ARE, ARE^G,
// ARE^D, EBML, EBMM, OracleRisk, OracleLoss, Unshrunken.
EvalReport run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& methods);

// Closed-form risk sampled on `resolution` equispaced values of the
// reference shrinkage factor u in [0,1]; returns (u, risk) pairs.
std::vector<std::pair<double, double>> risk_curve(const TruthInstance& truth,
                                                  const ProblemInstance& inst,
                                                  ShrinkageClass class_tag,
                                                  std::size_t resolution);

// Risk-estimate curve over a grid: (tau, estimate) pairs.
std::vector<std::pair<double, double>> are_curve(const ProblemInstance& inst,
                                                 ShrinkageClass class_tag,
                                                 const Grid& grid, const AreTuning& tuning);

// Stocking study: draws two past months and one future month of demand per
// replication, stocks by the unshrunken rule, joint maximum likelihood and
// the risk-estimate selection, scores realized check loss on the future
// month, and compares pairwise relative efficiencies with one-sided
// signed-rank p-values.
EvalReport newsvendor_run(const ScenarioSpec& spec);

// Relative efficiency of A over B per replication, in percent:
// (loss_b - loss_a)/loss_b * 100. Summary statistics plus the one-sided
// signed-rank p-value for "efficiency > 0"; identical loss vectors give all
// zeros and the indifferent p = 0.5.
Comparison compare_losses(const std::string& label, std::span<const double> loss_a,
                          std::span<const double> loss_b);

// Item parameters for the stocking study.
struct NewsvendorItems {
    std::vector<double> theta;
    std::vector<double> price;
};
NewsvendorItems synth_newsvendor_items(std::size_t n, RngStream& rng);
NewsvendorItems read_newsvendor_csv(const std::string& path);

// Estimation input: header x,sigma_p,sigma_f,b,h with optional trailing
// theta column.
struct CsvData {
    ProblemInstance inst;
    std::optional<TruthInstance> truth;
};
CsvData read_instance_csv(const std::string& path);

// Parse failure with a 1-based line number for diagnostics.
struct ParseError : std::runtime_error {
    ParseError(const std::string& path, std::size_t line, const std::string& what);
    std::size_t line_number;
};

std::size_t worker_thread_count();  // honors CHECKSHRINK_THREADS (0 = auto)

} // namespace checkshrink

#endif
