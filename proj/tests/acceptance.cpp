// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "checkshrink/are.hpp"
#include "checkshrink/check_loss.hpp"
#include "checkshrink/competitors.hpp"
#include "checkshrink/experiments.hpp"
#include "checkshrink/grids.hpp"
#include "checkshrink/rng.hpp"
#include "checkshrink/stats.hpp"

using namespace checkshrink;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failed = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds,
            double budget_s) {
    const bool in_budget = budget_s <= 0.0 || seconds < budget_s;
    const bool ok = pass && in_budget;
    std::printf("[%s] criterion %2d: %s [%.2fs%s]\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str(), seconds,
                in_budget ? "" : (", over budget " + std::to_string(budget_s) + "s").c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

template <typename F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void parallel_indices(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct Example1Setup {
    TruthInstance truth;
    ProblemInstance proto;  // x slot unset; filled per draw
};

Example1Setup example1_setup(std::size_t n) {
    Example1Setup s;
    const std::size_t n_low = n * 9 / 10;
    s.truth.theta.resize(n);
    s.proto.x.assign(n, 0.0);
    s.proto.sigma_p.assign(n, 1.0 / 3.0);
    s.proto.sigma_f.assign(n, 1.0);
    s.proto.b.resize(n);
    s.proto.h.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool low = i < n_low;
        s.truth.theta[i] = low ? 1.0 / std::sqrt(3.0) : -3.0 * std::sqrt(3.0);
        s.proto.b[i] = low ? 0.51 : 0.99;
        s.proto.h[i] = 1.0 - s.proto.b[i];
    }
    // x defaults to theta; only the tau grid construction reads it here.
    s.proto.x = s.truth.theta;
    return s;
}

// --- criterion 1: Example-1 risk oracle --------------------------------

void criterion_1() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        const Example1Setup s = example1_setup(100);
        const std::vector<double> fine = fine_tau_grid(s.proto, 2001);
        const SelectionResult sel =
            oracle_select(s.truth, s.proto, ShrinkageClass::Origin, OracleObjective::Risk, fine);
        pass = std::abs(sel.hp.tau - 0.296) <= 0.002;
        std::ostringstream os;
        os << "Example-1 risk-oracle tau = " << sel.hp.tau << " (target 0.296 +- 0.002)";
        detail = os.str();
    });
    report(1, pass, detail, secs, 1.0);
}

// --- criterion 2: Figure-1 univariate minima ----------------------------

void criterion_2() {
    std::string detail;
    bool pass_a = false, pass_b = false;
    double argmin_a = 0.0, argmin_b = 0.0;
    const double secs = timed([&] {
        const auto argmin_alpha = [](double theta, double b) {
            TruthInstance truth{{theta}};
            ProblemInstance inst;
            inst.x = {theta};
            inst.sigma_p = {1.0 / 3.0};
            inst.sigma_f = {1.0};
            inst.b = {b};
            inst.h = {1.0 - b};
            const auto curve = risk_curve(truth, inst, ShrinkageClass::Origin, 100001);
            double best = kInf, best_u = 0.0;
            for (const auto& [u, r] : curve) {
                if (r < best) {
                    best = r;
                    best_u = u;
                }
            }
            return best_u;
        };
        argmin_a = argmin_alpha(1.0 / std::sqrt(3.0), 0.51);
        argmin_b = argmin_alpha(-3.0 * std::sqrt(3.0), 0.99);
        pass_a = std::abs(argmin_a - 0.51) <= 0.01;
        pass_b = argmin_b == 1.0;  // boundary
    });
    std::ostringstream os;
    os << "univariate risk argmin alpha = " << argmin_a << " (target 0.51 +- 0.01) and "
       << argmin_b << " (target 1.00, boundary)";
    detail = os.str();
    report(2, pass_a && pass_b, detail, secs, 1.0);
}

// --- criterion 3: Table-1 reproduction ----------------------------------

void criterion_3() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        ScenarioSpec spec;
        spec.name = Scenario::Example1;
        spec.n = 100;
        spec.reps = 50;
        spec.rb_reps = 5;
        spec.seed = RngSeed{1001, 0};
        const EvalReport rep = run_scenario(spec, {"ARE", "EBML", "EBMM"});
        const double are = rep.rows[0].mean_inefficiency;
        const double ml = rep.rows[1].mean_inefficiency;
        const double mm = rep.rows[2].mean_inefficiency;
        pass = are < 8.0 && ml >= 40.0 && ml <= 56.0 && mm >= 40.0 && mm <= 56.0;
        std::ostringstream os;
        os << "Example-1 n=100 reps=50: mean ineff ARE = " << are
           << "% (< 8), EBML = " << ml << "%, EBMM = " << mm << "% (each in [40, 56])";
        detail = os.str();
    });
    report(3, pass, detail, secs, 300.0);
}

// --- criterion 4: Table-2 trend ------------------------------------------

void criterion_4() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        const auto mean_ineff = [](double ratio) {
            ScenarioSpec spec;
            spec.name = Scenario::Example2;
            spec.n = 100;
            spec.reps = 20;
            spec.sigma_ratio = ratio;
            spec.seed = RngSeed{2002, 0};
            return run_scenario(spec, {"ARE"}).rows[0].mean_inefficiency;
        };
        const double at_sixth = mean_ineff(1.0 / 6.0);
        const double at_half = mean_ineff(0.5);
        const double at_one = mean_ineff(1.0);
        pass = at_sixth < at_half && at_half < at_one && at_sixth < 10.0;
        std::ostringstream os;
        os << "Example-2 mean ARE ineff: ratio 1/6 -> " << at_sixth << "% (< 10), 1/2 -> "
           << at_half << "%, 1 -> " << at_one << "% (increasing)";
        detail = os.str();
    });
    report(4, pass, detail, secs, 600.0);
}

// --- criterion 5: Table-3 sanity -------------------------------------------

void criterion_5() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        ScenarioSpec spec;
        spec.name = Scenario::Example3;
        spec.case_id = 1;
        spec.n = 100;
        spec.reps = 20;
        spec.seed = RngSeed{3003, 0};
        const double ineff = run_scenario(spec, {"ARE^G"}).rows[0].mean_inefficiency;
        pass = ineff < 10.0;
        std::ostringstream os;
        os << "Example-3 Case I mean ARE^G ineff = " << ineff << "% (< 10)";
        detail = os.str();
    });
    report(5, pass, detail, secs, 300.0);
}

// --- criterion 6: loss identity against MC ---------------------------------

void criterion_6() {
    std::string detail;
    bool pass = true;
    double worst_ratio = 0.0;
    const double secs = timed([&] {
        RngStream param_rng(RngSeed{6006, 0});
        struct Tuple {
            double theta, sigma, b, h, q;
        };
        std::vector<Tuple> tuples;
        for (int t = 0; t < 20; ++t) {
            tuples.push_back({param_rng.uniform(-3.0, 3.0), param_rng.uniform(0.2, 4.0),
                              param_rng.uniform(0.05, 3.0), param_rng.uniform(0.05, 3.0),
                              param_rng.uniform(-4.0, 4.0)});
        }
        std::vector<double> ratios(tuples.size(), 0.0);
        parallel_indices(tuples.size(), [&](std::size_t t) {
            const Tuple& p = tuples[t];
            RngStream rng(RngSeed{6006, 1}.substream(t));
            const long draws = 10000000;
            double sum = 0.0, sum2 = 0.0;
            const double sd = std::sqrt(p.sigma);
            for (long i = 0; i < draws; ++i) {
                const double y = p.theta + sd * rng.normal();
                const double loss =
                    p.b * std::max(y - p.q, 0.0) + p.h * std::max(p.q - y, 0.0);
                sum += loss;
                sum2 += loss * loss;
            }
            const double mean = sum / static_cast<double>(draws);
            const double se =
                std::sqrt((sum2 / static_cast<double>(draws) - mean * mean) /
                          static_cast<double>(draws));
            const double closed = expected_check_loss(p.theta, p.sigma, p.b, p.h, p.q);
            ratios[t] = std::abs(closed - mean) / se;
        });
        for (double r : ratios) {
            worst_ratio = std::max(worst_ratio, r);
            if (r >= 3.0) pass = false;
        }
    });
    std::ostringstream os;
    os << "closed-form check loss vs 1e7-draw MC on 20 tuples: worst |diff|/SE = "
       << worst_ratio << " (< 3)";
    detail = os.str();
    report(6, pass, detail, secs, 0.0);
}

// --- criterion 7: Hermite moment property and series unbiasedness -----------

void criterion_7() {
    std::string detail;
    bool pass = true;
    std::ostringstream os;
    const double secs = timed([&] {
        // sigma^{k/2} E[H_k(W/sqrt(sigma))] = mu^k within 4 SE.
        struct MomentCfg {
            double mu, sigma;
            int k;
        };
        os << "moment-property |diff|/SE:";
        for (const MomentCfg cfg : {MomentCfg{0.5, 0.25, 3}, MomentCfg{1.0, 1.0, 4}}) {
            RngStream rng(RngSeed{7007, static_cast<std::uint64_t>(cfg.k)});
            const int draws = 1000000;
            const double scale = std::pow(cfg.sigma, cfg.k / 2.0);
            double sum = 0.0, sum2 = 0.0;
            for (int i = 0; i < draws; ++i) {
                const double w = cfg.mu + std::sqrt(cfg.sigma) * rng.normal();
                const double v =
                    scale * stats::hermite_eval(cfg.k, w / std::sqrt(cfg.sigma)).value;
                sum += v;
                sum2 += v * v;
            }
            const double mean = sum / draws;
            const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
            const double ratio = std::abs(mean - std::pow(cfg.mu, cfg.k)) / se;
            os << ' ' << ratio;
            if (ratio >= 4.0) pass = false;
        }

        // Series estimate unbiased for the Taylor polynomial within 4 SE.
        struct SeriesCfg {
            double theta_t, v, b;
            int k;
        };
        os << "; series |diff|/SE:";
        for (const SeriesCfg cfg : {SeriesCfg{0.25, 0.2, 0.51, 14},
                                    SeriesCfg{-0.6, 0.45, 0.75, 24},
                                    SeriesCfg{0.1, 0.06, 0.95, 40}}) {
            RngStream rng(RngSeed{7007, static_cast<std::uint64_t>(100 + cfg.k)});
            const int draws = 1000000;
            double sum = 0.0, sum2 = 0.0;
            for (int i = 0; i < draws; ++i) {
                const double u = cfg.theta_t + std::sqrt(cfg.v) * rng.normal();
                const double s = taylor_estimate(u, cfg.v, cfg.b, cfg.k);
                sum += s;
                sum2 += s * s;
            }
            const double mean = sum / draws;
            const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
            // Truncated Taylor target evaluated directly.
            double target = stats::kPhi0 + (0.5 - cfg.b) * cfg.theta_t;
            double y_pow = cfg.theta_t * cfg.theta_t;
            for (int l = 0; l + 2 <= cfg.k; ++l) {
                if (l % 2 == 0) {
                    target += stats::kPhi0 * stats::hermite_at_zero(l) /
                              std::tgamma(l + 3.0) * y_pow;
                }
                y_pow *= cfg.theta_t;
            }
            const double ratio = std::abs(mean - target) / se;
            os << ' ' << ratio;
            if (ratio >= 4.0) pass = false;
        }
        os << " (each < 4)";
    });
    detail = os.str();
    report(7, pass, detail, secs, 0.0);
}

// --- criterion 8: risk estimate tracks the risk curve ----------------------

double are_risk_gap(std::size_t n, int draws) {
    const Example1Setup s = example1_setup(n);
    const Grid grid = build_grid_origin(s.proto, n);
    const std::size_t m = grid.tau_points.size();

    std::vector<double> acc(m, 0.0);
    std::vector<std::vector<double>> per_draw(static_cast<std::size_t>(draws));
    parallel_indices(static_cast<std::size_t>(draws), [&](std::size_t d) {
        RngStream rng(RngSeed{8008, 0}.substream(d));
        ProblemInstance inst = s.proto;
        for (std::size_t i = 0; i < n; ++i) {
            inst.x[i] = s.truth.theta[i] + std::sqrt(inst.sigma_p[i]) * rng.normal();
        }
        const AreTuning tuning =
            make_tuning(inst, 0.5, 5, RngSeed{8008, 1}.substream(d));
        const AreEstimator est(inst, tuning);
        auto& vals = per_draw[d];
        vals.resize(m);
        for (std::size_t t = 0; t < m; ++t) vals[t] = est.origin(grid.tau_points[t]);
    });
    for (const auto& vals : per_draw) {
        for (std::size_t t = 0; t < m; ++t) acc[t] += vals[t];
    }
    double worst = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double mean = acc[t] / draws;
        const double risk = total_risk(
            s.truth, s.proto, HyperParams{0.0, grid.tau_points[t], ShrinkageClass::Origin});
        worst = std::max(worst, std::abs(mean - risk));
    }
    return worst;
}

void criterion_8() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        const double gap_100 = are_risk_gap(100, 500);
        const double gap_1000 = are_risk_gap(1000, 500);
        pass = gap_1000 < gap_100 && gap_1000 < 0.05;
        std::ostringstream os;
        os << "max grid gap |mean ARE - risk|: n=100 -> " << gap_100 << ", n=1000 -> "
           << gap_1000 << " (decreasing, n=1000 value < 0.05)";
        detail = os.str();
    });
    report(8, pass, detail, secs, 0.0);
}

// --- criterion 9: exact invariants and identities ---------------------------

void criterion_9() {
    std::ostringstream os;
    bool pass = true;
    const auto check = [&](bool ok, const char* what) {
        if (!ok) {
            pass = false;
            os << " [failed: " << what << "]";
        }
    };
    const double secs = timed([&] {
        // Bayes rule = posterior-predictive quantile, exactly.
        {
            const double sp = 0.3, sf = 1.2, b = 0.62, h = 0.38;
            for (double tau : {0.0, 0.45, 3.2, kInf}) {
                const double alpha = shrinkage_alpha(tau, sp);
                const double q = bayes_predict(0.9, -0.2, tau, sp, sf, b, h);
                const double mean = alpha * 0.9 + (1.0 - alpha) * -0.2;
                const double sd = std::sqrt(sf + alpha * sp);
                check(std::abs(stats::norm_cdf((q - mean) / sd) - b / (b + h)) < 1e-12,
                      "bayes quantile identity");
            }
        }
        // Location equivariance, exact.
        {
            RngStream rng(RngSeed{9009, 0});
            ProblemInstance inst;
            for (int i = 0; i < 8; ++i) {
                inst.x.push_back(rng.normal());
                inst.sigma_p.push_back(rng.uniform(0.1, 0.4));
                inst.sigma_f.push_back(1.0);
                inst.b.push_back(rng.uniform(0.52, 0.95));
                inst.h.push_back(1.0 - inst.b.back());
            }
            const double c = 1.375;
            const auto q =
                predict_class(inst, HyperParams{0.4, 0.8, ShrinkageClass::DataDriven});
            ProblemInstance shifted = inst;
            for (double& xi : shifted.x) xi += c;
            const auto qs =
                predict_class(shifted, HyperParams{0.4 + c, 0.8, ShrinkageClass::DataDriven});
            for (std::size_t i = 0; i < q.size(); ++i) {
                check(std::abs(qs[i] - (q[i] + c)) < 1e-12, "location equivariance");
            }

            // Grand-mean shift invariance of the risk estimate, bit-exact.
            const AreTuning tuning = make_tuning(inst, 0.5, 5, RngSeed{9009, 1});
            check(are_grandmean(shifted, 0.6, tuning) == are_grandmean(inst, 0.6, tuning),
                  "grand-mean shift invariance");

            // Seed determinism of the stochastic estimate.
            check(are_origin(inst, 0.7, tuning) == are_origin(inst, 0.7, tuning),
                  "seed determinism");
        }
        // Branch exhaustiveness including boundary ties.
        {
            const RiskCoeffs rc = risk_coeffs(0.5, 0.25, 1.0, 0.6, 0.4);
            const double lambda = 0.2;
            for (double vt : {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3}) {
                const double v_raw = (vt - rc.c) / rc.d;
                const double got = threshold_estimate(SplitPair{0.4, v_raw}, rc, 0.6, 0.25,
                                                      lambda, 8, 50.0);
                const double ut = rc.c + rc.d * 0.4;
                double expect;
                if (vt < -lambda) {
                    expect = -0.6 * ut;
                } else if (vt > lambda) {
                    expect = 0.4 * ut;
                } else {
                    expect = std::clamp(
                        taylor_estimate(ut, 2.0 * 0.25 * rc.d * rc.d, 0.6, 8), -50.0, 50.0);
                }
                check(got == expect, "branch exhaustiveness");
            }
        }
        // Grid round trips.
        {
            ProblemInstance inst;
            inst.x.assign(50, 0.2);
            inst.sigma_p.assign(50, 0.25);
            inst.sigma_f.assign(50, 1.0);
            inst.b.assign(50, 0.6);
            inst.h.assign(50, 0.4);
            const Grid g = build_grid_origin(inst, 50);
            for (double tau : g.tau_points) {
                if (std::isinf(tau)) continue;
                const double t = tau / (tau + 1.0);
                check(std::abs(t / (1.0 - t) / (t / (1.0 - t) + 1.0) - t) < 1e-12,
                      "grid round trip");
            }
        }
        // OracleRisk inefficiency identically zero.
        {
            const Example1Setup s = example1_setup(60);
            const std::vector<double> fine = fine_tau_grid(s.proto, 2001);
            const SelectionResult sel = oracle_select(s.truth, s.proto, ShrinkageClass::Origin,
                                                      OracleObjective::Risk, fine);
            check(inefficiency(s.truth, s.proto, sel.hp.tau, ShrinkageClass::Origin) == 0.0,
                  "oracle inefficiency zero");
        }
        // Reported-run determinism across thread counts is covered by the
        // replication substream layout: rerunning a scenario reproduces the
        // same JSON.
        {
            ScenarioSpec spec;
            spec.name = Scenario::Example1;
            spec.n = 20;
            spec.reps = 2;
            spec.seed = RngSeed{9009, 2};
            const auto r1 = run_scenario(spec, {"ARE", "OracleRisk"});
            const auto r2 = run_scenario(spec, {"ARE", "OracleRisk"});
            check(r1.to_json() == r2.to_json(), "scenario determinism");
        }
    });
    std::string detail = "exact identity suite (quantile identity, equivariance, "
                         "shift invariance, branches, grid round trips, oracle zero, "
                         "determinism)" + os.str();
    report(9, pass, detail, secs, 0.0);
}

// --- criterion 10: newsvendor harness ---------------------------------------

void criterion_10() {
    std::string detail;
    bool pass = false;
    const double secs = timed([&] {
        ScenarioSpec spec;
        spec.name = Scenario::Newsvendor;
        spec.n = 200;
        spec.reps = 50;
        spec.seed = RngSeed{1010, 0};
        spec.demand_sigma = 25.0;
        const EvalReport rep = newsvendor_run(spec);

        bool ok = rep.comparisons.size() == 3;
        double are_vs_us = kInf, p_are_us = -1.0;
        for (const auto& c : rep.comparisons) {
            ok = ok && std::isfinite(c.mean) && c.wilcoxon_p > 0.0 && c.wilcoxon_p <= 1.0;
            if (c.pair == "ARE over US") {
                are_vs_us = c.mean;
                p_are_us = c.wilcoxon_p;
            }
        }

        // Self-comparison through the same comparison path: the ARE row's
        // realized per-rep losses against themselves.
        const std::vector<double>* are_losses = nullptr;
        for (const auto& row : rep.rows) {
            if (row.method == "ARE") are_losses = &row.per_rep_values;
        }
        bool self_zero = false;
        double self_p = -1.0;
        if (are_losses != nullptr && are_losses->size() == 50) {
            const Comparison self =
                compare_losses("ARE over ARE", *are_losses, *are_losses);
            self_zero = self.min == 0.0 && self.max == 0.0 && self.mean == 0.0;
            self_p = self.wilcoxon_p;
        }

        pass = ok && self_zero && self_p == 0.5 && std::isfinite(are_vs_us);
        std::ostringstream os;
        os << "newsvendor 200 items, 50 reps: ARE-vs-US mean efficiency = " << are_vs_us
           << "% (finite), wilcoxon p = " << p_are_us
           << " (computed), self-comparison eff 0 with p = " << self_p;
        detail = os.str();
    });
    report(10, pass, detail, secs, 0.0);
}

} // namespace

int main() {
    std::printf("acceptance suite (%zu worker threads)\n", worker_thread_count());
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failed == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failed);
    }
    return g_failed;
}
