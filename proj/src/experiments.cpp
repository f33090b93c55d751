#include "checkshrink/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "checkshrink/stats.hpp"

namespace checkshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Substream key namespaces; keeps replication, generator and
// Rao-Blackwell draws on disjoint streams.
constexpr std::uint64_t kRepTag = 0x5245504c;
constexpr std::uint64_t kAreSeedTag = 0x41524553;

void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

} // namespace

std::size_t worker_thread_count() {
    if (const char* env = std::getenv("CHECKSHRINK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::pair<TruthInstance, ProblemInstance> gen_example1(std::size_t n, RngStream& rng) {
    const std::size_t n_low = static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(n)));
    const double theta_low = 1.0 / std::sqrt(3.0);
    const double theta_high = -3.0 * std::sqrt(3.0);

    TruthInstance truth;
    ProblemInstance inst;
    truth.theta.resize(n);
    inst.x.resize(n);
    inst.sigma_p.assign(n, 1.0 / 3.0);
    inst.sigma_f.assign(n, 1.0);
    inst.b.resize(n);
    inst.h.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool low = i < n_low;
        truth.theta[i] = low ? theta_low : theta_high;
        inst.b[i] = low ? 0.51 : 0.99;
        inst.h[i] = 1.0 - inst.b[i];
        inst.x[i] = truth.theta[i] + std::sqrt(inst.sigma_p[i]) * rng.normal();
    }
    return {std::move(truth), std::move(inst)};
}

std::pair<TruthInstance, ProblemInstance> gen_example2(double sigma_ratio, std::size_t n,
                                                       RngStream& rng) {
    TruthInstance truth;
    ProblemInstance inst;
    truth.theta.resize(n);
    inst.x.resize(n);
    inst.sigma_p.assign(n, sigma_ratio);
    inst.sigma_f.assign(n, 1.0);
    inst.b.resize(n);
    inst.h.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        truth.theta[i] = rng.normal();
        inst.b[i] = rng.uniform(0.51, 0.99);
        inst.h[i] = 1.0 - inst.b[i];
        inst.x[i] = truth.theta[i] + std::sqrt(inst.sigma_p[i]) * rng.normal();
    }
    return {std::move(truth), std::move(inst)};
}

std::pair<TruthInstance, ProblemInstance> gen_example3(int case_id, std::size_t n,
                                                       RngStream& rng) {
    if (case_id < 1 || case_id > 6) {
        throw std::invalid_argument("gen_example3: case must lie in 1..6");
    }
    TruthInstance truth;
    ProblemInstance inst;
    truth.theta.resize(n);
    inst.x.resize(n);
    inst.sigma_p.resize(n);
    inst.sigma_f.assign(n, 1.0);
    inst.b.resize(n);
    inst.h.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        double sp = 0.0;
        switch (case_id) {
            case 1:
            case 2:
            case 3:
            case 6:
                sp = rng.uniform(0.1, 1.0 / 3.0);
                break;
            case 4: {
                // Inverse chi-square with 10 df, resampled until it obeys the
                // variance-ratio cap.
                do {
                    double chi2 = 0.0;
                    for (int d = 0; d < 10; ++d) {
                        const double z = rng.normal();
                        chi2 += z * z;
                    }
                    sp = 1.0 / chi2;
                } while (sp > 1.0 / 3.0);
                break;
            }
            case 5:
                sp = rng.uniform01() < 0.5 ? 0.1 : 0.5;
                break;
        }
        inst.sigma_p[i] = sp;

        switch (case_id) {
            case 1: truth.theta[i] = rng.uniform(0.0, 1.0); break;
            case 2: truth.theta[i] = rng.normal(); break;
            case 3:
            case 4:
            case 6: truth.theta[i] = 5.0 * sp; break;
            case 5: truth.theta[i] = std::sqrt(sp) * rng.normal(); break;
        }

        inst.b[i] = rng.uniform(0.51, 0.99);
        inst.h[i] = 1.0 - inst.b[i];

        if (case_id == 6) {
            // Uniform past with matched mean and variance.
            const double half = std::sqrt(3.0 * sp);
            inst.x[i] = rng.uniform(truth.theta[i] - half, truth.theta[i] + half);
        } else {
            inst.x[i] = truth.theta[i] + std::sqrt(sp) * rng.normal();
        }
    }
    return {std::move(truth), std::move(inst)};
}

namespace {

struct MethodPlan {
    std::string label;
    Method method;
    ShrinkageClass cls;
};

MethodPlan parse_method(const std::string& name) {
    if (name == "ARE") return {name, Method::Are, ShrinkageClass::Origin};
    if (name == "ARE^G") return {name, Method::Are, ShrinkageClass::GrandMean};
    if (name == "ARE^D") return {name, Method::Are, ShrinkageClass::DataDriven};
    if (name == "EBML") return {name, Method::Ebml, ShrinkageClass::Origin};
    if (name == "EBMM") return {name, Method::Ebmm, ShrinkageClass::Origin};
    if (name == "OracleRisk") return {name, Method::OracleRisk, ShrinkageClass::Origin};
    if (name == "OracleLoss") return {name, Method::OracleLoss, ShrinkageClass::Origin};
    if (name == "Unshrunken") return {name, Method::Unshrunken, ShrinkageClass::Origin};
    throw std::invalid_argument("unknown method: " + name);
}

// Oracle rows follow the shrinkage class of the scenario's headline method.
ShrinkageClass scenario_class(const ScenarioSpec& spec) {
    return spec.name == Scenario::Example3 ? ShrinkageClass::GrandMean
                                           : ShrinkageClass::Origin;
}

std::pair<TruthInstance, ProblemInstance> generate(const ScenarioSpec& spec, RngStream& rng) {
    switch (spec.name) {
        case Scenario::Example1: return gen_example1(spec.n, rng);
        case Scenario::Example2: return gen_example2(spec.sigma_ratio, spec.n, rng);
        case Scenario::Example3: return gen_example3(spec.case_id, spec.n, rng);
        default:
            throw std::invalid_argument("run_scenario handles example scenarios only");
    }
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Example1: return "example1";
        case Scenario::Example2: return "example2";
        case Scenario::Example3: return "example3";
        case Scenario::Newsvendor: return "newsvendor";
        case Scenario::Custom: return "custom";
    }
    return "?";
}

struct RepOutcome {
    double ineff = 0.0;
    double tau = 0.0;
    double eta = 0.0;
    std::vector<std::string> warnings;
};

} // namespace

EvalReport run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& methods) {
    if (spec.reps < 1) throw std::invalid_argument("run_scenario: reps must be >= 1");
    std::vector<MethodPlan> plans;
    plans.reserve(methods.size());
    for (const auto& m : methods) {
        MethodPlan p = parse_method(m);
        if (p.method == Method::OracleRisk || p.method == Method::OracleLoss ||
            p.method == Method::Unshrunken) {
            p.cls = scenario_class(spec);
        }
        plans.push_back(std::move(p));
    }

    std::vector<std::vector<RepOutcome>> per_rep(static_cast<std::size_t>(spec.reps),
                                                 std::vector<RepOutcome>(plans.size()));

    run_indexed(static_cast<std::size_t>(spec.reps), [&](std::size_t rep) {
        RngStream rng(spec.seed.substream(kRepTag, rep));
        auto [truth, inst] = generate(spec, rng);
        const std::vector<double> fine = fine_tau_grid(inst, 2001);

        AreTuning tuning;
        Grid origin_grid, dd_grid;
        bool have_are = false;
        for (const auto& p : plans) have_are |= p.method == Method::Are;
        if (have_are) {
            tuning = make_tuning(inst, spec.rho, spec.rb_reps,
                                 spec.seed.substream(kAreSeedTag, rep));
            origin_grid = build_grid_origin(inst, inst.size(), spec.grid_min_points);
            dd_grid = build_grid_datadriven(inst, inst.size(), spec.grid_min_points);
        }

        for (std::size_t m = 0; m < plans.size(); ++m) {
            const MethodPlan& plan = plans[m];
            SelectionResult sel;
            switch (plan.method) {
                case Method::Are:
                    sel = are_select(inst, plan.cls,
                                     plan.cls == ShrinkageClass::DataDriven ? dd_grid
                                                                            : origin_grid,
                                     tuning);
                    break;
                case Method::Ebml:
                    sel = plan.cls == ShrinkageClass::DataDriven ? ebml_datadriven(inst)
                                                                 : ebml_origin(inst);
                    break;
                case Method::Ebmm:
                    sel = plan.cls == ShrinkageClass::DataDriven ? ebmm_datadriven(inst)
                                                                 : ebmm_origin(inst);
                    break;
                case Method::OracleRisk:
                    sel = oracle_select(truth, inst, plan.cls, OracleObjective::Risk, fine);
                    break;
                case Method::OracleLoss:
                    sel = oracle_select(truth, inst, plan.cls, OracleObjective::Loss, fine);
                    break;
                case Method::Unshrunken:
                    sel.method = Method::Unshrunken;
                    sel.hp = {0.0, kInf, plan.cls};
                    break;
            }
            RepOutcome& out = per_rep[rep][m];
            HyperParams hp = sel.hp;
            hp.class_tag = plan.cls;
            out.ineff = inefficiency(truth, inst, hp);
            out.tau = sel.hp.tau;
            out.eta = sel.hp.eta;
            out.warnings = std::move(sel.warnings);
        }
    });

    EvalReport report;
    report.scenario = scenario_name(spec.name);
    report.n = spec.n;
    report.reps = spec.reps;
    report.seed = spec.seed.seed;
    for (std::size_t m = 0; m < plans.size(); ++m) {
        std::vector<double> ineff, tau, eta;
        ReportRow row;
        row.method = plans[m].label;
        for (int rep = 0; rep < spec.reps; ++rep) {
            const RepOutcome& o = per_rep[static_cast<std::size_t>(rep)][m];
            ineff.push_back(o.ineff);
            tau.push_back(o.tau);
            eta.push_back(o.eta);
            for (const auto& w : o.warnings) {
                if (std::find(row.warnings.begin(), row.warnings.end(), w) ==
                    row.warnings.end()) {
                    row.warnings.push_back(w);
                }
            }
        }
        row.mean_inefficiency = mean_of(ineff);
        row.sd_inefficiency = sd_of(ineff);
        const bool tau_finite =
            std::all_of(tau.begin(), tau.end(), [](double t) { return std::isfinite(t); });
        row.mean_tau = tau_finite ? mean_of(tau) : kInf;
        row.sd_tau = tau_finite ? sd_of(tau) : 0.0;
        if (plans[m].cls == ShrinkageClass::DataDriven) {
            row.mean_eta = mean_of(eta);
            row.sd_eta = sd_of(eta);
        }
        row.per_rep_values = std::move(ineff);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::pair<double, double>> risk_curve(const TruthInstance& truth,
                                                  const ProblemInstance& inst,
                                                  ShrinkageClass class_tag,
                                                  std::size_t resolution) {
    if (resolution < 2) throw std::invalid_argument("risk_curve: resolution must be >= 2");
    const std::vector<double> us = fine_u_grid(resolution);
    const double s = reference_sigma_p(inst);
    std::vector<std::pair<double, double>> out;
    out.reserve(us.size());
    for (double u : us) {
        const double tau = u >= 1.0 ? kInf : s * u / (1.0 - u);
        out.emplace_back(u, total_risk(truth, inst, HyperParams{0.0, tau, class_tag}));
    }
    return out;
}

std::vector<std::pair<double, double>> are_curve(const ProblemInstance& inst,
                                                 ShrinkageClass class_tag,
                                                 const Grid& grid, const AreTuning& tuning) {
    const AreEstimator est(inst, tuning);
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.tau_points.size());
    for (double tau : grid.tau_points) {
        double v = 0.0;
        switch (class_tag) {
            case ShrinkageClass::Origin: v = est.origin(tau); break;
            case ShrinkageClass::GrandMean: v = est.grandmean(tau); break;
            case ShrinkageClass::DataDriven:
                // Single-curve view: profile over the grid's eta points.
                v = kInf;
                for (double eta : grid.eta_points) {
                    v = std::min(v, est.datadriven(eta, tau));
                }
                break;
        }
        out.emplace_back(tau, v);
    }
    return out;
}

NewsvendorItems synth_newsvendor_items(std::size_t n, RngStream& rng) {
    NewsvendorItems items;
    items.theta.resize(n);
    items.price.resize(n);
    const std::size_t n_high = n / 4;
    for (std::size_t i = 0; i < n; ++i) {
        items.theta[i] = i < n_high ? rng.uniform(100.0, 300.0) : rng.uniform(10.0, 30.0);
        items.price[i] = rng.uniform(5.0, 50.0);
    }
    return items;
}

EvalReport newsvendor_run(const ScenarioSpec& spec) {
    if (!(spec.demand_sigma > 0.0)) {
        throw std::invalid_argument(
            "newsvendor: demand_sigma (demand noise variance) must be set and positive");
    }
    NewsvendorItems items;
    if (!spec.input_csv.empty()) {
        items = read_newsvendor_csv(spec.input_csv);
    } else {
        RngStream rng(spec.seed.substream(0x4954454d));
        items = synth_newsvendor_items(spec.n, rng);
    }
    const std::size_t n = items.theta.size();
    if (n == 0) throw std::invalid_argument("newsvendor: no items");

    std::vector<double> b(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = spec.markup / (1.0 + spec.markup) * items.price[i];
        if (items.theta[i] > 100.0) b[i] += spec.highvol_flat;
        h[i] = b[i] * spec.capital_rate / 12.0;
    }

    const double sigma = spec.demand_sigma;
    const std::size_t reps = static_cast<std::size_t>(spec.reps);
    struct RepLoss {
        double us = 0.0, ebml = 0.0, are = 0.0;
        double are_tau = 0.0, are_eta = 0.0, ebml_tau = 0.0, ebml_eta = 0.0;
        std::vector<std::string> warnings;
    };
    std::vector<RepLoss> losses(reps);

    run_indexed(reps, [&](std::size_t rep) {
        RngStream rng(spec.seed.substream(kRepTag, rep));
        ProblemInstance inst;
        inst.sigma_p.assign(n, sigma / 2.0);  // two averaged past months
        inst.sigma_f.assign(n, sigma);
        inst.b = b;
        inst.h = h;
        inst.x.resize(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double sd = std::sqrt(sigma);
            const double x1 = items.theta[i] + sd * rng.normal();
            const double x2 = items.theta[i] + sd * rng.normal();
            y[i] = items.theta[i] + sd * rng.normal();
            inst.x[i] = 0.5 * (x1 + x2);
        }

        const auto realized = [&](const std::vector<double>& q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += b[i] * std::max(y[i] - q[i], 0.0) + h[i] * std::max(q[i] - y[i], 0.0);
            }
            return acc / static_cast<double>(n);
        };

        const std::vector<double> q_us =
            predict_class(inst, HyperParams{0.0, kInf, ShrinkageClass::Origin});

        const SelectionResult ml = ebml_datadriven(inst);
        const std::vector<double> q_ml = predict_class(inst, ml.hp);

        const AreTuning tuning = make_tuning(inst, spec.rho, spec.rb_reps,
                                             spec.seed.substream(kAreSeedTag, rep));
        const Grid grid = build_grid_datadriven(inst, n, spec.grid_min_points);
        const SelectionResult are = are_select(inst, ShrinkageClass::DataDriven, grid, tuning);
        const std::vector<double> q_are = predict_class(inst, are.hp);

        RepLoss& out = losses[rep];
        out.us = realized(q_us);
        out.ebml = realized(q_ml);
        out.are = realized(q_are);
        out.are_tau = are.hp.tau;
        out.are_eta = are.hp.eta;
        out.ebml_tau = ml.hp.tau;
        out.ebml_eta = ml.hp.eta;
        out.warnings = are.warnings;
    });

    EvalReport report;
    report.scenario = "newsvendor";
    report.n = n;
    report.reps = spec.reps;
    report.seed = spec.seed.seed;

    const auto add_row = [&](const std::string& name, auto loss_of, auto tau_of, auto eta_of) {
        std::vector<double> loss, tau, eta;
        for (const RepLoss& r : losses) {
            loss.push_back(loss_of(r));
            tau.push_back(tau_of(r));
            eta.push_back(eta_of(r));
        }
        ReportRow row;
        row.method = name;
        row.mean_inefficiency = mean_of(loss);  // realized loss, not a percentage
        row.sd_inefficiency = sd_of(loss);
        const bool tau_finite =
            std::all_of(tau.begin(), tau.end(), [](double t) { return std::isfinite(t); });
        row.mean_tau = tau_finite ? mean_of(tau) : kInf;
        row.sd_tau = tau_finite ? sd_of(tau) : 0.0;
        row.mean_eta = mean_of(eta);
        row.sd_eta = sd_of(eta);
        row.per_rep_values = std::move(loss);
        report.rows.push_back(std::move(row));
    };
    add_row("US", [](const RepLoss& r) { return r.us; },
            [](const RepLoss&) { return kInf; }, [](const RepLoss&) { return 0.0; });
    add_row("EBML", [](const RepLoss& r) { return r.ebml; },
            [](const RepLoss& r) { return r.ebml_tau; },
            [](const RepLoss& r) { return r.ebml_eta; });
    add_row("ARE", [](const RepLoss& r) { return r.are; },
            [](const RepLoss& r) { return r.are_tau; },
            [](const RepLoss& r) { return r.are_eta; });
    for (const RepLoss& r : losses) {
        for (const auto& w : r.warnings) {
            auto& ws = report.rows.back().warnings;
            if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
        }
    }

    const auto losses_of = [&](auto get) {
        std::vector<double> v(reps);
        for (std::size_t r = 0; r < reps; ++r) v[r] = get(losses[r]);
        return v;
    };
    const std::vector<double> l_us = losses_of([](const RepLoss& r) { return r.us; });
    const std::vector<double> l_ml = losses_of([](const RepLoss& r) { return r.ebml; });
    const std::vector<double> l_are = losses_of([](const RepLoss& r) { return r.are; });
    report.comparisons.push_back(compare_losses("ARE over US", l_are, l_us));
    report.comparisons.push_back(compare_losses("EBML over US", l_ml, l_us));
    report.comparisons.push_back(compare_losses("ARE over EBML", l_are, l_ml));
    return report;
}

Comparison compare_losses(const std::string& label, std::span<const double> loss_a,
                          std::span<const double> loss_b) {
    if (loss_a.size() != loss_b.size() || loss_a.empty()) {
        throw std::invalid_argument("compare_losses: length mismatch or empty");
    }
    std::vector<double> eff(loss_a.size());
    for (std::size_t r = 0; r < eff.size(); ++r) {
        eff[r] = (loss_b[r] - loss_a[r]) / loss_b[r] * 100.0;
    }
    Comparison cmp;
    cmp.pair = label;
    std::vector<double> sorted = eff;
    std::sort(sorted.begin(), sorted.end());
    cmp.min = sorted.front();
    cmp.max = sorted.back();
    cmp.q1 = stats::sample_quantile(sorted, 0.25);
    cmp.median = stats::sample_quantile(sorted, 0.5);
    cmp.q3 = stats::sample_quantile(sorted, 0.75);
    cmp.mean = mean_of(eff);
    const bool degenerate =
        std::all_of(eff.begin(), eff.end(), [](double e) { return e == 0.0; });
    if (degenerate) {
        // Identical methods: no evidence either way.
        cmp.wilcoxon_p = 0.5;
        cmp.warnings.push_back("all efficiencies are zero; p fixed at 0.5");
    } else {
        cmp.wilcoxon_p = stats::wilcoxon_signed_rank(eff);
    }
    return cmp;
}

namespace {

nlohmann::json row_json(const ReportRow& row) {
    nlohmann::json j{{"method", row.method},
                     {"mean_inefficiency", row.mean_inefficiency},
                     {"sd_inefficiency", row.sd_inefficiency},
                     {"sd_tau", row.sd_tau}};
    if (std::isfinite(row.mean_tau)) {
        j["mean_tau"] = row.mean_tau;
    } else {
        j["mean_tau"] = "inf";
    }
    if (row.mean_eta) j["mean_eta"] = *row.mean_eta;
    if (row.sd_eta) j["sd_eta"] = *row.sd_eta;
    j["per_rep_values"] = row.per_rep_values;
    j["warnings"] = row.warnings;
    return j;
}

} // namespace

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["n"] = n;
    j["reps"] = reps;
    j["seed"] = seed;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) j["rows"].push_back(row_json(row));
    j["comparisons"] = nlohmann::json::array();
    for (const auto& c : comparisons) {
        j["comparisons"].push_back(nlohmann::json{
            {"pair", c.pair},
            {"summary", {{"min", c.min}, {"q1", c.q1}, {"median", c.median},
                         {"mean", c.mean}, {"q3", c.q3}, {"max", c.max}}},
            {"wilcoxon_p", c.wilcoxon_p},
            {"warnings", c.warnings}});
    }
    return j.dump(2) + "\n";
}

std::string EvalReport::rows_csv() const {
    std::ostringstream os;
    os << "method,mean_inefficiency,sd_inefficiency,mean_tau,sd_tau,mean_eta,sd_eta\n";
    os.precision(17);
    for (const auto& row : rows) {
        os << row.method << ',' << row.mean_inefficiency << ',' << row.sd_inefficiency << ',';
        if (std::isfinite(row.mean_tau)) {
            os << row.mean_tau;
        } else {
            os << "inf";
        }
        os << ',' << row.sd_tau << ',';
        if (row.mean_eta) os << *row.mean_eta;
        os << ',';
        if (row.sd_eta) os << *row.sd_eta;
        os << '\n';
    }
    return os.str();
}

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
      line_number(line) {}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // Trim surrounding whitespace.
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_number(const std::string& path, std::size_t line, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(path, line, "not a number: '" + field + "'");
    }
}

} // namespace

NewsvendorItems read_newsvendor_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;
    NewsvendorItems items;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (lineno == 1) {
            if (fields.size() != 2 || fields[0] != "theta" || fields[1] != "price") {
                throw ParseError(path, lineno, "expected header 'theta,price'");
            }
            continue;
        }
        if (fields.size() != 2) throw ParseError(path, lineno, "expected 2 columns");
        items.theta.push_back(parse_number(path, lineno, fields[0]));
        items.price.push_back(parse_number(path, lineno, fields[1]));
    }
    if (items.theta.empty()) throw ParseError(path, lineno, "no data rows");
    return items;
}

CsvData read_instance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;
    bool with_theta = false;
    CsvData data;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (lineno == 1) {
            if (fields.size() == 6 && fields[5] == "theta") {
                with_theta = true;
            } else if (fields.size() != 5) {
                throw ParseError(path, lineno,
                                 "expected header 'x,sigma_p,sigma_f,b,h[,theta]'");
            }
            const char* want[] = {"x", "sigma_p", "sigma_f", "b", "h"};
            for (std::size_t i = 0; i < 5; ++i) {
                if (fields[i] != want[i]) {
                    throw ParseError(path, lineno,
                                     "expected header 'x,sigma_p,sigma_f,b,h[,theta]'");
                }
            }
            if (with_theta) data.truth.emplace();
            continue;
        }
        const std::size_t expect = with_theta ? 6 : 5;
        if (fields.size() != expect) {
            throw ParseError(path, lineno,
                             "expected " + std::to_string(expect) + " columns");
        }
        data.inst.x.push_back(parse_number(path, lineno, fields[0]));
        data.inst.sigma_p.push_back(parse_number(path, lineno, fields[1]));
        data.inst.sigma_f.push_back(parse_number(path, lineno, fields[2]));
        data.inst.b.push_back(parse_number(path, lineno, fields[3]));
        data.inst.h.push_back(parse_number(path, lineno, fields[4]));
        if (with_theta) data.truth->theta.push_back(parse_number(path, lineno, fields[5]));
    }
    if (data.inst.x.empty()) throw ParseError(path, lineno, "no data rows");
    data.inst.validate();
    return data;
}

} // namespace checkshrink
