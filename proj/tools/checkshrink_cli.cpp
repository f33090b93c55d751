// Command-line front end. Talks to the core exclusively through the C API in
// checkshrink.h; reports are written atomically (temp file + rename).
//
// Exit codes: 0 success, 1 usage error, 2 data/numeric error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "checkshrink.h"

namespace {

int status_exit_code(cs_status s) {
    switch (s) {
        case CS_OK: return 0;
        case CS_ERR_INVALID_ARGUMENT: return 1;
        default: return 2;
    }
}

int write_output(const std::string& path, const char* text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot open '" << tmp << "' for writing\n";
            return 2;
        }
        out << text;
        if (!out.flush()) {
            std::cerr << "error: short write to '" << tmp << "'\n";
            std::remove(tmp.c_str());
            return 2;
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::cerr << "error: cannot rename '" << tmp << "' to '" << path << "'\n";
        std::remove(tmp.c_str());
        return 2;
    }
    return 0;
}

int finish(cs_status status, cs_result* result, const std::string& output) {
    if (status != CS_OK) {
        std::cerr << "error: " << cs_last_error() << "\n";
        return status_exit_code(status);
    }
    const int rc = write_output(output, cs_result_str(result));
    cs_result_destroy(result);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical Bayes shrinkage prediction under asymmetric check loss"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cs_version()));

    std::string output = "-";
    app.add_option("--output,-o", output, "Output path ('-' = stdout)")->capture_default_str();

    // estimate ------------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "Select hyperparameters and predict on CSV data");
    std::string est_input, est_method = "are", est_class = "origin";
    std::uint64_t est_seed = 0;
    int est_rb = 5;
    double est_rho = 0.5;
    long est_grid = 0;
    est->add_option("--input,-i", est_input, "CSV with header x,sigma_p,sigma_f,b,h[,theta]")
        ->required();
    est->add_option("--method", est_method, "are | ebml | ebmm")->capture_default_str();
    est->add_option("--class", est_class, "origin | grandmean | datadriven")
        ->capture_default_str();
    est->add_option("--seed", est_seed, "RNG seed")->capture_default_str();
    est->add_option("--rb-reps", est_rb, "Rao-Blackwell replications")->capture_default_str();
    est->add_option("--rho", est_rho, "Fraction of the threshold-slope bound")
        ->capture_default_str();
    est->add_option("--grid-size", est_grid, "Minimum grid points (0 = automatic)")
        ->capture_default_str();

    // simulate ------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Run a reproducible simulation scenario");
    std::string sim_scenario, sim_methods;
    std::size_t sim_n = 100;
    int sim_reps = 50, sim_case = 1, sim_rb = 5;
    std::uint64_t sim_seed = 0;
    double sim_ratio = 1.0 / 3.0, sim_rho = 0.5;
    long sim_grid = 0;
    sim->add_option("scenario", sim_scenario, "example1 | example2 | example3")->required();
    sim->add_option("--n", sim_n, "Problem dimension")->capture_default_str();
    sim->add_option("--reps", sim_reps, "Independent replications")->capture_default_str();
    sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sim->add_option("--sigma-ratio", sim_ratio, "Past/future variance ratio (example2)")
        ->capture_default_str();
    sim->add_option("--case", sim_case, "Heteroscedastic case 1..6 (example3)")
        ->capture_default_str();
    sim->add_option("--rb-reps", sim_rb, "Rao-Blackwell replications")->capture_default_str();
    sim->add_option("--rho", sim_rho, "Fraction of the threshold-slope bound")
        ->capture_default_str();
    sim->add_option("--grid-size", sim_grid, "Minimum grid points (0 = automatic)")
        ->capture_default_str();
    sim->add_option("--methods", sim_methods,
                    "Comma list (ARE, ARE^G, ARE^D, EBML, EBMM, OracleRisk, OracleLoss, "
                    "Unshrunken); empty = scenario default");

    // risk-curve ----------------------------------------------------------
    auto* rc = app.add_subcommand("risk-curve", "Closed-form risk curve for one coordinate");
    cs_risk_curve_opts rc_opts;
    cs_risk_curve_opts_default(&rc_opts);
    double rc_theta = 0.0, rc_sp = 1.0 / 3.0, rc_sf = 1.0, rc_b = 0.5, rc_h = -1.0;
    std::size_t rc_res = 200;
    rc->add_option("--theta", rc_theta, "True mean")->required();
    rc->add_option("--b", rc_b, "Underestimation weight")->required();
    rc->add_option("--h", rc_h, "Overestimation weight (default 1-b)");
    rc->add_option("--sigma-p", rc_sp, "Past variance")->capture_default_str();
    rc->add_option("--sigma-f", rc_sf, "Future variance")->capture_default_str();
    rc->add_option("--resolution", rc_res, "Points on the shrinkage-factor axis")
        ->capture_default_str();

    // are-curve -----------------------------------------------------------
    auto* ac = app.add_subcommand("are-curve", "Risk-estimate curve over the search grid");
    std::string ac_input, ac_class = "origin";
    std::uint64_t ac_seed = 0;
    int ac_rb = 5;
    double ac_rho = 0.5;
    long ac_grid = 0;
    ac->add_option("--input,-i", ac_input, "CSV with header x,sigma_p,sigma_f,b,h[,theta]")
        ->required();
    ac->add_option("--class", ac_class, "origin | grandmean | datadriven")
        ->capture_default_str();
    ac->add_option("--seed", ac_seed, "RNG seed")->capture_default_str();
    ac->add_option("--rb-reps", ac_rb, "Rao-Blackwell replications")->capture_default_str();
    ac->add_option("--rho", ac_rho, "Fraction of the threshold-slope bound")
        ->capture_default_str();
    ac->add_option("--grid-size", ac_grid, "Minimum grid points (0 = automatic)")
        ->capture_default_str();

    // newsvendor ----------------------------------------------------------
    auto* nv = app.add_subcommand("newsvendor", "Stocking study on item demand data");
    std::string nv_input;
    std::size_t nv_n = 200;
    int nv_reps = 50, nv_rb = 5;
    std::uint64_t nv_seed = 0;
    double nv_markup = 0.15, nv_capital = 0.15, nv_sigma = 0.0, nv_flat = 0.0, nv_rho = 0.5;
    nv->add_option("--input,-i", nv_input, "CSV with header theta,price (default: synthetic)");
    nv->add_option("--n", nv_n, "Synthetic item count")->capture_default_str();
    nv->add_option("--reps", nv_reps, "Independent replications")->capture_default_str();
    nv->add_option("--seed", nv_seed, "RNG seed")->capture_default_str();
    nv->add_option("--markup", nv_markup, "Uniform markup")->capture_default_str();
    nv->add_option("--capital-rate", nv_capital, "Annual cost of capital")
        ->capture_default_str();
    nv->add_option("--sigma", nv_sigma, "Demand noise variance (required)")->required();
    nv->add_option("--highvol-flat", nv_flat, "Flat cost added to b for high-volume items")
        ->capture_default_str();
    nv->add_option("--rb-reps", nv_rb, "Rao-Blackwell replications")->capture_default_str();
    nv->add_option("--rho", nv_rho, "Fraction of the threshold-slope bound")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    cs_result* result = nullptr;

    if (est->parsed()) {
        cs_problem* problem = nullptr;
        cs_status s = cs_problem_from_csv(est_input.c_str(), &problem);
        if (s != CS_OK) {
            std::cerr << "error: " << cs_last_error() << "\n";
            return status_exit_code(s);
        }
        cs_estimate_opts opts;
        cs_estimate_opts_default(&opts);
        opts.method = est_method.c_str();
        opts.shrink_class = est_class.c_str();
        opts.seed = est_seed;
        opts.rb_reps = est_rb;
        opts.rho = est_rho;
        opts.grid_min_points = est_grid;
        s = cs_estimate_run(problem, &opts, &result);
        cs_problem_destroy(problem);
        return finish(s, result, output);
    }

    if (sim->parsed()) {
        cs_simulate_opts opts;
        cs_simulate_opts_default(&opts);
        opts.scenario = sim_scenario.c_str();
        opts.n = sim_n;
        opts.reps = sim_reps;
        opts.seed = sim_seed;
        opts.sigma_ratio = sim_ratio;
        opts.case_id = sim_case;
        opts.rb_reps = sim_rb;
        opts.rho = sim_rho;
        opts.grid_min_points = sim_grid;
        opts.methods = sim_methods.empty() ? nullptr : sim_methods.c_str();
        const cs_status s = cs_simulate_run(&opts, &result);
        return finish(s, result, output);
    }

    if (rc->parsed()) {
        rc_opts.theta = rc_theta;
        rc_opts.sigma_p = rc_sp;
        rc_opts.sigma_f = rc_sf;
        rc_opts.b = rc_b;
        rc_opts.h = rc_h > 0.0 ? rc_h : 1.0 - rc_b;
        rc_opts.resolution = rc_res;
        const cs_status s = cs_risk_curve_run(&rc_opts, &result);
        return finish(s, result, output);
    }

    if (ac->parsed()) {
        cs_problem* problem = nullptr;
        cs_status s = cs_problem_from_csv(ac_input.c_str(), &problem);
        if (s != CS_OK) {
            std::cerr << "error: " << cs_last_error() << "\n";
            return status_exit_code(s);
        }
        cs_estimate_opts opts;
        cs_estimate_opts_default(&opts);
        opts.shrink_class = ac_class.c_str();
        opts.seed = ac_seed;
        opts.rb_reps = ac_rb;
        opts.rho = ac_rho;
        opts.grid_min_points = ac_grid;
        s = cs_are_curve_run(problem, &opts, &result);
        cs_problem_destroy(problem);
        return finish(s, result, output);
    }

    if (nv->parsed()) {
        cs_newsvendor_opts opts;
        cs_newsvendor_opts_default(&opts);
        opts.input_csv = nv_input.empty() ? nullptr : nv_input.c_str();
        opts.n = nv_n;
        opts.reps = nv_reps;
        opts.seed = nv_seed;
        opts.markup = nv_markup;
        opts.capital_rate = nv_capital;
        opts.demand_sigma = nv_sigma;
        opts.highvol_flat = nv_flat;
        opts.rb_reps = nv_rb;
        opts.rho = nv_rho;
        const cs_status s = cs_newsvendor_run(&opts, &result);
        return finish(s, result, output);
    }

    return 1;
}
