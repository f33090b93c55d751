#include "checkshrink.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "checkshrink/are.hpp"
#include "checkshrink/check_loss.hpp"
#include "checkshrink/competitors.hpp"
#include "checkshrink/experiments.hpp"
#include "checkshrink/grids.hpp"

using namespace checkshrink;

struct cs_problem_s {
    ProblemInstance inst;
};

struct cs_result_s {
    std::string text;
};

namespace {

thread_local std::string g_last_error;

cs_status fail(cs_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename F>
cs_status guarded(F&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        return fail(CS_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(CS_ERR_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CS_ERR_INTERNAL, e.what());
    }
}

cs_status make_result(std::string text, cs_result** out) {
    *out = new cs_result_s{std::move(text)};
    return CS_OK;
}

ShrinkageClass parse_class(const char* name) {
    const std::string s = name == nullptr ? "origin" : name;
    if (s == "origin") return ShrinkageClass::Origin;
    if (s == "grandmean") return ShrinkageClass::GrandMean;
    if (s == "datadriven") return ShrinkageClass::DataDriven;
    throw std::invalid_argument("unknown shrinkage class: " + s);
}

} // namespace

extern "C" {

const char* cs_version(void) { return "0.1.0"; }

const char* cs_last_error(void) { return g_last_error.c_str(); }

cs_status cs_problem_create(size_t n, const double* x, const double* sigma_p,
                            const double* sigma_f, const double* b, const double* h,
                            cs_problem** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (n == 0 || x == nullptr || sigma_p == nullptr || sigma_f == nullptr ||
        b == nullptr || h == nullptr) {
        return fail(CS_ERR_INVALID_ARGUMENT, "cs_problem_create: null array or n == 0");
    }
    return guarded([&] {
        auto p = std::make_unique<cs_problem_s>();
        p->inst.x.assign(x, x + n);
        p->inst.sigma_p.assign(sigma_p, sigma_p + n);
        p->inst.sigma_f.assign(sigma_f, sigma_f + n);
        p->inst.b.assign(b, b + n);
        p->inst.h.assign(h, h + n);
        p->inst.validate();
        *out = p.release();
        return CS_OK;
    });
}

cs_status cs_problem_from_csv(const char* path, cs_problem** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (path == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "path is null");
    return guarded([&] {
        CsvData data = read_instance_csv(path);
        auto p = std::make_unique<cs_problem_s>();
        p->inst = std::move(data.inst);
        *out = p.release();
        return CS_OK;
    });
}

size_t cs_problem_size(const cs_problem* p) { return p == nullptr ? 0 : p->inst.size(); }

void cs_problem_destroy(cs_problem* p) { delete p; }

const char* cs_result_str(const cs_result* r) { return r == nullptr ? "" : r->text.c_str(); }

size_t cs_result_len(const cs_result* r) { return r == nullptr ? 0 : r->text.size(); }

void cs_result_destroy(cs_result* r) { delete r; }

void cs_estimate_opts_default(cs_estimate_opts* opts) {
    if (opts == nullptr) return;
    opts->method = "are";
    opts->shrink_class = "origin";
    opts->seed = 0;
    opts->rb_reps = 5;
    opts->rho = 0.5;
    opts->grid_min_points = 0;
}

cs_status cs_estimate_run(const cs_problem* p, const cs_estimate_opts* opts,
                          cs_result** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (p == nullptr || opts == nullptr) {
        return fail(CS_ERR_INVALID_ARGUMENT, "null problem or options");
    }
    return guarded([&] {
        const ProblemInstance& inst = p->inst;
        const ShrinkageClass cls = parse_class(opts->shrink_class);
        const std::string method = opts->method == nullptr ? "are" : opts->method;

        SelectionResult sel;
        if (method == "are") {
            const AreTuning tuning =
                make_tuning(inst, opts->rho, opts->rb_reps, RngSeed{opts->seed, 0});
            const std::size_t min_pts =
                opts->grid_min_points > 0 ? static_cast<std::size_t>(opts->grid_min_points) : 0;
            const Grid grid = cls == ShrinkageClass::DataDriven
                                  ? build_grid_datadriven(inst, inst.size(), min_pts)
                                  : build_grid_origin(inst, inst.size(), min_pts);
            sel = are_select(inst, cls, grid, tuning);
        } else if (method == "ebml") {
            sel = cls == ShrinkageClass::DataDriven ? ebml_datadriven(inst) : ebml_origin(inst);
            sel.hp.class_tag = cls;
        } else if (method == "ebmm") {
            sel = cls == ShrinkageClass::DataDriven ? ebmm_datadriven(inst) : ebmm_origin(inst);
            sel.hp.class_tag = cls;
        } else {
            throw std::invalid_argument("unknown method: " + method);
        }

        const std::vector<double> q = predict_class(inst, sel.hp);
        nlohmann::json j;
        j["method"] = method;
        j["class"] = opts->shrink_class == nullptr ? "origin" : opts->shrink_class;
        if (std::isfinite(sel.hp.tau)) {
            j["tau_hat"] = sel.hp.tau;
        } else {
            j["tau_hat"] = "inf";
        }
        j["eta_hat"] = sel.hp.eta;
        j["objective"] = sel.objective_value;
        j["q_hat"] = q;
        j["warnings"] = sel.warnings;
        return make_result(j.dump(2) + "\n", out);
    });
}

void cs_simulate_opts_default(cs_simulate_opts* opts) {
    if (opts == nullptr) return;
    opts->scenario = "example1";
    opts->n = 100;
    opts->reps = 50;
    opts->seed = 0;
    opts->sigma_ratio = 1.0 / 3.0;
    opts->case_id = 1;
    opts->rb_reps = 5;
    opts->rho = 0.5;
    opts->grid_min_points = 0;
    opts->methods = nullptr;
}

cs_status cs_simulate_run(const cs_simulate_opts* opts, cs_result** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (opts == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "null options");
    return guarded([&] {
        ScenarioSpec spec;
        const std::string name = opts->scenario == nullptr ? "example1" : opts->scenario;
        if (name == "example1") {
            spec.name = Scenario::Example1;
        } else if (name == "example2") {
            spec.name = Scenario::Example2;
        } else if (name == "example3") {
            spec.name = Scenario::Example3;
        } else {
            throw std::invalid_argument("unknown scenario: " + name);
        }
        spec.n = opts->n;
        spec.reps = opts->reps;
        spec.seed = RngSeed{opts->seed, 0};
        spec.sigma_ratio = opts->sigma_ratio;
        spec.case_id = opts->case_id;
        spec.rb_reps = opts->rb_reps;
        spec.rho = opts->rho;
        spec.grid_min_points =
            opts->grid_min_points > 0 ? static_cast<std::size_t>(opts->grid_min_points) : 0;

        std::vector<std::string> methods;
        if (opts->methods != nullptr && std::strlen(opts->methods) > 0) {
            std::stringstream ss(opts->methods);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) methods.push_back(item);
            }
        } else if (spec.name == Scenario::Example3) {
            methods = {"ARE^G", "OracleRisk"};
        } else {
            methods = {"ARE", "EBML", "EBMM", "OracleRisk"};
        }

        const EvalReport report = run_scenario(spec, methods);
        return make_result(report.to_json(), out);
    });
}

void cs_risk_curve_opts_default(cs_risk_curve_opts* opts) {
    if (opts == nullptr) return;
    opts->theta = 0.0;
    opts->sigma_p = 1.0 / 3.0;
    opts->sigma_f = 1.0;
    opts->b = 0.5;
    opts->h = 0.5;
    opts->resolution = 200;
}

cs_status cs_risk_curve_run(const cs_risk_curve_opts* opts, cs_result** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (opts == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "null options");
    return guarded([&] {
        TruthInstance truth{{opts->theta}};
        ProblemInstance inst;
        inst.x = {opts->theta};
        inst.sigma_p = {opts->sigma_p};
        inst.sigma_f = {opts->sigma_f};
        inst.b = {opts->b};
        inst.h = {opts->h};
        inst.validate();
        const auto curve = risk_curve(truth, inst, ShrinkageClass::Origin, opts->resolution);
        std::ostringstream os;
        os.precision(17);
        os << "alpha,risk\n";
        for (const auto& [alpha, risk] : curve) os << alpha << ',' << risk << '\n';
        return make_result(os.str(), out);
    });
}

cs_status cs_are_curve_run(const cs_problem* p, const cs_estimate_opts* opts,
                           cs_result** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (p == nullptr || opts == nullptr) {
        return fail(CS_ERR_INVALID_ARGUMENT, "null problem or options");
    }
    return guarded([&] {
        const ProblemInstance& inst = p->inst;
        const ShrinkageClass cls = parse_class(opts->shrink_class);
        const AreTuning tuning =
            make_tuning(inst, opts->rho, opts->rb_reps, RngSeed{opts->seed, 0});
        const std::size_t min_pts =
            opts->grid_min_points > 0 ? static_cast<std::size_t>(opts->grid_min_points) : 0;
        const Grid grid = cls == ShrinkageClass::DataDriven
                              ? build_grid_datadriven(inst, inst.size(), min_pts)
                              : build_grid_origin(inst, inst.size(), min_pts);
        const auto curve = are_curve(inst, cls, grid, tuning);
        std::ostringstream os;
        os.precision(17);
        os << "tau,are_value\n";
        for (const auto& [tau, v] : curve) {
            if (std::isfinite(tau)) {
                os << tau;
            } else {
                os << "inf";
            }
            os << ',' << v << '\n';
        }
        return make_result(os.str(), out);
    });
}

void cs_newsvendor_opts_default(cs_newsvendor_opts* opts) {
    if (opts == nullptr) return;
    opts->input_csv = nullptr;
    opts->n = 200;
    opts->reps = 50;
    opts->seed = 0;
    opts->markup = 0.15;
    opts->capital_rate = 0.15;
    opts->demand_sigma = 0.0;
    opts->highvol_flat = 0.0;
    opts->rb_reps = 5;
    opts->rho = 0.5;
}

cs_status cs_newsvendor_run(const cs_newsvendor_opts* opts, cs_result** out) {
    if (out == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (opts == nullptr) return fail(CS_ERR_INVALID_ARGUMENT, "null options");
    return guarded([&] {
        ScenarioSpec spec;
        spec.name = Scenario::Newsvendor;
        spec.n = opts->n;
        spec.reps = opts->reps;
        spec.seed = RngSeed{opts->seed, 0};
        spec.markup = opts->markup;
        spec.capital_rate = opts->capital_rate;
        spec.demand_sigma = opts->demand_sigma;
        spec.highvol_flat = opts->highvol_flat;
        spec.rb_reps = opts->rb_reps;
        spec.rho = opts->rho;
        if (opts->input_csv != nullptr) spec.input_csv = opts->input_csv;
        const EvalReport report = newsvendor_run(spec);
        return make_result(report.to_json(), out);
    });
}

} // extern "C"
