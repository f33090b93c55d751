/*
 * C API for the checkshrink shared library.
 *
 * All entry points return a cs_status code; rich results come back as
 * opaque cs_result text buffers (JSON or CSV) that the caller must free
 * with cs_result_destroy. On failure, cs_last_error() returns a
 * thread-local human-readable message for the most recent failing call.
 */
#ifndef CHECKSHRINK_H
#define CHECKSHRINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define CS_API __declspec(dllexport)
#else
#  define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
    CS_OK = 0,
    CS_ERR_INVALID_ARGUMENT = 1,
    CS_ERR_PARSE = 2,
    CS_ERR_NUMERIC = 3,
    CS_ERR_INTERNAL = 4
} cs_status;

typedef struct cs_problem_s cs_problem; /* opaque estimation input */
typedef struct cs_result_s cs_result;   /* opaque text buffer */

CS_API const char* cs_version(void);
CS_API const char* cs_last_error(void);

/* ---- problem handles ------------------------------------------------- */

/* Arrays are copied; all five must have length n. */
CS_API cs_status cs_problem_create(size_t n, const double* x, const double* sigma_p,
                                   const double* sigma_f, const double* b,
                                   const double* h, cs_problem** out);

/* CSV with header x,sigma_p,sigma_f,b,h[,theta]. */
CS_API cs_status cs_problem_from_csv(const char* path, cs_problem** out);

CS_API size_t cs_problem_size(const cs_problem* p);
CS_API void cs_problem_destroy(cs_problem* p);

/* ---- result buffers --------------------------------------------------- */

CS_API const char* cs_result_str(const cs_result* r);
CS_API size_t cs_result_len(const cs_result* r);
CS_API void cs_result_destroy(cs_result* r);

/* ---- estimation ------------------------------------------------------- */

typedef struct cs_estimate_opts {
    const char* method;       /* "are" | "ebml" | "ebmm" */
    const char* shrink_class; /* "origin" | "grandmean" | "datadriven" */
    uint64_t seed;
    int rb_reps;              /* Rao-Blackwell replications (default 5) */
    double rho;               /* fraction of the threshold-slope bound (default 0.5) */
    long grid_min_points;     /* 0 = spacing from the instance constants */
} cs_estimate_opts;

CS_API void cs_estimate_opts_default(cs_estimate_opts* opts);

/* JSON: method, class, tau_hat, eta_hat, objective, q_hat[], warnings[]. */
CS_API cs_status cs_estimate_run(const cs_problem* p, const cs_estimate_opts* opts,
                                 cs_result** out);

/* ---- simulation scenarios --------------------------------------------- */

typedef struct cs_simulate_opts {
    const char* scenario; /* "example1" | "example2" | "example3" */
    size_t n;
    int reps;
    uint64_t seed;
    double sigma_ratio;   /* example2 */
    int case_id;          /* example3: 1..6 */
    int rb_reps;
    double rho;
    long grid_min_points;
    const char* methods;  /* comma list; NULL = scenario default */
} cs_simulate_opts;

CS_API void cs_simulate_opts_default(cs_simulate_opts* opts);

/* JSON report: scenario, rows[] (per-method inefficiency summaries). */
CS_API cs_status cs_simulate_run(const cs_simulate_opts* opts, cs_result** out);

/* ---- curves ------------------------------------------------------------ */

typedef struct cs_risk_curve_opts {
    double theta;
    double sigma_p;
    double sigma_f;
    double b;
    double h;
    size_t resolution;
} cs_risk_curve_opts;

CS_API void cs_risk_curve_opts_default(cs_risk_curve_opts* opts);

/* CSV "alpha,risk": closed-form single-coordinate risk curve. */
CS_API cs_status cs_risk_curve_run(const cs_risk_curve_opts* opts, cs_result** out);

/* CSV "tau,are_value": risk-estimate curve over the instance's grid. */
CS_API cs_status cs_are_curve_run(const cs_problem* p, const cs_estimate_opts* opts,
                                  cs_result** out);

/* ---- newsvendor study -------------------------------------------------- */

typedef struct cs_newsvendor_opts {
    const char* input_csv; /* header theta,price; NULL = synthetic items */
    size_t n;              /* synthetic item count */
    int reps;
    uint64_t seed;
    double markup;
    double capital_rate;
    double demand_sigma;   /* demand noise variance; required, no default */
    double highvol_flat;   /* extra cost weight on high-volume items */
    int rb_reps;
    double rho;
} cs_newsvendor_opts;

CS_API void cs_newsvendor_opts_default(cs_newsvendor_opts* opts);

/* JSON report with realized-loss rows and pairwise efficiency comparisons. */
CS_API cs_status cs_newsvendor_run(const cs_newsvendor_opts* opts, cs_result** out);

#ifdef __cplusplus
}
#endif

#endif /* CHECKSHRINK_H */
