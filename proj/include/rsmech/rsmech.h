/* C interface to the robust mechanism library. */
#ifndef RSMECH_H
#define RSMECH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RSM_BUILDING)
#    define RSM_API __declspec(dllexport)
#  else
#    define RSM_API __declspec(dllimport)
#  endif
#else
#  define RSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsm_status {
  RSM_OK = 0,
  RSM_INVALID_ARGUMENT = 1,
  RSM_DOMAIN = 2,
  RSM_INFEASIBLE = 3,
  RSM_RADIUS_TOO_LARGE = 4,
  RSM_UNSUPPORTED = 5,
  RSM_DEGENERATE = 6,
  RSM_PARSE = 7,
  RSM_INTERNAL = 99
} rsm_status;

typedef struct rsm_distribution rsm_distribution;
typedef struct rsm_mechanism rsm_mechanism;

typedef struct rsm_options {
  double tol_root;      /* relative bracket width of the bisections */
  double tol_residual;  /* accepted |f - target| */
  double tol_quad;      /* absolute quadrature tolerance */
  uint64_t seed;
  size_t mc_samples;    /* 0 selects quadrature */
  size_t table_points;  /* rows of sampled mechanism tables */
  unsigned threads;     /* sweep workers */
} rsm_options;

typedef enum rsm_eval_method { RSM_QUADRATURE = 0, RSM_MONTE_CARLO = 1 } rsm_eval_method;

/* Library defaults: 1e-12, 1e-10, 1e-10, seed 42, quadrature, 101 rows, 1 thread. */
RSM_API void rsm_options_init(rsm_options* opts);

RSM_API const char* rsm_version(void);
/* Message of the last failure on the calling thread; empty if none. */
RSM_API const char* rsm_last_error(void);
/* Requested target and Pi0 of the last RSM_INFEASIBLE on this thread. */
RSM_API void rsm_last_infeasible(double* requested, double* ceiling);
/* Frees strings returned through char** out-parameters. */
RSM_API void rsm_string_free(char* s);

/* Distributions. `json` is a distribution object such as {"kind":"uniform"}. */
RSM_API rsm_status rsm_distribution_from_json(const char* json, rsm_distribution** out);
RSM_API void rsm_distribution_free(rsm_distribution* d);
RSM_API rsm_status rsm_distribution_to_json(const rsm_distribution* d, char** out_json);
RSM_API rsm_status rsm_ccdf(const rsm_distribution* d, double x, double* out);
RSM_API rsm_status rsm_ccdf_left(const rsm_distribution* d, double x, double* out);
RSM_API rsm_status rsm_mean(const rsm_distribution* d, double* out);
RSM_API rsm_status rsm_revenue(const rsm_distribution* d, double p, double* out);
RSM_API rsm_status rsm_max_posted_revenue(const rsm_distribution* d, double* out_pi0,
                                          double* out_price);
RSM_API rsm_status rsm_wasserstein(const rsm_distribution* p, const rsm_distribution* q,
                                   double* out);

/* Iso-revenue cut. */
RSM_API rsm_status rsm_gap(const rsm_distribution* d, double pi, double* out);
RSM_API rsm_status rsm_cut_json(const rsm_distribution* d, double pi, char** out_json);

/* Solvers. `opts` may be NULL for defaults; `out_mech` and `out_json` may be NULL. */
RSM_API rsm_status rsm_solve_rs(const rsm_distribution* ref, double tau, const rsm_options* opts,
                                rsm_mechanism** out_mech, char** out_json);
RSM_API rsm_status rsm_solve_pp(const rsm_distribution* ref, double tau, const rsm_options* opts,
                                rsm_mechanism** out_mech, char** out_json);
RSM_API rsm_status rsm_solve_ro(const rsm_distribution* ref, double r, const rsm_options* opts,
                                rsm_mechanism** out_mech, char** out_json);
RSM_API rsm_status rsm_tau_equiv(const rsm_distribution* ref, double r, const rsm_options* opts,
                                 double* out_tau, char** out_json);
RSM_API rsm_status rsm_radius_for_target(const rsm_distribution* ref, double tau,
                                         const rsm_options* opts, double* out_r);

/* Mechanisms. */
RSM_API void rsm_mechanism_free(rsm_mechanism* m);
RSM_API rsm_status rsm_mechanism_eval(const rsm_mechanism* m, double v, double* q, double* pay,
                                      double* surplus);
RSM_API rsm_status rsm_mechanism_table_csv(const rsm_mechanism* m, size_t points, char** out_csv);
RSM_API rsm_status rsm_expected_revenue(const rsm_mechanism* m, const rsm_distribution* truth,
                                        rsm_eval_method method, const rsm_options* opts,
                                        double* out_revenue, double* out_stderr);

/* Reports. `truth` may be NULL for compare. */
RSM_API rsm_status rsm_compare_json(const rsm_distribution* ref, double tau,
                                    const rsm_distribution* truth, const rsm_options* opts,
                                    char** out_json);
RSM_API rsm_status rsm_evaluate_json(const rsm_distribution* ref, double tau,
                                     const rsm_distribution* truth, const rsm_options* opts,
                                     char** out_json);
/* `config_json` holds optional alphas, betas, tau_over_pi0, include_pp, threads, mc_samples, seed. */
RSM_API rsm_status rsm_sweep(const char* config_json, const rsm_options* opts, char** out_json,
                             char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* RSMECH_H */
