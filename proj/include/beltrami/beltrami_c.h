#ifndef BELTRAMI_C_H
#define BELTRAMI_C_H

#include <stddef.h>

#if defined(_WIN32)
#define BW_API __declspec(dllexport)
#else
#define BW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  BW_OK = 0,
  BW_INVALID_ARGUMENT = 1,
  BW_UNKNOWN_ID = 2,
  BW_DOMAIN_ERROR = 3,
  BW_NOT_CONVERGED = 4,
  BW_IO_ERROR = 5,
  BW_INTERNAL = 6
} bw_status;

typedef struct bw_domain bw_domain;
typedef struct bw_mu bw_mu;
typedef struct bw_qcmap bw_qcmap;
typedef struct bw_solution bw_solution;

BW_API const char* bw_version(void);
/* Message of the last failing call on this thread; "" when none. */
BW_API const char* bw_last_error(void);
BW_API void bw_free_string(char* s);

/* Domains: "disk", "slit-disk", "annulus" (params: rho), "jordan-polyline"
   (params: x0,y0,x1,y1,...), "plane". */
BW_API bw_status bw_domain_create(const char* id, const double* params, size_t n_params, bw_domain** out);
BW_API void bw_domain_free(bw_domain* d);
BW_API bw_status bw_domain_contains(const bw_domain* d, double x, double y, int* inside);
/* Point psi(radius * e^{i angle}) of the reference chart. */
BW_API bw_status bw_domain_point(const bw_domain* d, double angle, double radius, double* x, double* y);

/* Beltrami coefficient sampled on an n x n grid over the domain box. */
BW_API bw_status bw_mu_create(const bw_domain* d, const char* profile, const double* params, size_t n_params, int n,
                              double truncation, bw_mu** out);
BW_API void bw_mu_free(bw_mu* m);
BW_API bw_status bw_mu_eval(const bw_mu* m, double x, double y, double* re, double* im);
BW_API bw_status bw_mu_sup_norm(const bw_mu* m, double* out);

/* Principal solution F = z + C(omega). BW_NOT_CONVERGED still returns a map. */
BW_API bw_status bw_qcmap_solve(const bw_mu* m, double tol, double truncation, int max_iter, bw_qcmap** out);
BW_API void bw_qcmap_free(bw_qcmap* f);
BW_API bw_status bw_qcmap_eval(const bw_qcmap* f, double x, double y, double* re, double* im);
BW_API bw_status bw_qcmap_inverse(const bw_qcmap* f, double u, double v, double* x, double* y);
/* Any output pointer may be NULL. */
BW_API bw_status bw_qcmap_info(const bw_qcmap* f, int* iterations, int* converged, double* contraction,
                               double* residual);

/* Regular Dirichlet problem on a simply connected domain; phi uses the CLI syntax
   ("cos", "fourier:a0,a1,b1", "jump:0.2", "csv:path", ...). */
BW_API bw_status bw_solve(const bw_domain* d, const bw_mu* m, const char* phi, int samples, double tol,
                          bw_solution** out);
BW_API void bw_solution_free(bw_solution* s);
BW_API bw_status bw_solution_eval(const bw_solution* s, double x, double y, double* re, double* im);
BW_API bw_status bw_solution_info(const bw_solution* s, int* converged, double* composite_residual);

/* Runs one subcommand from a JSON config (key "command" selects it). On return
   *manifest_json (if non-NULL) holds the manifest or an error object; release it
   with bw_free_string. */
BW_API bw_status bw_run(const char* config_json, char** manifest_json);

#ifdef __cplusplus
}
#endif

#endif
