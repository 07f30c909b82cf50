#include "beltrami/beltrami_c.h"

#include <cstring>
#include <string>

#include "beltrami/geometry.hpp"
#include "beltrami/pipeline.hpp"
#include "beltrami/runner.hpp"
#include "beltrami/solver.hpp"
#include "beltrami/version.hpp"

using namespace beltrami;

struct bw_domain {
  std::shared_ptr<const PrimeEndChart> chart;
};
struct bw_mu {
  std::shared_ptr<const PrimeEndChart> chart;
  MuField field;
};
struct bw_qcmap {
  QcMap map;
};
struct bw_solution {
  RegularSolution sol;
};

namespace {

thread_local std::string last_error;

bw_status fail(bw_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
bw_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    return fail(static_cast<bw_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BW_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BW_INTERNAL, e.what());
  }
}

#define BW_REQUIRE(cond, what) \
  if (!(cond)) return fail(BW_INVALID_ARGUMENT, what)

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* bw_version(void) { return kVersion; }
const char* bw_last_error(void) { return last_error.c_str(); }
void bw_free_string(char* s) { std::free(s); }

bw_status bw_domain_create(const char* id, const double* params, size_t n_params, bw_domain** out) {
  BW_REQUIRE(id && out, "id and out must be non-null");
  BW_REQUIRE(n_params == 0 || params, "params is null");
  *out = nullptr;
  return guarded([&] {
    auto chart = catalog_domain(id, std::span<const double>(params, n_params));
    *out = new bw_domain{std::move(chart)};
    return BW_OK;
  });
}

void bw_domain_free(bw_domain* d) { delete d; }

bw_status bw_domain_contains(const bw_domain* d, double x, double y, int* inside) {
  BW_REQUIRE(d && inside, "null argument");
  return guarded([&] {
    *inside = d->chart->domain().contains({x, y}) ? 1 : 0;
    return BW_OK;
  });
}

bw_status bw_domain_point(const bw_domain* d, double angle, double radius, double* x, double* y) {
  BW_REQUIRE(d && x && y, "null argument");
  BW_REQUIRE(radius >= 0.0 && radius <= 1.0, "radius must lie in [0, 1]");
  return guarded([&] {
    cplx z = d->chart->point(angle, radius);
    *x = z.real();
    *y = z.imag();
    return BW_OK;
  });
}

bw_status bw_mu_create(const bw_domain* d, const char* profile, const double* params, size_t n_params, int n,
                       double truncation, bw_mu** out) {
  BW_REQUIRE(d && profile && out, "null argument");
  BW_REQUIRE(n_params == 0 || params, "params is null");
  *out = nullptr;
  return guarded([&] {
    MuProfile p{profile, std::vector<double>(params, params + n_params), ""};
    if (p.name == "custom-grid") throw Error(ErrorCode::invalid_argument, "custom-grid profiles go through bw_run");
    auto* m = new bw_mu{d->chart, sample_mu(p, d->chart->domain(), n, truncation)};
    *out = m;
    return BW_OK;
  });
}

void bw_mu_free(bw_mu* m) { delete m; }

bw_status bw_mu_eval(const bw_mu* m, double x, double y, double* re, double* im) {
  BW_REQUIRE(m && re && im, "null argument");
  return guarded([&] {
    cplx v = m->field.at({x, y});
    *re = v.real();
    *im = v.imag();
    return BW_OK;
  });
}

bw_status bw_mu_sup_norm(const bw_mu* m, double* out) {
  BW_REQUIRE(m && out, "null argument");
  return guarded([&] {
    *out = m->field.sup_norm();
    return BW_OK;
  });
}

bw_status bw_qcmap_solve(const bw_mu* m, double tol, double truncation, int max_iter, bw_qcmap** out) {
  BW_REQUIRE(m && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* f = new bw_qcmap{principal_solution(m->field, {tol, truncation, max_iter})};
    *out = f;
    if (!f->map.converged) return fail(BW_NOT_CONVERGED, "iteration stopped at max_iter before reaching tol");
    return BW_OK;
  });
}

void bw_qcmap_free(bw_qcmap* f) { delete f; }

bw_status bw_qcmap_eval(const bw_qcmap* f, double x, double y, double* re, double* im) {
  BW_REQUIRE(f && re && im, "null argument");
  return guarded([&] {
    if (!f->map.grid().contains({x, y})) return fail(BW_DOMAIN_ERROR, "point outside the computational box");
    cplx v = f->map({x, y});
    *re = v.real();
    *im = v.imag();
    return BW_OK;
  });
}

bw_status bw_qcmap_inverse(const bw_qcmap* f, double u, double v, double* x, double* y) {
  BW_REQUIRE(f && x && y, "null argument");
  return guarded([&] {
    auto z = f->map.inverse({u, v});
    if (!z) return fail(BW_NOT_CONVERGED, "inverse search failed");
    *x = z->real();
    *y = z->imag();
    return BW_OK;
  });
}

bw_status bw_qcmap_info(const bw_qcmap* f, int* iterations, int* converged, double* contraction, double* residual) {
  BW_REQUIRE(f, "null argument");
  if (iterations) *iterations = f->map.iterations;
  if (converged) *converged = f->map.converged ? 1 : 0;
  if (contraction) *contraction = f->map.contraction;
  if (residual) *residual = f->map.report.relative;
  last_error.clear();
  return BW_OK;
}

bw_status bw_solve(const bw_domain* d, const bw_mu* m, const char* phi, int samples, double tol, bw_solution** out) {
  BW_REQUIRE(d && m && phi && out, "null argument");
  BW_REQUIRE(m->chart == d->chart, "mu was sampled on a different domain");
  *out = nullptr;
  return guarded([&] {
    DirichletProblem pb{d->chart, m->field, parse_phi(phi, d->chart), samples, {tol, m->field.truncation, 200}};
    *out = new bw_solution{solve_regular(pb)};
    if (!(*out)->sol.converged) return fail(BW_NOT_CONVERGED, "solver did not reach tol");
    return BW_OK;
  });
}

void bw_solution_free(bw_solution* s) { delete s; }

bw_status bw_solution_eval(const bw_solution* s, double x, double y, double* re, double* im) {
  BW_REQUIRE(s && re && im, "null argument");
  return guarded([&] {
    if (!s->sol.chart->domain().contains({x, y})) return fail(BW_DOMAIN_ERROR, "point outside the domain");
    cplx v = s->sol({x, y});
    *re = v.real();
    *im = v.imag();
    return BW_OK;
  });
}

bw_status bw_solution_info(const bw_solution* s, int* converged, double* composite_residual) {
  BW_REQUIRE(s, "null argument");
  if (converged) *converged = s->sol.converged ? 1 : 0;
  if (composite_residual) *composite_residual = s->sol.composite_residual;
  last_error.clear();
  return BW_OK;
}

bw_status bw_run(const char* config_json, char** manifest_json) {
  if (manifest_json) *manifest_json = nullptr;
  BW_REQUIRE(config_json, "config is null");
  nlohmann::json err;
  bw_status st = guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::invalid_argument, std::string("config is not valid JSON: ") + e.what());
    }
    RunResult r = run(parse_config(j));
    if (manifest_json) *manifest_json = dup_string(r.manifest.dump(2));
    return static_cast<bw_status>(r.status);
  });
  if (st != BW_OK && manifest_json && !*manifest_json) {
    err = {{"status", "failed"}, {"code", static_cast<int>(st)}, {"error", last_error}};
    *manifest_json = dup_string(err.dump(2));
  }
  return st;
}

}  // extern "C"
