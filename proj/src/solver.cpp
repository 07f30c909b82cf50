#include "beltrami/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beltrami {

QcMap principal_solution(const MuField& mu_in, const SolverOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "solver tolerance must be positive");
  if (opt.max_iter < 1) throw Error(ErrorCode::invalid_argument, "max_iter must be at least 1");
  QcMap map;
  map.mu = opt.truncation > 0.0 ? truncate_mu(mu_in, opt.truncation) : mu_in;
  map.truncation = opt.truncation > 0.0 ? opt.truncation : mu_in.truncation;
  const Grid& g = map.mu.grid;
  const ComplexGrid& mu = map.mu.values;
  if (map.mu.sup_norm() >= 1.0)
    throw Error(ErrorCode::domain_error, "|mu| >= 1 on the grid; a truncation level is required");

  SpectralGrid spectral(g);
  const double mu_norm = l2_norm(mu);
  ComplexGrid omega = mu;
  double prev_inc = 0.0;
  map.converged = mu_norm == 0.0;
  map.iterations = mu_norm == 0.0 ? 1 : 0;
  while (!map.converged && map.iterations < opt.max_iter) {
    auto s = spectral.beurling(omega);
    map.margin_warning = map.margin_warning || s.margin_warning;
    double inc2 = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
      cplx next = mu[k] * s.values[k] + mu[k];
      inc2 += std::norm(next - omega[k]);
      omega[k] = next;
    }
    ++map.iterations;
    double inc = std::sqrt(inc2);
    map.increments.push_back(inc / mu_norm);
    // Ratios are only meaningful while increments sit above round-off.
    if (prev_inc > 0.0 && inc > 1e-12 * mu_norm) map.contraction = std::max(map.contraction, inc / prev_inc);
    prev_inc = inc;
    map.converged = inc < opt.tol * mu_norm;
  }

  auto c = spectral.cauchy(omega);
  map.margin_warning = map.margin_warning || c.margin_warning;
  map.w.resize(g.size());
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) map.w[g.index(i, j)] = g.point(i, j) + c.values[g.index(i, j)];
  update_residual(map);
  return map;
}

ResidualReport beltrami_residual(const Grid& g, const ComplexGrid& w, const ComplexGrid& mu,
                                 const std::function<bool(cplx)>& interior) {
  ResidualReport rep;
  const double h = g.h();
  const double area = h * h;
  double res2 = 0.0, fz2 = 0.0;
  std::vector<double> jac, mu_err;
  for (int j = 1; j + 1 < g.n; ++j)
    for (int i = 1; i + 1 < g.n; ++i) {
      cplx z = g.point(i, j);
      if (interior && !interior(z)) continue;
      cplx fx = (w[g.index(i + 1, j)] - w[g.index(i - 1, j)]) / (2.0 * h);
      cplx fy = (w[g.index(i, j + 1)] - w[g.index(i, j - 1)]) / (2.0 * h);
      const cplx I{0.0, 1.0};
      cplx fz = 0.5 * (fx - I * fy);
      cplx fzb = 0.5 * (fx + I * fy);
      cplx m = mu[g.index(i, j)];
      res2 += std::norm(fzb - m * fz) * area;
      fz2 += std::norm(fz) * area;
      jac.push_back(std::norm(fz) - std::norm(fzb));
      if (std::abs(m) > 0.0 && std::abs(m) <= 0.9 && fz != 0.0) mu_err.push_back(std::abs(fzb / fz - m));
    }
  // Image quadrilaterals over the same index range.
  std::size_t folds = 0;
  for (int j = 1; j + 2 < g.n; ++j)
    for (int i = 1; i + 2 < g.n; ++i) {
      cplx z = g.point(i, j) + cplx(0.5 * h, 0.5 * h);
      if (interior && !interior(z)) continue;
      cplx q[4] = {w[g.index(i, j)], w[g.index(i + 1, j)], w[g.index(i + 1, j + 1)], w[g.index(i, j + 1)]};
      double a = 0.0;
      for (int k = 0; k < 4; ++k) a += (std::conj(q[k]) * q[(k + 1) % 4]).imag();
      if (a <= 0.0) ++folds;
    }
  rep.residual = std::sqrt(res2);
  rep.relative = fz2 > 0.0 ? std::sqrt(res2 / fz2) : 0.0;
  auto& jr = rep.jacobian;
  jr.cells = jac.size();
  jr.fold_cells = folds;
  if (!jac.empty()) {
    jr.negative_cells = static_cast<std::size_t>(std::count_if(jac.begin(), jac.end(), [](double v) { return v <= 0.0; }));
    jr.min = *std::min_element(jac.begin(), jac.end());
    std::nth_element(jac.begin(), jac.begin() + jac.size() / 2, jac.end());
    jr.median = jac[jac.size() / 2];
    jr.positive_fraction = 1.0 - static_cast<double>(std::max(jr.negative_cells, folds)) / jac.size();
  }
  if (!mu_err.empty()) {
    std::nth_element(mu_err.begin(), mu_err.begin() + mu_err.size() / 2, mu_err.end());
    rep.median_mu_error = mu_err[mu_err.size() / 2];
  }
  return rep;
}

void update_residual(QcMap& map) { map.report = beltrami_residual(map.grid(), map.w, map.mu.values); }

std::optional<cplx> QcMap::inverse(cplx target, std::optional<cplx> guess) const {
  const Grid& g = grid();
  const double tol = 1e-12 * (1.0 + std::abs(target));
  // Damped Newton on the bilinear interpolant, halving steps that do not reduce the misfit.
  auto newton = [&](cplx z) -> std::optional<cplx> {
    const double d = 1e-4 * g.h();
    double err = std::abs((*this)(z) - target);
    for (int it = 0; it < 60 && err > tol; ++it) {
      cplx f = (*this)(z) - target;
      cplx fx = ((*this)(z + d) - (*this)(z - d)) / (2.0 * d);
      cplx fy = ((*this)(z + cplx(0, d)) - (*this)(z - cplx(0, d))) / (2.0 * d);
      double det = fx.real() * fy.imag() - fx.imag() * fy.real();
      if (det == 0.0) return std::nullopt;
      cplx step{(fy.imag() * f.real() - fy.real() * f.imag()) / det, (-fx.imag() * f.real() + fx.real() * f.imag()) / det};
      double lambda = 1.0;
      bool improved = false;
      for (int b = 0; b < 30; ++b, lambda *= 0.5) {
        cplx trial = z - lambda * step;
        if (!g.contains(trial)) continue;
        double e = std::abs((*this)(trial) - target);
        if (e < err) {
          z = trial;
          err = e;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (err < 1e-9 * (1.0 + std::abs(target))) return z;
    return std::nullopt;
  };
  if (guess) {
    if (auto r = newton(*guess)) return r;
  }
  // Coarse cell search for the closest image, then polish.
  const int stride = std::max(1, g.n / 128);
  double best = std::numeric_limits<double>::infinity();
  cplx start{};
  for (int j = 0; j < g.n; j += stride)
    for (int i = 0; i < g.n; i += stride) {
      double dist = std::abs(w[g.index(i, j)] - target);
      if (dist < best) {
        best = dist;
        start = g.point(i, j);
      }
    }
  if (auto r = newton(start)) return r;
  return std::nullopt;
}

}  // namespace beltrami
