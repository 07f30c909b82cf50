#include "beltrami/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace beltrami {

double dilatation(cplx mu) {
  double m = std::abs(mu);
  if (!(m < 1.0)) throw Error(ErrorCode::domain_error, "dilatation: |mu| >= 1 (truncate first)");
  return (1.0 + m) / (1.0 - m);
}

double power_log_k(double r, double s, double q) {
  if (r >= 1.0) return 1.0;
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  double l = std::log(1.0 / r);
  double v = std::exp(-s * std::log(r)) * std::pow(l, q);
  return std::max(1.0, v);
}

Grid domain_grid(const DomainSpec& domain, int n) {
  if (!is_power_of_two(n)) throw Error(ErrorCode::invalid_argument, "grid size N must be a power of two");
  auto [lo, hi] = domain.bounding_box();
  double side = std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
  return Grid{n, 2.0 * side, 0.5 * (lo + hi)};
}

cplx MuField::at(cplx z) const {
  if (inside && !inside(z)) return 0.0;
  if (exact) {
    cplx m = exact(z);
    if (truncation > 0.0 && std::abs(m) > 1.0 - truncation) m *= (1.0 - truncation) / std::abs(m);
    return m;
  }
  return bilinear(grid, values, z);
}

double MuField::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

MuField truncate_mu(MuField mu, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::invalid_argument, "truncation must lie in (0,1)");
  const double cap = 1.0 - eps;
  for (auto& v : mu.values) {
    double m = std::abs(v);
    if (m > cap) v *= cap / m;
  }
  mu.truncation = eps;
  return mu;
}

namespace {

std::vector<cplx> read_mu_csv(const std::string& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open mu CSV: " + path);
  std::vector<cplx> sum(g.size(), 0.0);
  std::vector<int> count(g.size(), 0);
  std::string line;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y, re, im;
    if (!(ss >> x >> y >> re >> im)) continue;
    int i = static_cast<int>(std::floor((x - g.x0()) / g.h()));
    int j = static_cast<int>(std::floor((y - g.y0()) / g.h()));
    if (i < 0 || j < 0 || i >= g.n || j >= g.n) continue;
    sum[g.index(i, j)] += cplx(re, im);
    count[g.index(i, j)]++;
  }
  for (std::size_t k = 0; k < sum.size(); ++k)
    if (count[k] > 0) sum[k] /= double(count[k]);
  return sum;
}

double param(const std::vector<double>& p, std::size_t k, double fallback) {
  return k < p.size() ? p[k] : fallback;
}

}  // namespace

MuField sample_mu(const MuProfile& profile, const DomainSpec& domain, int n, double truncation) {
  MuField mu;
  mu.grid = domain_grid(domain, n);
  mu.profile = profile.name;
  mu.params = profile.params;
  mu.inside = [domain](cplx z) { return domain.contains(z); };
  const auto& p = profile.params;

  if (profile.name == "zero") {
    mu.exact = [](cplx) { return cplx(0.0); };
  } else if (profile.name == "constant") {
    cplx k = p.size() >= 2 ? cplx(p[0], p[1]) : cplx(param(p, 0, 0.0), 0.0);
    mu.exact = [k](cplx) { return k; };
  } else if (profile.name == "radial-power") {
    double a = param(p, 0, 0.5);
    if (!(a > -0.5)) throw Error(ErrorCode::invalid_argument, "radial-power needs a > -1/2");
    double k = a / (1.0 + a);
    mu.exact = [k](cplx z) { return z == 0.0 ? cplx(0.0) : k * z / std::conj(z); };
  } else if (profile.name == "boundary-log" || profile.name == "power-log") {
    const bool bl = profile.name == "boundary-log";
    double s = bl ? 0.0 : param(p, 0, 0.0);
    double q = bl ? 1.0 : param(p, 1, 1.0);
    cplx z0 = bl ? cplx(param(p, 0, 1.0), param(p, 1, 0.0)) : cplx(param(p, 2, 0.0), param(p, 3, 0.0));
    mu.singular_points = {z0};
    mu.exact = [s, q, z0](cplx z) {
      double k = power_log_k(std::abs(z - z0), s, q);
      if (std::isinf(k)) return cplx(1.0);
      return cplx((k - 1.0) / (k + 1.0));
    };
  } else if (profile.name == "custom-grid") {
    mu.values = read_mu_csv(profile.csv_path, mu.grid);
  } else {
    throw Error(ErrorCode::unknown_id, "unknown mu profile: " + profile.name);
  }

  if (mu.exact) {
    mu.values.assign(mu.grid.size(), 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        cplx z = mu.grid.point(i, j);
        if (domain.contains(z)) mu.values[mu.grid.index(i, j)] = mu.exact(z);
      }
  }

  // Degenerate samples on a positive-area set need explicit truncation permission.
  bool degenerate = false;
  for (const auto& v : mu.values) degenerate = degenerate || !(std::abs(v) < 1.0);
  if (degenerate && !(truncation > 0.0))
    throw Error(ErrorCode::domain_error,
                "mu profile '" + profile.name + "' reaches |mu| >= 1 on grid cells; request truncation");
  if (truncation > 0.0) mu = truncate_mu(std::move(mu), truncation);
  return mu;
}

double DilatationField::at(cplx z) const {
  if (inside && !inside(z)) return 0.0;
  if (exact) return exact(z);
  return bilinear(grid, values, z);
}

DilatationField dilatation_field(const MuField& mu) {
  DilatationField k;
  k.grid = mu.grid;
  k.values.resize(mu.values.size());
  for (std::size_t i = 0; i < mu.values.size(); ++i) k.values[i] = dilatation(mu.values[i]);
  k.inside = mu.inside;
  k.singular_points = mu.singular_points;
  if (mu.exact) {
    k.exact = [mu](cplx z) {
      cplx m = mu.at(z);
      double a = std::abs(m);
      return a >= 1.0 ? std::numeric_limits<double>::infinity() : (1.0 + a) / (1.0 - a);
    };
  }
  return k;
}

DilatationField dilatation_from_function(std::function<double(cplx)> k, Grid grid,
                                         std::vector<cplx> singular_points,
                                         std::function<bool(cplx)> inside) {
  DilatationField f;
  f.grid = grid;
  f.exact = std::move(k);
  f.inside = std::move(inside);
  f.singular_points = std::move(singular_points);
  f.values.resize(grid.size());
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) f.values[grid.index(i, j)] = f.at(grid.point(i, j));
  return f;
}

RadialProfile radial_profile(const DilatationField& k, cplx z0, const std::vector<double>& radii) {
  if (radii.empty()) throw Error(ErrorCode::invalid_argument, "radial_profile: empty radius list");
  if (!k.grid.contains(z0)) throw Error(ErrorCode::invalid_argument, "radial_profile: center outside the box");
  RadialProfile out;
  out.center = z0;
  out.radii = radii;
  out.resolution = k.grid.h();
  for (double r : radii) {
    int m = std::max(64, static_cast<int>(std::ceil(kTwoPi * r / k.grid.h())));
    // Exact evaluators get a finer circle so sub-grid radii are still resolved.
    if (k.exact) m = std::max(m, 256);
    double sum = 0.0;
    for (int t = 0; t < m; ++t) {
      cplx z = z0 + std::polar(r, kTwoPi * (t + 0.5) / m);
      sum += k.grid.contains(z) || k.exact ? k.at(z) : 0.0;
    }
    double norm = sum * kTwoPi * r / m;
    out.circle_norm.push_back(norm);
    out.circle_mean.push_back(norm / (kTwoPi * r));
  }
  return out;
}

std::vector<double> dyadic_radii(double eps0, int levels) {
  std::vector<double> r(levels);
  for (int k = 0; k < levels; ++k) r[k] = std::ldexp(eps0, -(levels - 1 - k));
  return r;
}

}  // namespace beltrami
