#include "beltrami/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace beltrami {

using nlohmann::json;

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad number '" + item + "' in " + what);
    }
  }
  return v;
}

double wrap_angle(double t) { return std::remainder(t, kTwoPi); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PhiSpec parse_phi(const std::string& text, std::shared_ptr<const PrimeEndChart> chart) {
  PhiSpec p;
  p.text = text;
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "cos") {
    p.value = [](int, double t) { return std::cos(t); };
  } else if (kind == "constant") {
    auto v = parse_numbers(rest, "constant phi");
    if (v.size() != 1) throw Error(ErrorCode::invalid_argument, "constant phi takes one value");
    double c = v[0];
    p.value = [c](int, double) { return c; };
  } else if (kind == "fourier") {
    auto c = parse_numbers(rest, "fourier phi");
    if (c.empty()) throw Error(ErrorCode::invalid_argument, "fourier phi needs at least a0");
    p.value = [c](int, double t) {
      double s = c[0];
      for (std::size_t k = 1; k < c.size(); ++k) {
        int n = static_cast<int>((k + 1) / 2);
        s += c[k] * ((k % 2 == 1) ? std::cos(n * t) : std::sin(n * t));
      }
      return s;
    };
  } else if (kind == "jump") {
    double delta = 0.2;
    if (!rest.empty()) delta = parse_numbers(rest, "jump phi").at(0);
    if (!(delta > 0 && delta < kPi / 2)) throw Error(ErrorCode::invalid_argument, "jump ramp must lie in (0, pi/2)");
    p.value = [delta](int, double t) {
      t = wrap_angle(t);
      double d = std::min(std::abs(t), kPi - std::abs(t));
      double v = std::min(1.0, d / delta);
      return t >= 0 ? v : -v;
    };
  } else if (kind == "plane-x") {
    if (!chart) throw Error(ErrorCode::invalid_argument, "plane-x phi needs a domain chart");
    p.value = [chart](int circle, double t) {
      double r = circle == 0 ? 1.0 : chart->domain().inner_radius;
      return chart->point(t, r).real();
    };
  } else if (kind == "annulus") {
    auto v = parse_numbers(rest, "annulus phi");
    if (v.size() != 2) throw Error(ErrorCode::invalid_argument, "annulus phi takes inner,outer values");
    double inner = v[0], outer = v[1];
    p.value = [inner, outer](int circle, double) { return circle == 0 ? outer : inner; };
  } else if (kind == "csv") {
    std::ifstream in(rest);
    if (!in) throw Error(ErrorCode::io_error, "cannot open phi CSV: " + rest);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double a, v;
      if (ss >> a >> v) pts.emplace_back(a, v);
    }
    if (pts.size() < 2) throw Error(ErrorCode::invalid_argument, "phi CSV needs at least two (angle,value) rows");
    auto table = resample_periodic(pts, 4096);
    p.value = [table](int, double t) {
      double x = std::fmod(t, kTwoPi);
      if (x < 0) x += kTwoPi;
      double f = x / kTwoPi * table.size();
      std::size_t i = static_cast<std::size_t>(f) % table.size();
      double s = f - std::floor(f);
      return (1 - s) * table[i] + s * table[(i + 1) % table.size()];
    };
  } else {
    throw Error(ErrorCode::unknown_id, "unknown phi '" + text +
                                           "' (cos, constant:c, fourier:..., jump[:delta], plane-x, annulus:a,b, csv:path)");
  }
  return p;
}

cplx RegularSolution::g(cplx z) const { return rstar->inverse(F ? (*F)(z) : z); }

RegularSolution solve_regular(const DirichletProblem& pb) {
  const auto& chart = pb.chart;
  if (!chart) throw Error(ErrorCode::invalid_argument, "problem has no domain");
  const DomainSpec& dom = chart->domain();
  if (dom.kind != DomainKind::disk && dom.kind != DomainKind::slit_disk && dom.kind != DomainKind::jordan_polyline)
    throw Error(ErrorCode::invalid_argument, "solve_regular needs a simply connected domain (disk, slit-disk, jordan-polyline)");
  if (pb.samples < 64 || !is_power_of_two(pb.samples))
    throw Error(ErrorCode::invalid_argument, "boundary samples M must be a power of two >= 64");

  RegularSolution s;
  s.chart = chart;
  const int m = pb.samples;
  if (pb.mu.sup_norm() == 0.0) {
    // F is the identity and the chart itself is the exact R*.
    s.rstar = chart->reference_map_ptr();
    s.image_boundary = dom.boundary;
    s.transported = sample_boundary([&](double t) { return pb.phi.value(0, t); }, m);
    s.map_accuracy = s.rstar->accuracy();
  } else {
    s.F = principal_solution(pb.mu, pb.solver);
    s.converged = s.F->converged;
    const int nb = 2048;
    std::vector<double> theta(nb);
    s.image_boundary.resize(nb);
    for (int k = 0; k < nb; ++k) {
      theta[k] = kTwoPi * k / nb;
      s.image_boundary[k] = (*s.F)(chart->point(theta[k], 1.0));
    }
    if (polyline_self_crosses(s.image_boundary))
      throw Error(ErrorCode::domain_error,
                  "traced image boundary self-crosses; suspect the truncation level or the grid size N");
    cplx anchor = (*s.F)(chart->point(0.0, 0.0));
    auto rstar = std::make_shared<ConformalMap>(zipper_map(s.image_boundary, anchor));
    s.map_accuracy = rstar->accuracy();
    // theta(alpha) - alpha is continuous and periodic; interpolate it linearly in alpha.
    const auto& alpha = rstar->vertex_angles();
    std::vector<std::pair<double, double>> diff;
    double prev = 0.0;
    for (int k = 0; k < nb; ++k) {
      double d = wrap_angle(theta[k] - alpha[k]);
      if (k > 0) d = prev + wrap_angle(d - prev);
      prev = d;
      diff.emplace_back(alpha[k], d);
    }
    auto d_at = resample_periodic(diff, m);
    BoundaryData data;
    data.circles.emplace_back(m);
    for (int j = 0; j < m; ++j) data.circles[0][j] = pb.phi.value(0, kTwoPi * j / m + d_at[j]);
    data.validate(1);
    s.transported = std::move(data);
    s.rstar = std::move(rstar);
  }
  s.h = std::make_shared<SchwarzSeries>(s.transported);

  // Composite residual on cells whose four neighbours lie in the domain.
  const Grid& grid = pb.mu.grid;
  ComplexGrid f = sample_solution(s, grid, dom);
  const double h = grid.h();
  auto interior = [&](cplx z) {
    return dom.contains(z + h) && dom.contains(z - h) && dom.contains(z + cplx(0, h)) && dom.contains(z - cplx(0, h)) &&
           dom.contains(z + cplx(h, h));
  };
  auto rep = beltrami_residual(grid, f, pb.mu.values, interior);
  s.composite_residual = rep.relative;
  s.composite_jacobian = rep.jacobian;
  return s;
}

ComplexGrid sample_solution(const RegularSolution& s, const Grid& grid, const DomainSpec& domain) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ComplexGrid f(grid.size(), cplx(nan, nan));
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) {
      cplx z = grid.point(i, j);
      if (domain.contains(z)) f[grid.index(i, j)] = s(z);
    }
  return f;
}

std::optional<PowerLogSymbol> power_log_symbol(const MuField& mu) {
  if (mu.singular_points.empty()) return std::nullopt;
  if (mu.profile == "boundary-log") return PowerLogSymbol{0.0, 1.0, mu.singular_points[0]};
  if (mu.profile == "power-log")
    return PowerLogSymbol{mu.params.size() > 0 ? mu.params[0] : 0.0, mu.params.size() > 1 ? mu.params[1] : 1.0,
                          mu.singular_points[0]};
  return std::nullopt;
}

MultivalentSolution solve_multivalent(const DirichletProblem& pb, int loops, std::uint64_t seed, int grid_n) {
  if (!pb.chart || pb.chart->domain().kind != DomainKind::annulus)
    throw Error(ErrorCode::invalid_argument, "solve_multivalent needs the annulus domain");
  MultivalentSolution s;
  s.rho = pb.chart->domain().inner_radius;
  const std::string& prof = pb.mu.profile;
  if (prof == "zero" || pb.mu.sup_norm() == 0.0) {
    s.exponent = 0.0;
  } else if (prof == "radial-power") {
    s.exponent = pb.mu.params.empty() ? 0.5 : pb.mu.params[0];
  } else {
    throw Error(ErrorCode::invalid_argument,
                "solve_multivalent supports mu = zero or radial-power only (image must stay a round annulus)");
  }
  s.image_rho = std::pow(s.rho, 1.0 + 2.0 * s.exponent);
  s.measured_image_rho = s.image_rho;  // exact when mu = 0; overwritten by the grid check below
  if (s.exponent != 0.0 && grid_n > 0) {
    // Cross-check the closed-form calibration with the grid solver.
    MuField mu = sample_mu({"radial-power", {s.exponent}, ""}, pb.chart->domain(), grid_n);
    QcMap F = principal_solution(mu, pb.solver);
    double inner = 0, outer = 0;
    const int k = 512;
    for (int t = 0; t < k; ++t) {
      inner += std::abs(F(std::polar(s.rho, kTwoPi * t / k)));
      outer += std::abs(F(std::polar(1.0, kTwoPi * t / k)));
    }
    s.measured_image_rho = inner / outer;
  }
  // g(z) = z |z|^{2a} keeps angles, so phi transports unchanged.
  const int m = pb.samples;
  BoundaryData data = sample_boundary([&](double t) { return pb.phi.value(0, t); },
                                      [&](double t) { return pb.phi.value(1, t); }, m);
  s.u = annulus_dirichlet(data, s.image_rho, 64);
  s.period = conjugate_period(s.u);

  std::mt19937_64 rng(seed);
  const double lo = 1.1 * s.rho, hi = 0.95;
  for (int i = 0; i < loops; ++i) {
    int winding = i % 3;
    std::vector<cplx> path;
    if (winding == 0) {
      double rc = lo + 0.1 + (hi - lo - 0.2) * uniform01(rng);
      cplx c = std::polar(rc, kTwoPi * uniform01(rng));
      double rad = 0.05 + 0.04 * uniform01(rng);
      for (int k = 0; k <= 32; ++k) path.push_back(c + std::polar(rad, kTwoPi * k / 32));
    } else {
      const int kpts = 48 * winding;
      double start = kTwoPi * uniform01(rng);
      for (int k = 0; k < kpts; ++k) {
        double r = lo + (hi - lo) * uniform01(rng);
        path.push_back(std::polar(r, start + kTwoPi * winding * k / kpts));
      }
      path.push_back(path.front());
    }
    std::vector<cplx> image;
    for (cplx z : path) image.push_back(s.g(z));
    cplx H = multivalent_eval(s.u, image);
    double re_start = s.u.u(image.front());
    s.max_re_jump = std::max(s.max_re_jump, std::abs(H.real() - re_start));
    s.max_im_jump_error = std::max(s.max_im_jump_error, std::abs(H.imag() - winding * s.period));
    ++s.loops;
  }
  return s;
}

BoundaryReport verify_boundary(const std::function<double(cplx)>& re_f, const PrimeEndChart& chart, const PhiSpec& phi,
                               double eps, int count, const std::vector<double>& extra, int kmin, int kmax) {
  BoundaryReport rep;
  rep.eps = eps;
  std::vector<double> angles;
  for (int e = 0; e < count; ++e) angles.push_back(kTwoPi * e / count);
  angles.insert(angles.end(), extra.begin(), extra.end());
  const double rho = chart.domain().inner_radius;
  for (int circle = 0; circle < chart.circle_count(); ++circle) {
    for (double a : angles) {
      PrimeEndResidual r;
      r.angle = a;
      r.circle = circle;
      r.phi = phi.value(circle, a);
      for (int k = kmin; k <= kmax; ++k) {
        double t = std::ldexp(1.0, -k);
        double radius = circle == 0 ? 1.0 - t : rho * (1.0 + t);
        r.radii.push_back(radius);
        r.values.push_back(re_f(chart.point(a, radius)));
      }
      // Values approach the limit like v(t) = L + a t + o(t) in t = distance to the circle;
      // one Richardson step on the dyadic radii removes the linear term.
      std::size_t tail = std::min<std::size_t>(5, r.values.size());
      for (std::size_t i = r.values.size() - tail; i < r.values.size(); ++i) {
        r.raw_residual = std::max(r.raw_residual, std::abs(r.values[i] - r.phi));
        double limit = i > 0 ? 2.0 * r.values[i] - r.values[i - 1] : r.values[i];
        r.limits.push_back(limit);
        r.residual = std::max(r.residual, std::abs(limit - r.phi));
      }
      rep.ends.push_back(std::move(r));
    }
  }
  std::vector<double> res;
  for (const auto& e : rep.ends) res.push_back(e.residual);
  std::sort(res.begin(), res.end());
  rep.max = res.empty() ? 0.0 : res.back();
  rep.p95 = res.empty() ? 0.0 : res[static_cast<std::size_t>(std::ceil(0.95 * res.size())) - 1];
  rep.pass = rep.p95 < eps;
  return rep;
}

json BoundaryReport::to_json() const {
  json ends_json = json::array();
  for (const auto& e : ends)
    ends_json.push_back({{"angle", e.angle}, {"circle", e.circle}, {"phi", e.phi}, {"residual", e.residual}, {"raw_residual", e.raw_residual}, {"limits", e.limits},
                         {"radii", e.radii}, {"values", e.values}});
  return json{{"verdict", pass ? "pass" : "fail"}, {"p95_residual", p95}, {"max_residual", max},
              {"eps", eps}, {"tail_points", 5}, {"prime_ends", ends_json},
              {"note", "regular solutions are open discrete maps; only the Jacobian surrogate is checked on the grid"}};
}

namespace {

double diameter(const std::vector<cplx>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  return d;
}

bool decays(const std::vector<double>& v, double eps) {
  if (v.empty() || !(v.back() < eps)) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] * (1 + 1e-9)) return false;
  return true;
}

}  // namespace

ExtensionReport verify_extension(const QcMap& F, const PrimeEndChart& chart, int count, int depth, double eps) {
  ExtensionReport rep;
  rep.eps = eps;
  std::vector<cplx> image_boundary;
  for (int k = 0; k < 2048; ++k) image_boundary.push_back(F(chart.point(kTwoPi * k / 2048, 1.0)));
  std::size_t failures = 0, probes = 0;
  bool all_ok = true;
  for (int e = 0; e < count; ++e) {
    ExtensionEnd end;
    end.angle = kTwoPi * e / count;
    const cplx p0 = chart.point(end.angle, 1.0);
    const cplx w0 = F(p0);
    for (int k = 1; k <= depth; ++k) {
      const double t = std::ldexp(1.0, -k);
      std::vector<cplx> img;
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j)
          img.push_back(F(chart.point(end.angle + t * (-1.0 + j / 4.0), 1.0 - t * i / 8.0)));
      end.forward.push_back(diameter(img));

      std::vector<cplx> pre;
      std::optional<cplx> guess = p0;
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j < 9; ++j) {
          cplx w = w0 + std::polar(t * i / 8.0, kTwoPi * j / 9.0);
          if (i > 0 && !point_in_polygon(image_boundary, w)) continue;
          ++end.inverse_probes;
          auto z = F.inverse(w, guess);
          if (!z) {
            ++end.inverse_failures;
            continue;
          }
          guess = *z;
          pre.push_back(*z);
          if (i == 0) break;  // the centre needs one probe only
        }
      end.inverse.push_back(diameter(pre));
    }
    end.forward_ok = decays(end.forward, eps);
    end.inverse_ok = decays(end.inverse, eps);
    all_ok = all_ok && end.forward_ok && end.inverse_ok;
    failures += end.inverse_failures;
    probes += end.inverse_probes;
    rep.ends.push_back(std::move(end));
  }
  if (probes > 0 && failures > 0.001 * probes)
    rep.verdict = "inconclusive";
  else
    rep.verdict = all_ok ? "consistent-with-extension" : "not-consistent";
  return rep;
}

json ExtensionReport::to_json() const {
  json ends_json = json::array();
  for (const auto& e : ends)
    ends_json.push_back({{"angle", e.angle}, {"forward_diameters", e.forward}, {"inverse_diameters", e.inverse},
                         {"forward_ok", e.forward_ok}, {"inverse_ok", e.inverse_ok},
                         {"inverse_probes", e.inverse_probes}, {"inverse_failures", e.inverse_failures}});
  return json{{"verdict", verdict}, {"eps", eps}, {"prime_ends", ends_json}};
}

double monodromy_period(const RegularSolution& s, cplx center, double radius) {
  if (!s.F) return flux_period([&](cplx z) { return s(z).real(); }, center, radius);
  // Re f is only mu-harmonic in z; measure the flux where it is harmonic, on a
  // circle of the canonical disk around g(center) (a closed loop of the domain).
  cplx w0 = s.g(center);
  double r = 0.5 * (1.0 - std::abs(w0));
  return flux_period([&](cplx w) { return (*s.h)(w).real(); }, w0, r);
}

}  // namespace beltrami
