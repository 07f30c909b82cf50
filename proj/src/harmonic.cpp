#include "beltrami/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace beltrami {

namespace {

// c_n = (1/M) sum phi_k e^{-i n theta_k}, n = 0..M/2.
std::vector<cplx> dft_half(const std::vector<double>& phi) {
  const int m = static_cast<int>(phi.size());
  std::vector<cplx> c(m / 2 + 1);
  for (int n = 0; n <= m / 2; ++n) {
    cplx s = 0.0;
    for (int k = 0; k < m; ++k) {
      // Reduce the index first so the angle stays small and exact.
      int idx = static_cast<int>((static_cast<long>(n) * k) % m);
      s += phi[k] * std::polar(1.0, -kTwoPi * idx / m);
    }
    c[n] = s / static_cast<double>(m);
  }
  return c;
}

}  // namespace

double BoundaryData::continuity_modulus() const {
  double w = 0.0;
  for (const auto& c : circles)
    for (std::size_t k = 0; k < c.size(); ++k) w = std::max(w, std::abs(c[(k + 1) % c.size()] - c[k]));
  return w;
}

void BoundaryData::validate(int expected_circles) const {
  if (static_cast<int>(circles.size()) != expected_circles)
    throw Error(ErrorCode::invalid_argument, "boundary data has " + std::to_string(circles.size()) +
                                                 " circles, expected " + std::to_string(expected_circles));
  int m = samples();
  if (m < 64 || !is_power_of_two(m))
    throw Error(ErrorCode::invalid_argument, "boundary samples M must be a power of two >= 64");
  for (const auto& c : circles) {
    if (static_cast<int>(c.size()) != m) throw Error(ErrorCode::invalid_argument, "circles have different sample counts");
    for (double v : c)
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "boundary data must be finite");
  }
}

BoundaryData sample_boundary(const std::function<double(double)>& phi, int m) {
  BoundaryData d;
  d.circles.emplace_back(m);
  for (int k = 0; k < m; ++k) d.circles[0][k] = phi(kTwoPi * k / m);
  d.validate(1);
  return d;
}

BoundaryData sample_boundary(const std::function<double(double)>& outer, const std::function<double(double)>& inner,
                             int m) {
  BoundaryData d = sample_boundary(outer, m);
  d.circles.emplace_back(m);
  for (int k = 0; k < m; ++k) d.circles[1][k] = inner(kTwoPi * k / m);
  d.validate(2);
  return d;
}

std::vector<double> resample_periodic(std::vector<std::pair<double, double>> pts, int m) {
  if (pts.empty()) throw Error(ErrorCode::invalid_argument, "no boundary points to resample");
  for (auto& p : pts) {
    p.first = std::fmod(p.first, kTwoPi);
    if (p.first < 0) p.first += kTwoPi;
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out(m);
  const std::size_t n = pts.size();
  for (int k = 0; k < m; ++k) {
    double t = kTwoPi * k / m;
    auto it = std::upper_bound(pts.begin(), pts.end(), t, [](double v, const auto& p) { return v < p.first; });
    std::size_t hi = (it == pts.end()) ? 0 : static_cast<std::size_t>(it - pts.begin());
    std::size_t lo = (hi + n - 1) % n;
    double t0 = pts[lo].first, t1 = pts[hi].first;
    double span = t1 - t0;
    if (span <= 0) span += kTwoPi;
    double off = t - t0;
    if (off < 0) off += kTwoPi;
    double s = span > 0 ? off / span : 0.0;
    out[k] = (1 - s) * pts[lo].second + s * pts[hi].second;
  }
  return out;
}

cplx schwarz_integral(const BoundaryData& data, cplx z) {
  const int m = data.samples();
  if (m == 0) throw Error(ErrorCode::invalid_argument, "empty boundary data");
  const double limit = 1.0 - kTwoPi / m;
  if (std::abs(z) > limit) {
    int need = static_cast<int>(std::ceil(kTwoPi / std::max(1e-300, 1.0 - std::abs(z))));
    throw Error(ErrorCode::domain_error, "point too close to the circle for M=" + std::to_string(m) +
                                             "; need M >= " + std::to_string(need));
  }
  cplx s = 0.0;
  const auto& phi = data.circles[0];
  for (int k = 0; k < m; ++k) {
    cplx zeta = std::polar(1.0, kTwoPi * k / m);
    s += phi[k] * (zeta + z) / (zeta - z);
  }
  s /= static_cast<double>(m);
  return s;
}

SchwarzSeries::SchwarzSeries(const BoundaryData& data) : m_(data.samples()) {
  auto c = dft_half(data.circles.at(0));
  coeff_.resize(c.size());
  coeff_[0] = c[0].real();
  for (std::size_t n = 1; n < c.size(); ++n) coeff_[n] = 2.0 * c[n];
  // Nyquist mode: real cosine, counted once.
  coeff_.back() = c.back().real();
}

cplx SchwarzSeries::operator()(cplx z) const {
  cplx r = 0.0;
  for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) r = r * z + *it;
  return r;
}

cplx SchwarzSeries::derivative(cplx z) const {
  cplx r = 0.0;
  for (std::size_t n = coeff_.size() - 1; n >= 1; --n) r = r * z + static_cast<double>(n) * coeff_[n];
  return r;
}

AnnulusHarmonic annulus_dirichlet(const BoundaryData& data, double rho, int n_max) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::invalid_argument, "annulus inner radius must lie in (0, 1)");
  data.validate(2);
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be positive");
  AnnulusHarmonic h;
  h.rho = rho;
  const int m = data.samples();
  auto alpha = dft_half(data.circles[0]);
  auto beta = dft_half(data.circles[1]);
  h.n_max = std::min(n_max, m / 2);
  // Each mode is a 2x2 system [[1, rho^n], [rho^n, 1]]; its condition number
  // (1 + rho^n)/(1 - rho^n) only degrades for rho^n -> 1, i.e. never for n >= 1
  // unless rho is extremely close to 1.
  for (int n = 1; n <= h.n_max; ++n) {
    double rn = std::pow(rho, n);
    double cond = (1.0 + rn) / (1.0 - rn);
    if (cond > 1e12) {
      h.n_max = n - 1;
      h.truncated = true;
      h.warning = "mode system ill-conditioned beyond n=" + std::to_string(n - 1);
      break;
    }
  }
  h.constant = alpha[0].real();
  h.c0 = (beta[0].real() - alpha[0].real()) / std::log(rho);
  h.a.assign(h.n_max + 1, 0.0);
  h.b.assign(h.n_max + 1, 0.0);
  for (int n = 1; n <= h.n_max; ++n) {
    double w = (n == m / 2) ? 1.0 : 2.0;
    cplx an = w * alpha[n], bn = w * beta[n];
    if (n == m / 2) {
      an = an.real();
      bn = bn.real();
    }
    double rn = std::pow(rho, n);
    double det = 1.0 - rn * rn;
    h.a[n] = (an - bn * rn) / det;
    h.b[n] = (bn - an * rn) / det;
  }
  double err = 0.0;
  for (int c = 0; c < 2; ++c) {
    double r = c == 0 ? 1.0 : rho;
    for (int k = 0; k < m; ++k) err = std::max(err, std::abs(h.u(std::polar(r, kTwoPi * k / m)) - data.circles[c][k]));
  }
  h.boundary_error = err;
  return h;
}

cplx AnnulusHarmonic::regular_part(cplx z) const {
  // sum a_n z^n + conj(b_n) (rho/z)^n; Re of each term matches the u expansion.
  cplx s = constant;
  cplx zn = 1.0, qn = 1.0;
  const cplx q = rho / z;
  for (int n = 1; n <= n_max; ++n) {
    zn *= z;
    qn *= q;
    s += a[n] * zn + std::conj(b[n]) * qn;
  }
  return s;
}

double AnnulusHarmonic::u(cplx z) const { return regular_part(z).real() + c0 * std::log(std::abs(z)); }

cplx multivalent_eval(const AnnulusHarmonic& h, const std::vector<cplx>& path) {
  if (path.size() < 1) throw Error(ErrorCode::invalid_argument, "empty path");
  auto check_segment = [&](cplx p, cplx q) {
    if (std::abs(p) >= 1.0 || std::abs(q) >= 1.0) throw Error(ErrorCode::domain_error, "path leaves the annulus");
    cplx d = q - p;
    double t = std::norm(d) > 0 ? std::clamp(-(std::conj(p) * d).real() / std::norm(d), 0.0, 1.0) : 0.0;
    if (std::abs(p + t * d) <= h.rho) throw Error(ErrorCode::domain_error, "path touches the inner circle");
  };
  double arg = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    check_segment(path[k], path[k + 1]);
    // A straight segment that avoids the origin turns by less than pi.
    arg += std::arg(path[k + 1] / path[k]);
  }
  if (path.size() == 1) check_segment(path[0], path[0]);
  cplx start = h.regular_part(path.front());
  cplx end = h.regular_part(path.back());
  double u = end.real() + h.c0 * std::log(std::abs(path.back()));
  double v = end.imag() - start.imag() + h.c0 * arg;
  return {u, v};
}

double flux_period(const std::function<double(cplx)>& u, cplx center, double radius, int samples, double d) {
  auto deriv = [&](cplx z, cplx dir) {
    return (8.0 * (u(z + d * dir) - u(z - d * dir)) - (u(z + 2.0 * d * dir) - u(z - 2.0 * d * dir))) / (12.0 * d);
  };
  double s = 0.0;
  for (int k = 0; k < samples; ++k) {
    cplx n = std::polar(1.0, kTwoPi * k / samples);
    s += deriv(center + radius * n, n);
  }
  return s * kTwoPi * radius / samples;
}

}  // namespace beltrami
