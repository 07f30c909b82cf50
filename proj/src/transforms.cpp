#include "beltrami/transforms.hpp"

#include <cmath>
#include <cstring>

#include <fftw3.h>

namespace beltrami {

struct SpectralGrid::Plans {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

namespace {

enum Multiplier { kBeurling = 0, kCauchy = 1, kDz = 2, kDzbar = 3, kIdentity = 4 };

}  // namespace

SpectralGrid::SpectralGrid(Grid grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  if (!is_power_of_two(grid.n)) throw Error(ErrorCode::invalid_argument, "spectral grid size must be a power of two");
  plans_->buf = fftw_alloc_complex(grid.size());
  // ESTIMATE plans are deterministic across runs, which keeps outputs byte-reproducible.
  plans_->fwd = fftw_plan_dft_2d(grid.n, grid.n, plans_->buf, plans_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_2d(grid.n, grid.n, plans_->buf, plans_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralGrid::~SpectralGrid() {
  if (plans_) {
    fftw_destroy_plan(plans_->fwd);
    fftw_destroy_plan(plans_->bwd);
    fftw_free(plans_->buf);
  }
}

cplx SpectralGrid::xi(int i, int j) const {
  const int n = grid_.n;
  const double scale = kTwoPi / grid_.length;
  double kx = (i < n / 2 ? i : i - n) * scale;
  double ky = (j < n / 2 ? j : j - n) * scale;
  return {kx, ky};
}

ComplexGrid SpectralGrid::apply_multiplier(const ComplexGrid& field, int which) const {
  const int n = grid_.n;
  if (field.size() != grid_.size()) throw Error(ErrorCode::invalid_argument, "field does not match grid size");
  auto* buf = reinterpret_cast<cplx*>(plans_->buf);
  std::memcpy(buf, field.data(), sizeof(cplx) * field.size());
  fftw_execute(plans_->fwd);
  const cplx I{0.0, 1.0};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cplx x = xi(i, j);
      cplx m;
      if (x == 0.0) {
        m = which == kIdentity ? 1.0 : 0.0;
      } else {
        switch (which) {
          case kBeurling: m = std::conj(x) / x; break;
          case kCauchy: m = 2.0 / (I * x); break;
          case kDz: m = 0.5 * I * std::conj(x); break;
          case kDzbar: m = 0.5 * I * x; break;
          default: m = 1.0;
        }
      }
      buf[grid_.index(i, j)] *= m;
    }
  fftw_execute(plans_->bwd);
  ComplexGrid out(field.size());
  const double norm = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = buf[k] * norm;
  return out;
}

ComplexGrid SpectralGrid::beurling_periodic(const ComplexGrid& f) const { return apply_multiplier(f, kBeurling); }
ComplexGrid SpectralGrid::cauchy_periodic(const ComplexGrid& f) const { return apply_multiplier(f, kCauchy); }
ComplexGrid SpectralGrid::dz(const ComplexGrid& f) const { return apply_multiplier(f, kDz); }
ComplexGrid SpectralGrid::dzbar(const ComplexGrid& f) const { return apply_multiplier(f, kDzbar); }
ComplexGrid SpectralGrid::round_trip(const ComplexGrid& f) const { return apply_multiplier(f, kIdentity); }

bool SpectralGrid::margin_violated(const ComplexGrid& f) const {
  const int n = grid_.n;
  const int band = n / 4;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      bool outer = i < band || j < band || i >= n - band || j >= n - band;
      if (outer && std::abs(f[grid_.index(i, j)]) > 0.0) return true;
    }
  return false;
}

namespace {

constexpr int kSeriesTerms = 16;  // G_4 .. G_64; (1/sqrt 2)^63 ~ 3e-10 on the central half

// G_{4m} of the unit Gaussian lattice. G_{4m+2} vanishes by the i-symmetry.
const std::vector<double>& lattice_sums() {
  static const std::vector<double> sums = [] {
    std::vector<double> g(kSeriesTerms, 0.0);
    g[0] = kSquareLatticeG4;
    const int R = 24;
    for (int m = 1; m < kSeriesTerms; ++m) {
      const int p = 4 * (m + 1);
      double s = 0.0;
      for (int a = -R; a <= R; ++a)
        for (int b = -R; b <= R; ++b) {
          if (a == 0 && b == 0) continue;
          s += std::pow(cplx(a, b), -p).real();
        }
      g[m] = s;
    }
    return g;
  }();
  return sums;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Scaled moments P_k = sum f (w/L)^k h^2, w relative to the box centre, and sum f conj(w/L) h^2.
struct Moments {
  std::vector<cplx> p;
  cplx pbar1;
};

Moments moments(const Grid& g, const ComplexGrid& f, int degree) {
  Moments m{std::vector<cplx>(degree + 1), 0.0};
  const double area = g.h() * g.h();
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      cplx v = f[g.index(i, j)];
      if (v == 0.0) continue;
      cplx w = (g.point(i, j) - g.center) / g.length;
      cplx wk = v * area;
      for (int k = 0; k <= degree; ++k) {
        m.p[k] += wk;
        wk *= w;
      }
      m.pbar1 += v * std::conj(w) * area;
    }
  return m;
}

// Coefficients (in the scaled variable z/L) of the polynomial
//   sum_m G_{4m} d^s/dz^s (z - w)^{4m-1}, integrated against f,
// for s = 0 (Cauchy) or s = 1 (Beurling), keeping the first `terms` lattice sums.
std::vector<cplx> correction_poly(const Moments& mom, int terms, int s) {
  const auto& g = lattice_sums();
  const int top = 4 * terms - 1 - s;
  std::vector<cplx> c(top + 1, 0.0);
  for (int m = 1; m <= terms; ++m) {
    int p = 4 * m - 1;
    double factor = g[m - 1] * (s == 1 ? p : 1.0);
    int q = p - s;
    for (int k = 0; k <= q; ++k) {
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      c[q - k] += factor * sign * binomial(q, k) * mom.p[k];
    }
  }
  return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

bool central_half(const Grid& g, cplx z) {
  cplx d = z - g.center;
  return std::max(std::abs(d.real()), std::abs(d.imag())) <= 0.25 * g.length;
}

}  // namespace

// The zero-mean periodic kernel of d/dzbar on the square lattice of side L is
//   K(u) = 1/(pi u) - conj(u)/L^2 - (1/pi) sum_m G_{4m} L^{-4m} u^{4m-1},
// so the free-space transforms differ from the periodic ones by polynomials
// in z whose coefficients are moments of the input. The series converges for
// |u| < L; it is summed in full on the central half of the box (which holds
// the support) and truncated after the cubic term in the margin band.

TransformResult SpectralGrid::cauchy(const ComplexGrid& f) const {
  TransformResult r{cauchy_periodic(f), margin_violated(f)};
  const Moments mom = moments(grid_, f, 4 * kSeriesTerms);
  const auto full = correction_poly(mom, kSeriesTerms, 0);
  const auto cubic = correction_poly(mom, 1, 0);
  const double L = grid_.length;
  for (int j = 0; j < grid_.n; ++j)
    for (int i = 0; i < grid_.n; ++i) {
      cplx zp = grid_.point(i, j);
      cplx z = (zp - grid_.center) / L;
      cplx linear = (std::conj(z) * mom.p[0] - mom.pbar1) / L;
      cplx series = horner(central_half(grid_, zp) ? full : cubic, z) / (kPi * L);
      r.values[grid_.index(i, j)] += linear + series;
    }
  return r;
}

TransformResult SpectralGrid::beurling(const ComplexGrid& f) const {
  TransformResult r{beurling_periodic(f), margin_violated(f)};
  const Moments mom = moments(grid_, f, 4 * kSeriesTerms);
  const auto full = correction_poly(mom, kSeriesTerms, 1);
  const auto cubic = correction_poly(mom, 1, 1);
  const double L = grid_.length;
  for (int j = 0; j < grid_.n; ++j)
    for (int i = 0; i < grid_.n; ++i) {
      cplx zp = grid_.point(i, j);
      cplx z = (zp - grid_.center) / L;
      r.values[grid_.index(i, j)] += horner(central_half(grid_, zp) ? full : cubic, z) / (kPi * L * L);
    }
  return r;
}

double SpectralGrid::parseval_ratio(const ComplexGrid& f) const {
  auto* buf = reinterpret_cast<cplx*>(plans_->buf);
  std::memcpy(buf, f.data(), sizeof(cplx) * f.size());
  fftw_execute(plans_->fwd);
  double spec = 0.0, phys = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    spec += std::norm(buf[k]);
    phys += std::norm(f[k]);
  }
  return phys / (spec / static_cast<double>(f.size()));
}

double l2_norm(const ComplexGrid& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace beltrami
