#pragma once

#include <functional>
#include <string>
#include <vector>

#include "beltrami/common.hpp"

namespace beltrami {

/// Real samples at M equispaced angles 2 pi k / M on each reference circle.
/// Circle 0 is |z| = 1; for the annulus, circle 1 is |z| = rho.
struct BoundaryData {
  std::vector<std::vector<double>> circles;

  int samples() const { return circles.empty() ? 0 : static_cast<int>(circles[0].size()); }
  /// Largest jump between neighbouring samples, over all circles.
  double continuity_modulus() const;
  void validate(int expected_circles) const;
};

BoundaryData sample_boundary(const std::function<double(double)>& phi, int m);
BoundaryData sample_boundary(const std::function<double(double)>& outer,
                             const std::function<double(double)>& inner, int m);
/// Periodic linear interpolation of scattered (angle, value) pairs, resampled to m points.
std::vector<double> resample_periodic(std::vector<std::pair<double, double>> points, int m);

/// Trapezoidal Schwarz integral (1/M) sum phi_k (zeta_k + z)/(zeta_k - z).
/// Rejects |z| > 1 - 2 pi / M.
cplx schwarz_integral(const BoundaryData& data, cplx z);

/// The same holomorphic function in series form, built from the DFT of the
/// samples. Its real part on the circle is the trigonometric interpolant of
/// the data, so it stays usable up to and on the boundary.
class SchwarzSeries {
 public:
  explicit SchwarzSeries(const BoundaryData& data);
  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  int samples() const { return m_; }

 private:
  int m_ = 0;
  std::vector<cplx> coeff_;  ///< h = sum coeff_n z^n
};

struct AnnulusHarmonic {
  double rho = 0.5;
  double c0 = 0.0;
  double constant = 0.0;
  /// u = constant + c0 log r + sum Re[(a_n r^n + b_n (rho/r)^n) e^{i n theta}].
  std::vector<cplx> a;
  std::vector<cplx> b;
  int n_max = 0;
  double boundary_error = 0.0;
  bool truncated = false;
  std::string warning;

  double u(cplx z) const;
  /// Single-valued part of H = u + iv, i.e. H minus c0 log z.
  cplx regular_part(cplx z) const;
};

AnnulusHarmonic annulus_dirichlet(const BoundaryData& data, double rho, int n_max = 64);

inline double conjugate_period(const AnnulusHarmonic& h) { return kTwoPi * h.c0; }

/// Continuation of H along a polyline with v(start) = 0.
/// Rejects paths leaving the open annulus.
cplx multivalent_eval(const AnnulusHarmonic& h, const std::vector<cplx>& path);

/// Flux of grad u across a circle, from fourth-order finite differences of u:
/// equals the conjugate period of u around that circle.
double flux_period(const std::function<double(cplx)>& u, cplx center, double radius, int samples = 512,
                   double step = 1e-3);

}  // namespace beltrami
