#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/conformal.hpp"
#include "beltrami/criteria.hpp"
#include "beltrami/field.hpp"
#include "beltrami/geometry.hpp"
#include "beltrami/harmonic.hpp"
#include "beltrami/solver.hpp"

namespace beltrami {

/// Boundary function of a prime end, given by its chart circle and angle.
struct PhiSpec {
  std::string text;
  std::function<double(int circle, double angle)> value;
};

/// Forms: cos; constant:c; fourier:a0,a1,b1,a2,b2,...; jump[:delta] (+1 on the
/// upper slit side, -1 on the lower, linear ramps of half-width delta at the
/// tip and at the opposite point); plane-x (Re of the prime end's impression,
/// a plane-point function); annulus:inner,outer; csv:path (angle,value rows).
PhiSpec parse_phi(const std::string& text, std::shared_ptr<const PrimeEndChart> chart);

struct DirichletProblem {
  std::shared_ptr<const PrimeEndChart> chart;
  MuField mu;
  PhiSpec phi;
  int samples = 256;  ///< boundary samples M
  SolverOptions solver;
  double verify_eps = 1e-2;
};

struct RegularSolution {
  std::shared_ptr<const PrimeEndChart> chart;
  std::optional<QcMap> F;  ///< absent when mu = 0 (F is the identity)
  std::shared_ptr<const ConformalMap> rstar;  ///< image domain -> disk
  std::vector<cplx> image_boundary;
  BoundaryData transported;  ///< phi resampled on the disk after g*
  std::shared_ptr<const SchwarzSeries> h;
  bool converged = true;
  double composite_residual = 0.0;  ///< relative L2 of f_zbar - mu f_z on interior cells
  JacobianReport composite_jacobian;
  double map_accuracy = 0.0;

  /// g(z) = R*(F(z)), the domain -> disk map.
  cplx g(cplx z) const;
  cplx operator()(cplx z) const { return (*h)(g(z)); }
};

RegularSolution solve_regular(const DirichletProblem& problem);

/// Values of f on the domain cells of the mu grid, NaN outside.
ComplexGrid sample_solution(const RegularSolution& s, const Grid& grid, const DomainSpec& domain);

struct MultivalentSolution {
  double rho = 0.5;        ///< inner radius of the domain annulus
  double image_rho = 0.5;  ///< inner radius of the canonical annulus
  double measured_image_rho = 0.0;  ///< grid-solver estimate when mu != 0, else exact
  double exponent = 0.0;   ///< g(z) = z |z|^{2a}
  AnnulusHarmonic u;
  double period = 0.0;
  double max_re_jump = 0.0;
  double max_im_jump_error = 0.0;  ///< | Im jump - winding * period | over the loop family
  int loops = 0;

  cplx g(cplx z) const { return z * std::pow(std::abs(z), 2.0 * exponent); }
  double re_f(cplx z) const { return u.u(g(z)); }
};

MultivalentSolution solve_multivalent(const DirichletProblem& problem, int loops = 100, std::uint64_t seed = 1,
                                      int grid_n = 0);

struct PrimeEndResidual {
  double angle = 0.0;
  int circle = 0;
  double phi = 0.0;
  std::vector<double> radii;
  std::vector<double> values;  ///< Re f along the approach path
  std::vector<double> limits;  ///< extrapolated limits over the tail
  double residual = 0.0;       ///< max over the last 5 extrapolated limits of |L - phi|
  double raw_residual = 0.0;   ///< max over the last 5 points of |Re f - phi|
};

struct BoundaryReport {
  std::vector<PrimeEndResidual> ends;
  double p95 = 0.0;
  double max = 0.0;
  double eps = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Approach paths at `count` equispaced chart angles plus `extra_angles`.
BoundaryReport verify_boundary(const std::function<double(cplx)>& re_f, const PrimeEndChart& chart,
                               const PhiSpec& phi, double eps, int count = 64,
                               const std::vector<double>& extra_angles = {}, int kmin = 3, int kmax = 12);

struct ExtensionEnd {
  double angle = 0.0;
  std::vector<double> forward;  ///< diameters of images of chart neighbourhoods, k = 1..depth
  std::vector<double> inverse;  ///< diameters of preimages of image-plane disks
  bool forward_ok = false;
  bool inverse_ok = false;
  std::size_t inverse_failures = 0;
  std::size_t inverse_probes = 0;
};

struct ExtensionReport {
  std::vector<ExtensionEnd> ends;
  double eps = 1e-2;
  std::string verdict;  ///< consistent-with-extension, not-consistent or inconclusive
  nlohmann::json to_json() const;
};

/// Oscillation decay of F and F^-1 at prime ends of a simply connected chart.
ExtensionReport verify_extension(const QcMap& F, const PrimeEndChart& chart, int count = 16, int depth = 12,
                                 double eps = 1e-2);

/// Conjugate period of Re f around a closed loop of a simply connected domain: the
/// circle itself when mu = 0, otherwise the preimage under g of a canonical-disk circle.
double monodromy_period(const RegularSolution& s, cplx center, double radius);

/// Symbolic profile of catalog power-log mu fields at their singular point.
std::optional<PowerLogSymbol> power_log_symbol(const MuField& mu);

}  // namespace beltrami
