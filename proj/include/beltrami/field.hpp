#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "beltrami/common.hpp"
#include "beltrami/geometry.hpp"

namespace beltrami {

/// K = (1 + |mu|) / (1 - |mu|). Rejects |mu| >= 1.
double dilatation(cplx mu);

/// Sampling lattice for a domain: square box twice the domain's bounding box,
/// so any field supported in the domain keeps a 25% zero margin on every side.
Grid domain_grid(const DomainSpec& domain, int n);

/// Complex coefficient sampled on a grid; mu = 0 outside the domain.
struct MuField {
  Grid grid;
  std::vector<cplx> values;
  std::string profile;
  std::vector<double> params;
  /// Closed-form evaluator for catalog profiles (empty for custom grids).
  std::function<cplx(cplx)> exact;
  std::function<bool(cplx)> inside;
  /// Points where |mu| -> 1 (boundary-log, power-log profiles).
  std::vector<cplx> singular_points;
  /// Radial truncation level applied to the samples (0 when none).
  double truncation = 0.0;

  cplx at(cplx z) const;
  double sup_norm() const;
};

struct MuProfile {
  std::string name;
  std::vector<double> params;
  std::string csv_path;  // custom-grid only
};

/// Profiles: zero; constant [k] or [re, im]; radial-power [a]; boundary-log [x0, y0];
/// power-log [s, q, x0, y0] (K = r^-s log^q(1/r)); custom-grid (CSV x,y,Re mu,Im mu).
/// `truncation` > 0 permits radially rescaling samples with |mu| > 1 - truncation.
MuField sample_mu(const MuProfile& profile, const DomainSpec& domain, int n, double truncation = 0.0);

/// Rescale every sample with |mu| > 1 - eps to modulus 1 - eps.
MuField truncate_mu(MuField mu, double eps);

/// Dilatation quotient derived from a MuField (or from a closed-form K).
struct DilatationField {
  Grid grid;
  std::vector<double> values;
  std::function<double(cplx)> exact;
  std::function<bool(cplx)> inside;
  std::vector<cplx> singular_points;

  /// K at z, zero outside the domain.
  double at(cplx z) const;
  bool in_domain(cplx z) const { return !inside || inside(z); }
};

DilatationField dilatation_field(const MuField& mu);

/// Closed-form K on the whole plane (criteria checks on profile catalogs).
DilatationField dilatation_from_function(std::function<double(cplx)> k, Grid grid,
                                         std::vector<cplx> singular_points = {},
                                         std::function<bool(cplx)> inside = {});

/// K(z) = max(1, r^-s log^q(1/r)), r = |z - z0| (r < 1), K = 1 for r >= 1.
double power_log_k(double r, double s, double q);

struct RadialProfile {
  cplx center;
  std::vector<double> radii;
  std::vector<double> circle_norm;  ///< arc-length integral of K over |z - z0| = r
  std::vector<double> circle_mean;  ///< circle_norm / (2 pi r)
  double resolution = 0.0;
};

RadialProfile radial_profile(const DilatationField& k, cplx z0, const std::vector<double>& radii);

/// Increasing radii eps0 * 2^-k for k = levels-1 .. 0.
std::vector<double> dyadic_radii(double eps0, int levels);

}  // namespace beltrami
