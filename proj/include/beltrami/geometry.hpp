#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "beltrami/common.hpp"
#include "beltrami/conformal.hpp"

namespace beltrami {

enum class DomainKind { disk, slit_disk, annulus, jordan_polyline, plane };

struct DomainSpec {
  std::string id;
  DomainKind kind = DomainKind::disk;
  std::vector<double> params;
  /// Outer boundary, counter-clockwise. The slit disk traverses its slit twice.
  std::vector<cplx> boundary;
  /// Inner circle of the annulus (empty otherwise).
  std::vector<cplx> inner_boundary;
  int connectivity = 1;
  double inner_radius = 0.0;

  bool contains(cplx z) const;
  /// Axis-aligned bounding box as {lower-left, upper-right}.
  std::pair<cplx, cplx> bounding_box() const;
};

/// Prime ends of the domain, parametrised by angles on the reference circle(s).
class PrimeEndChart {
 public:
  PrimeEndChart(DomainSpec domain, std::shared_ptr<const ConformalMap> map);

  const DomainSpec& domain() const { return domain_; }
  const ConformalMap& reference_map() const { return *map_; }
  std::shared_ptr<const ConformalMap> reference_map_ptr() const { return map_; }
  int circle_count() const { return domain_.kind == DomainKind::annulus ? 2 : 1; }

  /// psi(r e^{i theta}).
  cplx point(double angle, double radius) const { return map_->forward(std::polar(radius, angle)); }
  /// Reference-circle angle of an interior point.
  double angle_of(cplx z) const { return std::arg(map_->inverse(z)); }

 private:
  DomainSpec domain_;
  std::shared_ptr<const ConformalMap> map_;
};

/// Radial approach path toward the prime end at `end_angle`. `circle` is 0 for
/// the outer circle (radii increase to 1) and 1 for the inner annulus circle
/// (radii decrease to the inner radius).
struct ApproachPath {
  std::shared_ptr<const PrimeEndChart> chart;
  double end_angle = 0.0;
  std::vector<double> radii;
  int circle = 0;
};

/// Builds a catalog domain and its chart. ids: disk, slit-disk, annulus [rho],
/// jordan-polyline [x0, y0, x1, y1, ...].
std::shared_ptr<const PrimeEndChart> catalog_domain(const std::string& id, std::span<const double> params = {});

/// Jordan polyline domain from explicit vertices; chart built by the zipper.
std::shared_ptr<const PrimeEndChart> polyline_domain(std::span<const cplx> vertices, cplx anchor);

cplx approach_point(const ApproachPath& path, std::size_t index);

/// Radii 1 - 2^-k for k = kmin..kmax.
std::vector<double> dyadic_approach_radii(int kmin = 3, int kmax = 12);

}  // namespace beltrami
