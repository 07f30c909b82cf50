#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "beltrami/common.hpp"

namespace beltrami {

// Elementary invertible maps. Each one is stored in the domain -> canonical
// direction; `apply` evaluates that direction and `unapply` its inverse.

struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
};

/// Principal square root, image in the right half-plane.
struct PrincipalSqrt {};

/// w = sign * z^2. The inverse picks the root in the first (sign=+1) or
/// second (sign=-1) quadrant, so upper half-plane -> quadrant.
struct Square {
  int sign = 1;
};

/// Opening map of the zipper: w = i*sqrt((z - z1)/(z - z0)), sending the
/// complement of the segment [z0, z1] onto the upper half-plane.
struct ZipperStart {
  cplx z0, z1;
};

/// Geodesic slit map: removes the arc of the circle orthogonal to the real
/// axis joining 0 to a point `a` of the upper half-plane, with a -> 0.
/// `binv` = Re a / |a|^2 (the arc meets the axis again at 1/binv), `c` = |a|^2 / Im a.
struct Geodesic {
  double binv = 0.0;
  double c = 0.0;
};

using ElementaryMap = std::variant<Mobius, PrincipalSqrt, Square, ZipperStart, Geodesic>;

/// Value and complex derivative.
struct Jet {
  cplx value;
  cplx deriv;
};

cplx apply_map(const ElementaryMap& m, cplx z);
cplx unapply_map(const ElementaryMap& m, cplx w);
Jet apply_map_jet(const ElementaryMap& m, Jet z);
Geodesic make_geodesic(cplx a);

enum class CanonicalDomain { disk, annulus, plane };

/// Conformal map between a canonical domain and a computational domain.
/// forward: canonical -> domain. inverse: domain -> canonical.
class ConformalMap {
 public:
  ConformalMap() = default;
  ConformalMap(std::string label, CanonicalDomain canonical, std::vector<ElementaryMap> steps);

  cplx forward(cplx zeta) const;
  cplx inverse(cplx z) const;
  /// Derivative of the domain -> canonical direction.
  Jet inverse_jet(cplx z) const;
  /// Derivative of the canonical -> domain direction, via the inverse function rule.
  cplx forward_derivative(cplx zeta) const;

  const std::string& label() const { return label_; }
  CanonicalDomain canonical() const { return canonical_; }
  const std::vector<ElementaryMap>& steps() const { return steps_; }
  double accuracy() const { return accuracy_; }
  void set_accuracy(double a) { accuracy_ = a; }

  /// Canonical-circle angles of the polyline vertices (zipper maps only), in input order.
  const std::vector<double>& vertex_angles() const { return vertex_angles_; }
  void set_vertex_angles(std::vector<double> a) { vertex_angles_ = std::move(a); }

  /// Max |inverse(forward(zeta)) - zeta| over `samples` points on |zeta| = radius.
  double round_trip_error(double radius, int samples = 1000) const;

  std::string to_json() const;
  static ConformalMap from_json(const std::string& text);

 private:
  std::string label_ = "identity-disk";
  CanonicalDomain canonical_ = CanonicalDomain::disk;
  std::vector<ElementaryMap> steps_;
  double accuracy_ = 0.0;
  std::vector<double> vertex_angles_;
};

/// Explicit maps: identity-disk, slit-disk, inversion, annulus-identity, affine.
/// `affine` takes params {Re a, Im a, Re b, Im b} for zeta -> a*zeta + b.
ConformalMap catalog_map(const std::string& id, std::span<const double> params = {});

/// Geodesic zipper map of the closed polyline `boundary` (last vertex joins the
/// first). Normalised so forward(0) = anchor and forward'(0) > 0.
ConformalMap zipper_map(std::span<const cplx> boundary, cplx anchor);

// Polyline helpers shared with the geometry and pipeline modules.
double signed_area(std::span<const cplx> poly);
bool point_in_polygon(std::span<const cplx> poly, cplx z);
/// True when two non-adjacent edges of the closed polyline intersect.
bool polyline_self_crosses(std::span<const cplx> poly);
std::vector<cplx> read_polyline_csv(const std::string& path);

}  // namespace beltrami
