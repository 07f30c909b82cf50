#include "beltrami/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace beltrami {

namespace {

constexpr int kCircleVertices = 1024;

std::vector<cplx> circle_polyline(double radius, int n) {
  std::vector<cplx> v(n);
  for (int k = 0; k < n; ++k) v[k] = std::polar(radius, kTwoPi * k / n);
  return v;
}

}  // namespace

bool DomainSpec::contains(cplx z) const {
  switch (kind) {
    case DomainKind::disk: return std::abs(z) < 1.0;
    case DomainKind::slit_disk:
      return std::abs(z) < 1.0 && !(z.imag() == 0.0 && z.real() >= 0.0);
    case DomainKind::annulus: {
      double r = std::abs(z);
      return r > inner_radius && r < 1.0;
    }
    case DomainKind::jordan_polyline: return point_in_polygon(boundary, z);
    case DomainKind::plane: return true;
  }
  return false;
}

std::pair<cplx, cplx> DomainSpec::bounding_box() const {
  if (boundary.empty()) return {{-1.0, -1.0}, {1.0, 1.0}};
  double xl = boundary[0].real(), xh = xl, yl = boundary[0].imag(), yh = yl;
  for (const auto& p : boundary) {
    xl = std::min(xl, p.real());
    xh = std::max(xh, p.real());
    yl = std::min(yl, p.imag());
    yh = std::max(yh, p.imag());
  }
  return {{xl, yl}, {xh, yh}};
}

PrimeEndChart::PrimeEndChart(DomainSpec domain, std::shared_ptr<const ConformalMap> map)
    : domain_(std::move(domain)), map_(std::move(map)) {}

std::shared_ptr<const PrimeEndChart> polyline_domain(std::span<const cplx> vertices, cplx anchor) {
  DomainSpec d;
  d.id = "jordan-polyline";
  d.kind = DomainKind::jordan_polyline;
  d.boundary.assign(vertices.begin(), vertices.end());
  if (d.boundary.size() > 1 && d.boundary.front() == d.boundary.back()) d.boundary.pop_back();
  if (signed_area(d.boundary) < 0) std::reverse(d.boundary.begin(), d.boundary.end());
  for (const auto& p : d.boundary)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error(ErrorCode::invalid_argument, "polyline vertex is not finite");
  for (const auto& p : d.boundary) {
    d.params.push_back(p.real());
    d.params.push_back(p.imag());
  }
  auto map = std::make_shared<ConformalMap>(zipper_map(d.boundary, anchor));
  return std::make_shared<PrimeEndChart>(std::move(d), std::move(map));
}

std::shared_ptr<const PrimeEndChart> catalog_domain(const std::string& id, std::span<const double> params) {
  DomainSpec d;
  d.id = id;
  d.params.assign(params.begin(), params.end());
  if (id == "disk") {
    d.kind = DomainKind::disk;
    d.boundary = circle_polyline(1.0, kCircleVertices);
    auto map = std::make_shared<ConformalMap>(catalog_map("identity-disk"));
    return std::make_shared<PrimeEndChart>(std::move(d), std::move(map));
  }
  if (id == "slit-disk") {
    d.kind = DomainKind::slit_disk;
    auto map = std::make_shared<ConformalMap>(catalog_map("slit-disk"));
    d.boundary.resize(kCircleVertices);
    for (int k = 0; k < kCircleVertices; ++k)
      d.boundary[k] = map->forward(std::polar(1.0, kTwoPi * k / kCircleVertices));
    return std::make_shared<PrimeEndChart>(std::move(d), std::move(map));
  }
  if (id == "annulus") {
    if (params.size() != 1 || !(params[0] > 0.0 && params[0] < 1.0))
      throw Error(ErrorCode::invalid_argument, "annulus needs one inner radius rho in (0,1)");
    d.kind = DomainKind::annulus;
    d.connectivity = 2;
    d.inner_radius = params[0];
    d.boundary = circle_polyline(1.0, kCircleVertices);
    d.inner_boundary = circle_polyline(params[0], kCircleVertices);
    auto map = std::make_shared<ConformalMap>(catalog_map("annulus-identity"));
    return std::make_shared<PrimeEndChart>(std::move(d), std::move(map));
  }
  if (id == "jordan-polyline") {
    if (params.size() < 32 || params.size() % 2 != 0)
      throw Error(ErrorCode::invalid_argument,
                  "jordan-polyline needs at least 16 vertices given as x,y pairs");
    std::vector<cplx> v;
    for (std::size_t k = 0; k < params.size(); k += 2) v.emplace_back(params[k], params[k + 1]);
    cplx centroid = 0.0;
    for (const auto& p : v) centroid += p;
    centroid /= double(v.size());
    return polyline_domain(v, centroid);
  }
  if (id == "plane") {
    d.kind = DomainKind::plane;
    auto map = std::make_shared<ConformalMap>(catalog_map("identity-disk"));
    return std::make_shared<PrimeEndChart>(std::move(d), std::move(map));
  }
  throw Error(ErrorCode::unknown_id, "unknown domain id: " + id);
}

cplx approach_point(const ApproachPath& path, std::size_t index) {
  if (index >= path.radii.size())
    throw Error(ErrorCode::invalid_argument, "approach index " + std::to_string(index) + " out of range");
  return path.chart->point(path.end_angle, path.radii[index]);
}

std::vector<double> dyadic_approach_radii(int kmin, int kmax) {
  std::vector<double> r;
  for (int k = kmin; k <= kmax; ++k) r.push_back(1.0 - std::ldexp(1.0, -k));
  return r;
}

}  // namespace beltrami
