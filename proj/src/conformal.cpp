#include "beltrami/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace beltrami {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const cplx I{0.0, 1.0};

cplx mobius(const Mobius& m, cplx z) {
  if (is_infinite(z)) return m.c == 0.0 ? kInfinity : m.a / m.c;
  cplx den = m.c * z + m.d;
  if (den == 0.0) return kInfinity;
  return (m.a * z + m.b) / den;
}

Mobius mobius_inverse(const Mobius& m) { return {m.d, -m.b, -m.c, m.a}; }

cplx geodesic_forward(const Geodesic& g, cplx z) {
  cplx t;
  if (is_infinite(z)) {
    if (g.binv == 0.0) return kInfinity;
    t = -1.0 / g.binv;
  } else {
    cplx den = 1.0 - z * g.binv;
    if (den == 0.0) return kInfinity;
    t = z / den;
  }
  if (t == 0.0) return {g.c, 0.0};
  return t * std::sqrt(1.0 + g.c * g.c / (t * t));
}

cplx geodesic_inverse(const Geodesic& g, cplx w) {
  cplx t;
  if (is_infinite(w)) {
    if (g.binv == 0.0) return kInfinity;
    return -1.0 / g.binv;
  }
  if (w == 0.0) {
    t = I * g.c;
  } else {
    t = w * std::sqrt(1.0 - g.c * g.c / (w * w));
  }
  cplx den = 1.0 + t * g.binv;
  if (den == 0.0) return kInfinity;
  return t / den;
}

}  // namespace

Geodesic make_geodesic(cplx a) {
  double m2 = std::norm(a);
  return {a.real() / m2, m2 / a.imag()};
}

cplx apply_map(const ElementaryMap& m, cplx z) {
  return std::visit(
      overloaded{
          [&](const Mobius& mm) { return mobius(mm, z); },
          [&](const PrincipalSqrt&) { return is_infinite(z) ? kInfinity : std::sqrt(z); },
          [&](const Square& s) { return is_infinite(z) ? kInfinity : double(s.sign) * z * z; },
          [&](const ZipperStart& zs) {
            if (is_infinite(z)) return I;
            if (z == zs.z0) return kInfinity;
            return I * std::sqrt((z - zs.z1) / (z - zs.z0));
          },
          [&](const Geodesic& g) { return geodesic_forward(g, z); },
      },
      m);
}

cplx unapply_map(const ElementaryMap& m, cplx w) {
  return std::visit(
      overloaded{
          [&](const Mobius& mm) { return mobius(mobius_inverse(mm), w); },
          [&](const PrincipalSqrt&) { return is_infinite(w) ? kInfinity : w * w; },
          [&](const Square& s) {
            if (is_infinite(w)) return kInfinity;
            cplx r = std::sqrt(double(s.sign) * w);
            return s.sign > 0 ? r : -r;
          },
          [&](const ZipperStart& zs) {
            if (is_infinite(w)) return zs.z0;
            cplx u = -w * w;
            if (u == 1.0) return kInfinity;
            return (zs.z1 - u * zs.z0) / (1.0 - u);
          },
          [&](const Geodesic& g) { return geodesic_inverse(g, w); },
      },
      m);
}

Jet apply_map_jet(const ElementaryMap& m, Jet j) {
  const cplx z = j.value;
  return std::visit(
      overloaded{
          [&](const Mobius& mm) {
            cplx den = mm.c * z + mm.d;
            return Jet{mobius(mm, z), j.deriv * (mm.a * mm.d - mm.b * mm.c) / (den * den)};
          },
          [&](const PrincipalSqrt&) {
            cplx s = std::sqrt(z);
            return Jet{s, j.deriv / (2.0 * s)};
          },
          [&](const Square& s) { return Jet{double(s.sign) * z * z, j.deriv * 2.0 * double(s.sign) * z}; },
          [&](const ZipperStart& zs) {
            cplx u = (z - zs.z1) / (z - zs.z0);
            cplx su = std::sqrt(u);
            cplx du = (zs.z1 - zs.z0) / ((z - zs.z0) * (z - zs.z0));
            return Jet{I * su, j.deriv * I * du / (2.0 * su)};
          },
          [&](const Geodesic& g) {
            cplx den = 1.0 - z * g.binv;
            cplx t = z / den;
            cplx s = std::sqrt(1.0 + g.c * g.c / (t * t));
            return Jet{t * s, j.deriv / (den * den) / s};
          },
      },
      m);
}

ConformalMap::ConformalMap(std::string label, CanonicalDomain canonical,
                           std::vector<ElementaryMap> steps)
    : label_(std::move(label)), canonical_(canonical), steps_(std::move(steps)) {}

cplx ConformalMap::inverse(cplx z) const {
  for (const auto& s : steps_) z = apply_map(s, z);
  return z;
}

cplx ConformalMap::forward(cplx zeta) const {
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) zeta = unapply_map(*it, zeta);
  return zeta;
}

Jet ConformalMap::inverse_jet(cplx z) const {
  Jet j{z, 1.0};
  for (const auto& s : steps_) j = apply_map_jet(s, j);
  return j;
}

cplx ConformalMap::forward_derivative(cplx zeta) const {
  return 1.0 / inverse_jet(forward(zeta)).deriv;
}

double ConformalMap::round_trip_error(double radius, int samples) const {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    cplx zeta = std::polar(radius, kTwoPi * k / samples);
    worst = std::max(worst, std::abs(inverse(forward(zeta)) - zeta));
  }
  return worst;
}

// ---- JSON chain format ------------------------------------------------------

namespace {

using nlohmann::json;

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }
cplx cparse(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* canonical_name(CanonicalDomain c) {
  switch (c) {
    case CanonicalDomain::disk: return "disk";
    case CanonicalDomain::annulus: return "annulus";
    case CanonicalDomain::plane: return "plane";
  }
  return "disk";
}

}  // namespace

std::string ConformalMap::to_json() const {
  json chain = json::array();
  for (const auto& s : steps_) {
    chain.push_back(std::visit(
        overloaded{
            [](const Mobius& m) {
              return json{{"type", "mobius"}, {"a", cjson(m.a)}, {"b", cjson(m.b)},
                          {"c", cjson(m.c)}, {"d", cjson(m.d)}};
            },
            [](const PrincipalSqrt&) { return json{{"type", "sqrt"}}; },
            [](const Square& q) { return json{{"type", "square"}, {"sign", q.sign}}; },
            [](const ZipperStart& z) {
              return json{{"type", "zipper-start"}, {"z0", cjson(z.z0)}, {"z1", cjson(z.z1)}};
            },
            [](const Geodesic& g) { return json{{"type", "geodesic"}, {"binv", g.binv}, {"c", g.c}}; },
        },
        s));
  }
  json out{{"label", label_},
           {"canonical", canonical_name(canonical_)},
           {"direction", "domain-to-canonical"},
           {"accuracy", accuracy_},
           {"chain", chain}};
  if (!vertex_angles_.empty()) out["vertex_angles"] = vertex_angles_;
  return out.dump(1);
}

ConformalMap ConformalMap::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("map JSON: ") + e.what());
  }
  std::vector<ElementaryMap> steps;
  for (const auto& s : j.at("chain")) {
    const auto type = s.at("type").get<std::string>();
    if (type == "mobius") {
      steps.emplace_back(Mobius{cparse(s.at("a")), cparse(s.at("b")), cparse(s.at("c")), cparse(s.at("d"))});
    } else if (type == "sqrt") {
      steps.emplace_back(PrincipalSqrt{});
    } else if (type == "square") {
      steps.emplace_back(Square{s.at("sign").get<int>()});
    } else if (type == "zipper-start") {
      steps.emplace_back(ZipperStart{cparse(s.at("z0")), cparse(s.at("z1"))});
    } else if (type == "geodesic") {
      steps.emplace_back(Geodesic{s.at("binv").get<double>(), s.at("c").get<double>()});
    } else {
      throw Error(ErrorCode::unknown_id, "unknown elementary map type: " + type);
    }
  }
  auto canon = j.value("canonical", std::string("disk"));
  CanonicalDomain c = canon == "annulus" ? CanonicalDomain::annulus
                      : canon == "plane" ? CanonicalDomain::plane
                                         : CanonicalDomain::disk;
  ConformalMap map(j.value("label", std::string("custom")), c, std::move(steps));
  map.set_accuracy(j.value("accuracy", 0.0));
  if (j.contains("vertex_angles")) map.set_vertex_angles(j["vertex_angles"].get<std::vector<double>>());
  return map;
}

// ---- catalog ----------------------------------------------------------------

ConformalMap catalog_map(const std::string& id, std::span<const double> params) {
  if (id == "identity-disk") return ConformalMap(id, CanonicalDomain::disk, {});
  if (id == "annulus-identity") return ConformalMap(id, CanonicalDomain::annulus, {});
  if (id == "inversion") {
    return ConformalMap(id, CanonicalDomain::plane, {Mobius{0.0, 1.0, 1.0, 0.0}});
  }
  if (id == "slit-disk") {
    // w -> -w -> sqrt (right half-disk) -> quadrant -> upper half-plane -> disk.
    // Symmetric under conjugation; the slit tip 0 goes to zeta = 1.
    return ConformalMap(id, CanonicalDomain::disk,
                        {Mobius{-1.0, 0.0, 0.0, 1.0}, PrincipalSqrt{}, Mobius{-1.0, I, 1.0, I},
                         Square{1}, Mobius{I, 1.0, 1.0, I}});
  }
  if (id == "affine") {
    if (params.size() != 4) throw Error(ErrorCode::invalid_argument, "affine needs 4 params");
    cplx a{params[0], params[1]}, b{params[2], params[3]};
    if (a == 0.0) throw Error(ErrorCode::invalid_argument, "affine map with zero scale");
    return ConformalMap(id, CanonicalDomain::disk, {Mobius{1.0, -b, 0.0, a}});
  }
  throw Error(ErrorCode::unknown_id, "unknown conformal catalog id: " + id);
}

// ---- polylines --------------------------------------------------------------

double signed_area(std::span<const cplx> p) {
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const cplx u = p[k], v = p[(k + 1) % p.size()];
    a += u.real() * v.imag() - v.real() * u.imag();
  }
  return 0.5 * a;
}

bool point_in_polygon(std::span<const cplx> p, cplx z) {
  bool inside = false;
  for (std::size_t k = 0, j = p.size() - 1; k < p.size(); j = k++) {
    const cplx a = p[k], b = p[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_seg = [](cplx a, cplx b, cplx c) {
    return std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
  };
  if (d1 == 0 && on_seg(q1, q2, p1)) return true;
  if (d2 == 0 && on_seg(q1, q2, p2)) return true;
  if (d3 == 0 && on_seg(p1, p2, q1)) return true;
  if (d4 == 0 && on_seg(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool polyline_self_crosses(std::span<const cplx> p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = p[i], b = p[(i + 1) % n];
    double xlo = std::min(a.real(), b.real()), xhi = std::max(a.real(), b.real());
    double ylo = std::min(a.imag(), b.imag()), yhi = std::max(a.imag(), b.imag());
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const cplx c = p[j], d = p[(j + 1) % n];
      if (std::max(c.real(), d.real()) < xlo || std::min(c.real(), d.real()) > xhi ||
          std::max(c.imag(), d.imag()) < ylo || std::min(c.imag(), d.imag()) > yhi)
        continue;
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

std::vector<cplx> read_polyline_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open polyline CSV: " + path);
  std::vector<cplx> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) continue;  // header or junk row
    pts.emplace_back(x, y);
  }
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

// ---- zipper -----------------------------------------------------------------

ConformalMap zipper_map(std::span<const cplx> boundary_in, cplx anchor) {
  std::vector<cplx> pts(boundary_in.begin(), boundary_in.end());
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  const std::size_t n = pts.size();
  if (n < 16) throw Error(ErrorCode::invalid_argument, "zipper needs at least 16 vertices");
  if (polyline_self_crosses(pts))
    throw Error(ErrorCode::domain_error, "zipper: polyline is self-crossing");
  if (!point_in_polygon(pts, anchor))
    throw Error(ErrorCode::domain_error, "zipper: anchor lies outside the polyline");

  // Work on a counter-clockwise copy; angles are mapped back to input order at the end.
  const bool reversed = signed_area(pts) < 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = reversed ? (n - k) % n : k;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = pts[order[k]];

  std::vector<ElementaryMap> steps;
  steps.emplace_back(ZipperStart{z[0], z[1]});
  std::vector<cplx> img(n);
  for (std::size_t k = 2; k < n; ++k) img[k] = apply_map(steps[0], z[k]);
  cplx tail = kInfinity;  // image of z[0]

  for (std::size_t k = 2; k < n; ++k) {
    cplx a = img[k];
    if (!(a.imag() > 0.0))
      throw Error(ErrorCode::domain_error,
                  "zipper: boundary vertex " + std::to_string(order[k]) +
                      " left the upper half-plane (polyline too coarse near a sharp feature)");
    Geodesic g = make_geodesic(a);
    steps.emplace_back(g);
    for (std::size_t j = k + 1; j < n; ++j) img[j] = apply_map(g, img[j]);
    tail = apply_map(g, tail);
  }

  Mobius to_ray{1.0, 0.0, is_infinite(tail) ? 0.0 : -1.0 / tail, 1.0};
  steps.emplace_back(to_ray);
  cplx qa = anchor;
  for (const auto& s : steps) qa = apply_map(s, qa);
  Square sq{(qa * qa).imag() > 0.0 ? 1 : -1};
  steps.emplace_back(sq);
  cplx wa = double(sq.sign) * qa * qa;

  // Upper half-plane -> disk with anchor -> 0, then rotate for a positive derivative.
  steps.emplace_back(Mobius{1.0, -wa, 1.0, -std::conj(wa)});
  ConformalMap trial("zipper", CanonicalDomain::disk, steps);
  cplx d = trial.inverse_jet(anchor).deriv;
  cplx rot = std::polar(1.0, -std::arg(d));
  steps.back() = Mobius{rot, -rot * wa, 1.0, -std::conj(wa)};

  ConformalMap map("zipper", CanonicalDomain::disk, std::move(steps));

  // Boundary correspondence: evaluate each vertex a hair inside the domain.
  std::vector<double> angles(n);
  double scale = 0.0;
  for (const auto& p : z) scale = std::max(scale, std::abs(p - anchor));
  for (std::size_t k = 0; k < n; ++k) {
    cplx prev = z[(k + n - 1) % n], next = z[(k + 1) % n];
    cplx tangent = next - prev;
    cplx inward = I * tangent / std::abs(tangent);
    angles[order[k]] = std::arg(map.inverse(z[k] + 1e-10 * scale * inward));
  }
  map.set_vertex_angles(std::move(angles));
  map.set_accuracy(map.round_trip_error(0.9));
  return map;
}

}  // namespace beltrami
