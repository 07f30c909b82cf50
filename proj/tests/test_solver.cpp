#include <doctest.h>

#include "beltrami/geometry.hpp"
#include "beltrami/solver.hpp"

using namespace beltrami;

namespace {

const DomainSpec& disk() {
  static auto chart = catalog_domain("disk");
  return chart->domain();
}

// Principal solution for mu = k on the unit disk: z + k conj(z) inside, z + k / z outside.
cplx affine_disk(cplx z, double k) { return std::abs(z) <= 1 ? z + k * std::conj(z) : z + k / z; }

}  // namespace

TEST_CASE("zero mu gives the identity") {
  MuField mu = sample_mu({"zero", {}, ""}, disk(), 64);
  QcMap F = principal_solution(mu);
  CHECK(F.converged);
  double e = 0;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) e = std::max(e, std::abs(F.w[F.grid().index(i, j)] - F.grid().point(i, j)));
  CHECK(e < 1e-14);
}

TEST_CASE("constant mu on the disk matches the affine oracle") {
  const double k = 0.3;
  MuField mu = sample_mu({"constant", {k}, ""}, disk(), 256);
  QcMap F = principal_solution(mu);
  CHECK(F.converged);
  CHECK(F.contraction <= 0.35);
  CHECK(F.contraction >= 0.25);
  CHECK_FALSE(F.margin_warning);
  double inner = 0, outer = 0;
  const Grid& g = F.grid();
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      cplx z = g.point(i, j);
      double r = std::abs(z);
      double e = std::abs(F.w[g.index(i, j)] - affine_disk(z, k));
      if (r <= 0.8) inner = std::max(inner, e);
      if (r >= 1.2 && std::max(std::abs(z.real()), std::abs(z.imag())) <= 1.0) outer = std::max(outer, e);
    }
  CHECK(inner < 1e-2);
  CHECK(outer < 1e-2);
  CHECK(F.report.jacobian.fold_cells == 0);
  CHECK(F.report.jacobian.positive_fraction == 1.0);
  CHECK(F.report.jacobian.min > 0.0);

  cplx target(0.5, 0.2);
  auto z = F.inverse(target);
  REQUIRE(z.has_value());
  CHECK(std::abs(F(*z) - target) < 1e-9);
  // Inverse of z + k conj(z): x = u / (1 + k), y = v / (1 - k).
  CHECK(std::abs(*z - cplx(0.5 / 1.3, 0.2 / 0.7)) < 1e-2);
  CHECK_FALSE(F.inverse(cplx(40.0, 0.0)).has_value());
}

TEST_CASE("radial power mu on the annulus gives z |z|^(2a)") {
  auto ann = catalog_domain("annulus", std::vector<double>{0.5});
  const double a = 0.5;
  MuField mu = sample_mu({"radial-power", {a}, ""}, ann->domain(), 256);
  QcMap F = principal_solution(mu);
  CHECK(F.converged);
  CHECK(F.contraction == doctest::Approx(a / (1 + a)).epsilon(0.05));
  double e = 0;
  for (double r : {0.6, 0.75, 0.9})
    for (int t = 0; t < 16; ++t) {
      cplx z = std::polar(r, kTwoPi * t / 16);
      e = std::max(e, std::abs(F(z) - z * std::pow(r, 2 * a)));
    }
  CHECK(e < 2e-2);
}

TEST_CASE("residual of an exact affine map") {
  Grid g{64, 4.0, {0, 0}};
  ComplexGrid w(g.size()), mu(g.size(), cplx(0.3, 0.1));
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      cplx z = g.point(i, j);
      w[g.index(i, j)] = z + cplx(0.3, 0.1) * std::conj(z);
    }
  ResidualReport r = beltrami_residual(g, w, mu);
  CHECK(r.relative < 1e-13);
  CHECK(r.median_mu_error < 1e-13);
  CHECK(r.jacobian.min == doctest::Approx(1.0 - 0.1));

  // Orientation reversal is flagged everywhere.
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) w[g.index(i, j)] = std::conj(g.point(i, j));
  ResidualReport flip = beltrami_residual(g, w, ComplexGrid(g.size(), 0.0));
  CHECK(flip.jacobian.positive_fraction == 0.0);
  CHECK(flip.jacobian.negative_cells == flip.jacobian.cells);
  CHECK(flip.jacobian.fold_cells > 0);
}

TEST_CASE("iteration cap is reported as unconverged") {
  MuField mu = sample_mu({"constant", {0.6}, ""}, disk(), 64);
  QcMap F = principal_solution(mu, {1e-14, 0.0, 2});
  CHECK_FALSE(F.converged);
  CHECK(F.iterations == 2);
}
