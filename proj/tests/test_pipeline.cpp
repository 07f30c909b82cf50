#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "beltrami/pipeline.hpp"

using namespace beltrami;

namespace {

DirichletProblem problem(const std::string& domain, const MuProfile& mu, const std::string& phi, int n,
                         std::vector<double> params = {}) {
  auto chart = catalog_domain(domain, params);
  return DirichletProblem{chart, sample_mu(mu, chart->domain(), n), parse_phi(phi, chart), 256, SolverOptions{}};
}

double interior_error(const RegularSolution& s, const std::function<double(cplx)>& exact, double radius) {
  double e = 0;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      cplx z(i * radius / 20, j * radius / 20);
      if (std::abs(z) > radius) continue;
      e = std::max(e, std::abs(s(z).real() - exact(z)));
    }
  return e;
}

}  // namespace

TEST_CASE("phi parsing") {
  auto disk = catalog_domain("disk");
  CHECK(parse_phi("cos", disk).value(0, 1.0) == doctest::Approx(std::cos(1.0)));
  CHECK(parse_phi("constant:2.5", disk).value(0, 0.3) == 2.5);
  auto f = parse_phi("fourier:1,2,0,0,3", disk);
  CHECK(f.value(0, 0.7) == doctest::Approx(1 + 2 * std::cos(0.7) + 3 * std::sin(1.4)));
  CHECK(parse_phi("plane-x", disk).value(0, 2.0) == doctest::Approx(std::cos(2.0)));
  CHECK_THROWS_AS(parse_phi("bessel", disk), Error);
  CHECK_THROWS_AS(parse_phi("fourier:1,x", disk), Error);

  auto slit = catalog_domain("slit-disk");
  auto jump = parse_phi("jump", slit);
  double upper = std::arg(slit->reference_map().inverse(cplx(0.5, 1e-12)));
  double lower = std::arg(slit->reference_map().inverse(cplx(0.5, -1e-12)));
  CHECK(jump.value(0, upper) == doctest::Approx(1.0));
  CHECK(jump.value(0, lower) == doctest::Approx(-1.0));

  const char* path = "phi_table.csv";
  {
    std::ofstream out(path);
    out << "angle,value\n0,0\n3.141592653589793,2\n";
  }
  CHECK(parse_phi(std::string("csv:") + path, disk).value(0, kPi / 2) == doctest::Approx(1.0));
  std::remove(path);
  CHECK_THROWS_AS(parse_phi("csv:/no/such/file.csv", disk), Error);
}

TEST_CASE("zero mu reduces to the Poisson problem") {
  auto pb = problem("disk", {"zero", {}, ""}, "fourier:0,0,0,1", 64);
  RegularSolution s = solve_regular(pb);
  CHECK(s.converged);
  CHECK(interior_error(s, [](cplx z) { return std::real(z * z); }, 0.9) < 1e-12);
  // One Richardson step leaves O(delta^2) from the r^2 profile at delta = 2^-8.
  auto br = verify_boundary([&](cplx z) { return s(z).real(); }, *pb.chart, pb.phi, 1e-4, 32);
  CHECK(br.pass);
  CHECK(br.ends.size() == 32);
  CHECK(std::abs(monodromy_period(s, 0.0, 0.5)) < 1e-10);

  ComplexGrid vals = sample_solution(s, pb.mu.grid, pb.chart->domain());
  CHECK(std::isnan(vals[0].real()));
}

TEST_CASE("square domain with linear data recovers the linear function") {
  std::vector<double> sq;
  for (int c = 0; c < 4; ++c) {
    const cplx corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    for (int k = 0; k < 32; ++k) {
      cplx p = corners[c] + (corners[(c + 1) % 4] - corners[c]) * (k / 32.0);
      sq.push_back(p.real());
      sq.push_back(p.imag());
    }
  }
  auto pb = problem("jordan-polyline", {"zero", {}, ""}, "plane-x", 64, sq);
  pb.samples = 1024;
  RegularSolution s = solve_regular(pb);
  CHECK(interior_error(s, [](cplx z) { return z.real(); }, 0.7) < 5e-3);
}

TEST_CASE("constant mu boundary values and composite residual") {
  auto pb = problem("disk", {"constant", {0.3}, ""}, "cos", 128);
  RegularSolution s = solve_regular(pb);
  CHECK(s.converged);
  REQUIRE(s.F.has_value());
  CHECK(s.composite_residual < 5e-2);
  CHECK(s.composite_jacobian.fold_cells == 0);
  auto br = verify_boundary([&](cplx z) { return s(z).real(); }, *pb.chart, pb.phi, 2e-2, 32);
  CHECK(br.p95 < 2e-2);
  // g maps the domain into the disk and fixes the anchor.
  CHECK(std::abs(s.g(0.0)) < 1e-6);
  for (double t = 0; t < 6; t += 1.1) CHECK(std::abs(s.g(std::polar(0.9, t))) < 1.0);
}

TEST_CASE("multivalent annulus problem") {
  auto pb = problem("annulus", {"zero", {}, ""}, "annulus:0,1", 64, {0.5});
  MultivalentSolution m = solve_multivalent(pb, 20, 3);
  CHECK(m.period == doctest::Approx(kTwoPi / std::log(2.0)).epsilon(1e-10));
  CHECK(m.max_re_jump < 1e-10);
  CHECK(m.max_im_jump_error < 1e-10);
  CHECK(m.loops == 20);
  CHECK(m.re_f(std::polar(std::sqrt(0.5), 0.3)) == doctest::Approx(0.5));

  auto constant = problem("annulus", {"constant", {0.2}, ""}, "annulus:0,1", 64, {0.5});
  CHECK_THROWS_AS(solve_multivalent(constant), Error);
  auto disk = problem("disk", {"zero", {}, ""}, "cos", 64);
  CHECK_THROWS_AS(solve_multivalent(disk), Error);
}

TEST_CASE("extension check on a smooth quasiconformal map") {
  auto chart = catalog_domain("disk");
  QcMap F = principal_solution(sample_mu({"constant", {0.3}, ""}, chart->domain(), 128));
  ExtensionReport r = verify_extension(F, *chart, 8, 10, 1e-1);
  CHECK(r.verdict == "consistent-with-extension");
  REQUIRE(r.ends.size() == 8);
  for (const auto& e : r.ends) {
    CHECK(e.forward_ok);
    CHECK(e.inverse_ok);
    CHECK(e.forward.back() < e.forward.front());
  }
}

TEST_CASE("power-log symbol") {
  auto chart = catalog_domain("disk");
  auto sym = power_log_symbol(sample_mu({"power-log", {0.0, 2.0, 0.0, 0.0}, ""}, chart->domain(), 32));
  REQUIRE(sym.has_value());
  CHECK(sym->q == 2.0);
  CHECK_FALSE(power_log_symbol(sample_mu({"constant", {0.1}, ""}, chart->domain(), 32)).has_value());
}
