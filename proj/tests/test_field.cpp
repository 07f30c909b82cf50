#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "beltrami/field.hpp"
#include "beltrami/geometry.hpp"

using namespace beltrami;

namespace {
const DomainSpec& disk() {
  static auto chart = catalog_domain("disk");
  return chart->domain();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}
}  // namespace

TEST_CASE("constant profile is supported on the domain") {
  MuField mu = sample_mu({"constant", {0.3}, ""}, disk(), 64);
  CHECK(mu.grid.n == 64);
  CHECK(mu.grid.length == doctest::Approx(4.0));
  CHECK(mu.at({0.2, 0.1}) == cplx(0.3));
  CHECK(mu.at({0.9, 0.9}) == cplx(0.0));
  CHECK(mu.sup_norm() == doctest::Approx(0.3));
  DilatationField k = dilatation_field(mu);
  CHECK(k.at({0.1, 0.0}) == doctest::Approx(1.3 / 0.7));
}

TEST_CASE("radial power profile has constant dilatation 1 + 2a") {
  for (double a : {0.25, 0.5, 1.0}) {
    MuField mu = sample_mu({"radial-power", {a}, ""}, disk(), 32);
    DilatationField k = dilatation_field(mu);
    for (cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.4), cplx(0.0, -0.7)}) CHECK(k.at(z) == doctest::Approx(1.0 + 2.0 * a));
    // Direction: mu = k z / conj(z), so on the imaginary axis it is -k.
    CHECK(std::abs(mu.at({0.0, 0.5}) + a / (1.0 + a)) < 1e-14);
  }
}

TEST_CASE("power-log dilatation closed form") {
  CHECK(power_log_k(2.0, 1.0, 1.0) == 1.0);
  CHECK(power_log_k(std::exp(-1.0), 1.0, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(power_log_k(std::exp(-2.0), 0.0, 2.0) == doctest::Approx(4.0));
  CHECK(power_log_k(0.9, 0.0, 1.0) == 1.0);  // log(1/0.9) < 1 is clamped up to 1
  MuField mu = sample_mu({"power-log", {0.0, 1.0, 0.0, 0.0}, ""}, disk(), 64);
  REQUIRE(mu.singular_points.size() == 1);
  DilatationField k = dilatation_field(mu);
  CHECK(k.at({0.01, 0.0}) == doctest::Approx(std::log(100.0)).epsilon(1e-10));
}

TEST_CASE("radial profile of 1/r has circle norm 2 pi") {
  Grid g{64, 4.0, {0, 0}};
  auto k = dilatation_from_function([](cplx z) { return 1.0 / std::abs(z); }, g, {0.0});
  auto prof = radial_profile(k, 0.0, dyadic_radii(0.5, 8));
  REQUIRE(prof.radii.size() == 8);
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    CHECK(prof.circle_norm[i] == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(prof.circle_mean[i] == doctest::Approx(1.0 / prof.radii[i]).epsilon(1e-10));
  }
  CHECK(prof.radii.front() < prof.radii.back());
}

TEST_CASE("custom grid round trip and truncation") {
  const char* path = "mu_roundtrip.csv";
  MuField src = sample_mu({"radial-power", {0.5}, ""}, disk(), 32);
  {
    std::ofstream f(path);
    f << "x,y,re,im\n";
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i) {
        cplx z = src.grid.point(i, j), v = src.values[src.grid.index(i, j)];
        f << z.real() << ',' << z.imag() << ',' << v.real() << ',' << v.imag() << '\n';
      }
  }
  MuField back = sample_mu({"custom-grid", {}, path}, disk(), 32);
  double err = 0.0;
  for (std::size_t k = 0; k < src.values.size(); ++k) err = std::max(err, std::abs(src.values[k] - back.values[k]));
  CHECK(err < 1e-5);

  {
    std::ofstream f(path);
    f << "0.1,0.1,1.0,0.0\n";
  }
  CHECK(code_of([&] { sample_mu({"custom-grid", {}, path}, disk(), 32); }) == ErrorCode::domain_error);
  MuField cut = sample_mu({"custom-grid", {}, path}, disk(), 32, 0.01);
  CHECK(cut.sup_norm() == doctest::Approx(0.99));
  std::remove(path);
}

TEST_CASE("field validation errors") {
  CHECK(code_of([] { sample_mu({"spiral", {}, ""}, disk(), 32); }) == ErrorCode::unknown_id);
  CHECK(code_of([] { sample_mu({"zero", {}, ""}, disk(), 48); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { sample_mu({"radial-power", {-0.7}, ""}, disk(), 32); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { sample_mu({"custom-grid", {}, "/no/such.csv"}, disk(), 32); }) == ErrorCode::io_error);
  CHECK(code_of([] { truncate_mu(MuField{}, 1.5); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { dilatation(cplx(1.0)); }) == ErrorCode::domain_error);
}
