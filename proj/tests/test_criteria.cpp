#include <doctest.h>

#include "beltrami/criteria.hpp"

using namespace beltrami;

namespace {

DilatationField power_log(double s, double q) {
  return dilatation_from_function([=](cplx z) { return power_log_k(std::abs(z), s, q); }, Grid{64, 4.0, {0, 0}},
                                  {0.0});
}

CheckResult find(const CriteriaReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.criterion == name) return c;
  FAIL("missing check " << name);
  return {};
}

}  // namespace

TEST_CASE("increment classification") {
  std::vector<double> t, geo, slow, fast;
  // Linear abscissae: on a geometric grid a power law is indistinguishable from geometric decay.
  for (int k = 1; k <= 20; ++k) {
    double tk = k;
    t.push_back(tk);
    geo.push_back(std::pow(0.5, k));
    slow.push_back(std::pow(tk, -0.5));
    fast.push_back(std::pow(tk, -2.0));
  }
  auto g = classify_increments(geo, t);
  CHECK(g.kind == IncrementClass::converges);
  auto s = classify_increments(slow, t);
  CHECK(s.kind == IncrementClass::diverges);
  CHECK(s.exponent == doctest::Approx(0.5).epsilon(1e-6));
  auto f = classify_increments(fast, t);
  CHECK(f.kind == IncrementClass::converges);
}

TEST_CASE("Orlicz function parsing") {
  auto e = parse_orlicz("exp:2");
  CHECK(e.phi(1.0) == doctest::Approx(std::exp(2.0)));
  CHECK(e.log_derivative(3.0) == doctest::Approx(2.0));
  CHECK(e.inverse(e.phi(1.7)) == doctest::Approx(1.7));
  auto p = parse_orlicz("power:2");
  CHECK(p.phi(3.0) == doctest::Approx(9.0));
  CHECK(p.log_derivative(4.0) == doctest::Approx(0.5));
  auto l = parse_orlicz("tlogq:1");
  CHECK(l.phi(2.0) == doctest::Approx(2.0 * std::log(std::exp(1.0) + 2.0)));
  // Central difference of log Phi.
  for (double t : {0.5, 5.0, 50.0}) {
    double h = 1e-5 * t;
    double fd = (std::log(l.phi(t + h)) - std::log(l.phi(t - h))) / (2 * h);
    CHECK(l.log_derivative(t) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(parse_orlicz("cosh:1"), Error);
  CHECK_THROWS_AS(parse_orlicz("power:abc"), Error);
}

TEST_CASE("log singularity: finite mean oscillation but unbounded mean") {
  auto k = power_log(0.0, 1.0);
  CHECK(check_mean_oscillation(k, 0.0, OscillationMode::fmo).numeric == Verdict::pass);
  CHECK(check_mean_oscillation(k, 0.0, OscillationMode::bmo_local).numeric == Verdict::pass);
  CHECK(check_mean_oscillation(k, 0.0, OscillationMode::limsup_mean).numeric == Verdict::fail);
  auto radii = criteria_radii(0.25, 40);
  auto prof = radial_profile(k, 0.0, radii);
  CHECK(check_growth(prof, GrowthMode::log).numeric == Verdict::pass);
  CHECK(check_divergence_integral(prof, 0.25).numeric != Verdict::fail);
}

TEST_CASE("bounded K passes everything, 1/r fails growth and oscillation") {
  auto bounded = dilatation_from_function([](cplx z) { return 1.5 + 0.5 * std::cos(z.real()); }, Grid{64, 4.0, {0, 0}});
  CriteriaOptions opt;
  CriteriaReport r = run_criteria(bounded, {cplx(0.3, 0.1)}, opt);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.numeric == Verdict::pass, c.criterion);

  auto pole = power_log(1.0, 0.0);
  CHECK(check_growth(radial_profile(pole, 0.0, criteria_radii(0.25, 40)), GrowthMode::log).numeric == Verdict::fail);
  CHECK(check_mean_oscillation(pole, 0.0, OscillationMode::fmo).numeric == Verdict::fail);
}

TEST_CASE("Orlicz admissibility of exp versus polynomial growth") {
  auto k = power_log(0.0, 0.0);  // K == 1
  CHECK(check_orlicz(k, 0.0, parse_orlicz("exp:1")).combined.numeric == Verdict::pass);
  CHECK(check_orlicz(k, 0.0, parse_orlicz("power:2")).combined.numeric == Verdict::fail);
  CHECK(check_orlicz(k, 0.0, parse_orlicz("power:1")).combined.numeric == Verdict::fail);
}

TEST_CASE("symbolic verdict overrides only at the singular point") {
  auto k = power_log(0.0, 2.0);
  PowerLogSymbol sym{0.0, 2.0, 0.0};
  auto at = check_mean_oscillation(k, 0.0, OscillationMode::fmo, {}, sym);
  REQUIRE(at.symbolic.has_value());
  CHECK(*at.symbolic == Verdict::fail);
  CHECK(at.verdict == Verdict::fail);
  auto away = check_mean_oscillation(k, cplx(0.5, 0.0), OscillationMode::fmo, {}, sym);
  CHECK_FALSE(away.symbolic.has_value());
}

TEST_CASE("criteria report is deterministic and summarises per criterion") {
  auto k = power_log(0.0, 1.0);
  CriteriaOptions opt;
  opt.criteria = {"fmo", "bmo", "limsup"};
  auto a = run_criteria(k, {cplx(0.5, 0.0)}, opt).to_json().dump();
  auto b = run_criteria(k, {cplx(0.5, 0.0)}, opt).to_json().dump();
  CHECK(a == b);
  auto rep = run_criteria(k, {}, opt);
  CHECK(rep.summary("limsup") == Verdict::fail);
  CHECK(rep.summary("fmo") == Verdict::pass);
  CHECK(find(rep, "bmo").levels.size() >= 6);
  auto j = rep.to_json();
  CHECK(j.contains("summary"));
  CHECK(j["summary"]["limsup"] == "fail");
}
