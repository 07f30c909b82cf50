#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/common.hpp"
#include "beltrami/field.hpp"

namespace beltrami {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

/// Exact profile K = max(1, r^-s log^q(1/r)) around `center`, used for symbolic overrides.
struct PowerLogSymbol {
  double s = 0.0;
  double q = 0.0;
  cplx center{0.0, 0.0};
};

struct CheckResult {
  std::string criterion;
  cplx point{0.0, 0.0};
  Verdict verdict = Verdict::inconclusive;  ///< symbolic when available, numeric otherwise
  Verdict numeric = Verdict::inconclusive;
  std::optional<Verdict> symbolic;
  std::vector<double> levels;    ///< abscissae of the diagnostic sequence
  std::vector<double> sequence;  ///< partial integrals, ratios or oscillations
  double exponent = 0.0;         ///< fitted growth/decay exponent or slope
  std::string note;
};

nlohmann::json to_json(const CheckResult& r);

/// Outcome of the dyadic increment rule shared by the improper-integral checks.
struct IncrementClass {
  enum Kind { diverges, converges, undecided } kind = undecided;
  double exponent = 0.0;  ///< beta in increment ~ t^-beta (0 when geometric)
  bool geometric = false;
};

/// Increments d_n of a partial-integral sequence against a level variable t_n.
/// Geometric decay or beta > 1.1 converges, beta < 0.9 diverges, otherwise undecided.
IncrementClass classify_increments(const std::vector<double>& increments, const std::vector<double>& t,
                                   int fit_levels = 6);

/// Radii eps0 * 2^-(k / per_level) for k = 0..levels*per_level, decreasing.
std::vector<double> criteria_radii(double eps0, int levels, int per_level = 8);

CheckResult check_divergence_integral(const RadialProfile& profile, double eps0,
                                      const std::optional<PowerLogSymbol>& symbol = std::nullopt);

enum class GrowthMode { log, loglog };
CheckResult check_growth(const RadialProfile& profile, GrowthMode mode,
                         const std::optional<PowerLogSymbol>& symbol = std::nullopt);

enum class OscillationMode { fmo, bmo_local, limsup_mean };

struct DiskOptions {
  double eps0 = 0.25;
  int levels = 12;
  int subdisks = 50;
  std::uint64_t seed = 1;
};

CheckResult check_mean_oscillation(const DilatationField& k, cplx z0, OscillationMode mode,
                                   const DiskOptions& options = {},
                                   const std::optional<PowerLogSymbol>& symbol = std::nullopt);

struct TestFunctionFamily {
  enum Kind { inverse_t, inverse_t_log, custom_table } kind = inverse_t;
  double eps0 = 0.25;
  /// custom_table: (t, psi) pairs, increasing in t, interpolated log-log.
  std::vector<std::pair<double, double>> table;

  double psi(double t) const;
  std::string name() const;
};

CheckResult check_calibrated_integral(const DilatationField& k, cplx z0, const TestFunctionFamily& family,
                                      int levels = 80,
                                      const std::optional<PowerLogSymbol>& symbol = std::nullopt);

struct OrliczSpec {
  enum Kind { exp, power, tlogq, table } kind = exp;
  double param = 1.0;  ///< alpha, p or q
  double delta_star = 2.0;
  /// table: (t, Phi(t)) pairs increasing in t, interpolated linearly.
  std::vector<std::pair<double, double>> samples;

  double phi(double t) const;
  /// d/dt log Phi(t).
  double log_derivative(double t) const;
  double inverse(double tau) const;
  std::string name() const;
  void validate() const;
};

/// Parses "exp:a", "power:p", "tlogq:q".
OrliczSpec parse_orlicz(const std::string& text);

struct OrliczResult {
  CheckResult integral;     ///< clause (a): integral of Phi(K) finite and stable
  CheckResult calibration;  ///< clause (b): divergence of the calibration integral
  CheckResult combined;
};

/// Clause (a) integrates over the domain of `k` (or B(z0, 1) for whole-plane fields)
/// with polar shells refined toward z0.
OrliczResult check_orlicz(const DilatationField& k, cplx z0, const OrliczSpec& spec,
                          const std::optional<PowerLogSymbol>& symbol = std::nullopt);

struct CriteriaReport {
  std::vector<CheckResult> checks;
  std::vector<cplx> points;

  /// Aggregate over points: fail if any point fails, pass if all pass.
  Verdict summary(const std::string& criterion) const;
  nlohmann::json to_json() const;
};

struct CriteriaOptions {
  std::vector<std::string> criteria;  ///< empty = all
  std::string orlicz = "exp:1";
  int points = 32;
  std::uint64_t seed = 1;
  DiskOptions disks;
};

/// Names accepted by `CriteriaOptions::criteria`.
const std::vector<std::string>& criterion_names();

/// Runs the requested checks at boundary sample points plus the field's singular points.
CriteriaReport run_criteria(const DilatationField& k, const std::vector<cplx>& boundary_points,
                            const CriteriaOptions& options,
                            const std::function<std::optional<PowerLogSymbol>(cplx)>& symbol_at = {});

}  // namespace beltrami
