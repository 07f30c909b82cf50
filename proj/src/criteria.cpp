#include "beltrami/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <type_traits>

namespace beltrami {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Non-finite values are written as strings so the JSON stays valid.
json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct Gauss {
  std::vector<double> x, w;
};

const Gauss& gauss(int n) {
  static std::map<int, Gauss> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Gauss g;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x.push_back(x);
    g.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return cache.emplace(n, g).first->second;
}

template <class F>
double gauss_integral(F&& f, double a, double b, int n = 16) {
  const auto& g = gauss(n);
  double m = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(m + h * g.x[i]);
  return s * h;
}

// Least-squares slope of y against x over the last `count` entries.
double tail_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t count) {
  std::size_t n = std::min({x.size(), y.size(), count});
  if (n < 2) return 0.0;
  std::size_t off = x.size() - n;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[off + i];
    my += y[y.size() - n + i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[off + i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[y.size() - n + i] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// Uniform double in [0, 1) from the standardised mt19937_64 stream.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

CheckResult finish(CheckResult r, const std::optional<Verdict>& symbolic) {
  r.symbolic = symbolic;
  r.verdict = symbolic ? *symbolic : r.numeric;
  if (symbolic && *symbolic != r.numeric && r.numeric != Verdict::inconclusive)
    r.note += (r.note.empty() ? "" : "; ") + std::string("numeric and symbolic verdicts disagree");
  return r;
}

bool symbol_applies(const std::optional<PowerLogSymbol>& s, cplx z0) {
  return s && std::abs(s->center - z0) < 1e-12;
}

}  // namespace

json to_json(const CheckResult& r) {
  json j{{"criterion", r.criterion},
         {"point", {r.point.real(), r.point.imag()}},
         {"verdict", to_string(r.verdict)},
         {"numeric", to_string(r.numeric)},
         {"symbolic", r.symbolic ? json(to_string(*r.symbolic)) : json(nullptr)},
         {"exponent", num(r.exponent)},
         {"levels", num_array(r.levels)},
         {"sequence", num_array(r.sequence)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

IncrementClass classify_increments(const std::vector<double>& inc, const std::vector<double>& t, int fit_levels) {
  IncrementClass c;
  const std::size_t n = inc.size();
  if (n < static_cast<std::size_t>(fit_levels) || t.size() != n) return c;
  for (double d : inc)
    if (!std::isfinite(d)) {
      c.kind = IncrementClass::diverges;
      c.exponent = -kInf;
      return c;
    }
  // Geometric decay: every ratio over the fitted tail well below one.
  bool geometric = true;
  for (std::size_t k = n - fit_levels + 1; k < n; ++k)
    geometric = geometric && inc[k - 1] > 0 && inc[k] / inc[k - 1] <= 0.75;
  bool vanished = inc.back() == 0.0;
  if (geometric || vanished) {
    c.kind = IncrementClass::converges;
    c.geometric = true;
    return c;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = n - fit_levels; k < n; ++k) {
    if (!(inc[k] > 0) || !(t[k] > 0)) return c;
    lx.push_back(std::log(t[k]));
    ly.push_back(std::log(inc[k]));
  }
  c.exponent = -tail_slope(lx, ly, lx.size());
  if (c.exponent < 0.9)
    c.kind = IncrementClass::diverges;
  else if (c.exponent > 1.1)
    c.kind = IncrementClass::converges;
  return c;
}

std::vector<double> criteria_radii(double eps0, int levels, int per_level) {
  std::vector<double> r;
  for (int k = 0; k <= levels * per_level; ++k) r.push_back(eps0 * std::exp2(-static_cast<double>(k) / per_level));
  return r;
}

CheckResult check_divergence_integral(const RadialProfile& p, double eps0, const std::optional<PowerLogSymbol>& symbol) {
  CheckResult r;
  r.criterion = "divergence";
  r.point = p.center;
  // Sort by decreasing radius and integrate dr / ||K|| in log r with the trapezoid rule.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < p.radii.size(); ++k)
    if (p.radii[k] <= eps0 * (1 + 1e-12)) pts.emplace_back(p.radii[k], p.circle_norm[k]);
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
  if (pts.size() < 2) throw Error(ErrorCode::invalid_argument, "divergence check needs a profile below eps0");
  const double rmin = pts.back().first;
  std::vector<double> increments, tvals;
  double integral = 0.0, level_start = 0.0;
  double next_level = eps0 / 2;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    auto [r0, n0] = pts[k - 1];
    auto [r1, n1] = pts[k];
    double f0 = n0 > 0 ? r0 / n0 : kInf, f1 = n1 > 0 ? r1 / n1 : kInf;
    integral += 0.5 * (f0 + f1) * std::log(r0 / r1);
    if (r1 <= next_level * (1 + 1e-9)) {
      increments.push_back(integral - level_start);
      tvals.push_back(std::log(1.0 / r1));
      r.levels.push_back(r1);
      r.sequence.push_back(integral);
      level_start = integral;
      next_level /= 2;
    }
  }
  auto c = classify_increments(increments, tvals);
  r.exponent = c.exponent;
  if (rmin > 1e-4 * eps0) {
    r.numeric = Verdict::inconclusive;
    r.note = "profile too shallow: r_min > 1e-4 eps0";
  } else {
    r.numeric = c.kind == IncrementClass::diverges    ? Verdict::pass
                : c.kind == IncrementClass::converges ? Verdict::fail
                                                       : Verdict::inconclusive;
    if (c.geometric) r.note = "increments decay geometrically";
  }
  std::optional<Verdict> sym;
  if (symbol_applies(symbol, p.center)) {
    // ||K|| ~ 2 pi r^{1-s} log^q: the integral of r^{s-1} log^-q diverges iff s = 0 and q <= 1.
    sym = (symbol->s == 0.0 && symbol->q <= 1.0) ? Verdict::pass : Verdict::fail;
  }
  return finish(r, sym);
}

CheckResult check_growth(const RadialProfile& p, GrowthMode mode, const std::optional<PowerLogSymbol>& symbol) {
  CheckResult r;
  r.criterion = mode == GrowthMode::log ? "log" : "loglog";
  r.point = p.center;
  // One sample per dyadic level: the radii closest to powers of two below the largest.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < p.radii.size(); ++k) pts.emplace_back(p.radii[k], p.circle_mean[k]);
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<double> lt, lratio;
  double next = pts.front().first;
  for (auto [rad, mean] : pts) {
    if (rad > next * (1 + 1e-9)) continue;
    next = rad / 2;
    double t = std::log(1.0 / rad);
    double bound = mode == GrowthMode::log ? t : t * std::log(t);
    if (!(bound > 0)) continue;
    double ratio = mean / bound;
    r.levels.push_back(rad);
    r.sequence.push_back(ratio);
    if (std::isfinite(ratio) && ratio > 0) {
      lt.push_back(std::log(t));
      lratio.push_back(std::log(ratio));
    } else if (!std::isfinite(ratio)) {
      lt.push_back(std::log(t));
      lratio.push_back(kInf);
    }
  }
  if (lt.size() < 6) {
    r.numeric = Verdict::inconclusive;
    r.note = "fewer than 6 usable dyadic radii";
  } else if (!std::isfinite(lratio.back())) {
    r.numeric = Verdict::fail;
    r.exponent = kInf;
    r.note = "circle mean is infinite";
  } else {
    r.exponent = tail_slope(lt, lratio, 6);
    r.numeric = r.exponent <= 0.1 ? Verdict::pass : r.exponent >= 0.3 ? Verdict::fail : Verdict::inconclusive;
  }
  std::optional<Verdict> sym;
  if (symbol_applies(symbol, p.center)) {
    // k(r) = r^-s log^q(1/r) is O(log) iff s = 0, q <= 1; O(log loglog) admits the same set.
    sym = (symbol->s == 0.0 && symbol->q <= 1.0) ? Verdict::pass : Verdict::fail;
  }
  return finish(r, sym);
}

namespace {

// Integral over B(c, R) of value(z), restricted to `inside`, on dyadic polar
// shells [R 2^{-j-1}, R 2^{-j}], Gauss-Legendre in r and the midpoint rule in theta.
struct ShellSums {
  double area = 0.0;
  double integral = 0.0;
  std::vector<double> shells;  ///< per-shell contribution to `integral`, outermost first
  bool infinite = false;
};

struct PolarRule {
  int depth = 24;
  int radial = 8;
  int angular = 48;
};

template <class V, class In>
ShellSums polar_integrate(V&& value, In&& inside, cplx c, double R, const PolarRule& rule) {
  ShellSums s;
  const auto& g = gauss(rule.radial);
  for (int j = 0; j < rule.depth; ++j) {
    double r1 = std::ldexp(R, -j), r0 = 0.5 * r1;
    double m = 0.5 * (r0 + r1), h = 0.5 * (r1 - r0);
    double shell = 0.0, area = 0.0;
    for (int a = 0; a < rule.angular; ++a) {
      cplx dir = std::polar(1.0, kTwoPi * (a + 0.5) / rule.angular);
      for (int q = 0; q < rule.radial; ++q) {
        double r = m + h * g.x[q];
        cplx z = c + r * dir;
        if (!inside(z)) continue;
        double w = g.w[q] * h * r * kTwoPi / rule.angular;
        double v;
        if constexpr (std::is_invocable_v<V, cplx, double>) v = value(z, r);
        else v = value(z);
        if (!std::isfinite(v)) s.infinite = true;
        shell += w * v;
        area += w;
      }
    }
    s.shells.push_back(shell);
    s.integral += shell;
    s.area += area;
  }
  // A shell sum that fails to shrink toward the centre signals a non-integrable singularity.
  const std::size_t n = s.shells.size();
  if (n >= 4) {
    bool flat = true;
    for (std::size_t k = n - 3; k < n; ++k) flat = flat && s.shells[k] >= 0.9 * s.shells[k - 1] && s.shells[k] > 0;
    if (flat) s.infinite = true;
  }
  if (s.infinite) s.integral = kInf;
  return s;
}

double mean_oscillation(const DilatationField& k, cplx c, double radius, bool oscillation, const PolarRule& rule) {
  auto in = [&](cplx z) { return k.in_domain(z); };
  auto val = [&](cplx z) { return k.at(z); };
  ShellSums base = polar_integrate(val, in, c, radius, rule);
  if (base.area <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (base.infinite) return kInf;
  double mean = base.integral / base.area;
  if (!oscillation) return mean;
  ShellSums osc = polar_integrate([&](cplx z) { return std::abs(k.at(z) - mean); }, in, c, radius, rule);
  return osc.infinite ? kInf : osc.integral / osc.area;
}

}  // namespace

CheckResult check_mean_oscillation(const DilatationField& k, cplx z0, OscillationMode mode, const DiskOptions& opt,
                                   const std::optional<PowerLogSymbol>& symbol) {
  CheckResult r;
  r.criterion = mode == OscillationMode::fmo ? "fmo" : mode == OscillationMode::bmo_local ? "bmo" : "limsup";
  r.point = z0;
  const bool osc = mode != OscillationMode::limsup_mean;
  PolarRule rule;
  // Sub-disks are off-centre and many; a coarser rule keeps the sweep affordable.
  const PolarRule sub_rule{12, 6, 24};
  std::mt19937_64 rng(opt.seed);
  std::vector<double> level_index;
  const double h = k.grid.h();
  for (int l = 0; l < opt.levels; ++l) {
    double eps = std::ldexp(opt.eps0, -l);
    // Sampled fields carry no information below the cell size.
    if (!k.exact && eps < 2.0 * h) break;
    double v;
    if (mode == OscillationMode::bmo_local) {
      v = 0.0;
      for (int d = 0; d < opt.subdisks; ++d) {
        double rad = std::sqrt(uniform01(rng)), ang = kTwoPi * uniform01(rng);
        double sub = eps * (0.25 + 0.75 * uniform01(rng));
        double o = mean_oscillation(k, z0 + eps * std::polar(rad, ang), sub, true, sub_rule);
        if (!std::isnan(o)) v = std::max(v, o);
      }
    } else {
      v = mean_oscillation(k, z0, eps, osc, rule);
    }
    r.levels.push_back(eps);
    r.sequence.push_back(v);
    level_index.push_back(l);
  }
  if (r.sequence.size() < 6 || (!k.exact && kPi * opt.eps0 * opt.eps0 < 100.0 * h * h)) {
    r.numeric = Verdict::inconclusive;
    r.note = "insufficient resolution for 6 dyadic levels";
  } else if (!std::isfinite(r.sequence.back())) {
    r.numeric = Verdict::fail;
    r.exponent = kInf;
    r.note = "non-integrable at the deepest level";
  } else {
    r.exponent = tail_slope(level_index, r.sequence, level_index.size());
    r.numeric = r.exponent <= 0.05 ? Verdict::pass : Verdict::fail;
  }
  std::optional<Verdict> sym;
  if (symbol_applies(symbol, z0)) {
    bool pass = mode == OscillationMode::limsup_mean ? (symbol->s == 0.0 && symbol->q == 0.0)
                                                     : (symbol->s == 0.0 && symbol->q <= 1.0);
    sym = pass ? Verdict::pass : Verdict::fail;
  }
  return finish(r, sym);
}

double TestFunctionFamily::psi(double t) const {
  switch (kind) {
    case inverse_t: return 1.0 / t;
    case inverse_t_log: return 1.0 / (t * std::log(1.0 / t));
    default: {
      if (table.size() < 2) throw Error(ErrorCode::invalid_argument, "custom test-function table needs two rows");
      auto it = std::lower_bound(table.begin(), table.end(), t, [](const auto& p, double v) { return p.first < v; });
      std::size_t hi = std::clamp<std::size_t>(it - table.begin(), 1, table.size() - 1);
      auto [t0, p0] = table[hi - 1];
      auto [t1, p1] = table[hi];
      double s = (std::log(t) - std::log(t0)) / (std::log(t1) - std::log(t0));
      return std::exp((1 - s) * std::log(p0) + s * std::log(p1));
    }
  }
}

std::string TestFunctionFamily::name() const {
  return kind == inverse_t ? "inverse-t" : kind == inverse_t_log ? "inverse-t-log" : "custom-table";
}

CheckResult check_calibrated_integral(const DilatationField& k, cplx z0, const TestFunctionFamily& fam, int levels,
                                      const std::optional<PowerLogSymbol>& symbol) {
  CheckResult r;
  r.criterion = "calibrated:" + fam.name();
  r.point = z0;
  if (!(fam.eps0 > 0.0 && fam.eps0 < 1.0)) throw Error(ErrorCode::invalid_argument, "calibration eps0 must lie in (0,1)");
  PolarRule rule{1, 8, 64};
  auto in = [&](cplx z) { return k.in_domain(z); };
  double I = 0.0, J = 0.0;
  std::vector<double> logI, logRatio;
  for (int l = 1; l <= levels; ++l) {
    double hi = std::ldexp(fam.eps0, -(l - 1)), lo = 0.5 * hi;
    if (!k.exact && lo < k.grid.h()) break;
    // Below this the shell points round onto z0 itself.
    if (lo < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(z0)) {
      r.note = "levels limited by floating-point resolution at z0";
      break;
    }
    double dI = gauss_integral([&](double t) { return fam.psi(t); }, lo, hi);
    if (!(std::isfinite(dI) && dI > 0))
      throw Error(ErrorCode::invalid_argument, "test-function family " + fam.name() + " is not finite and positive here");
    I += dI;
    // J over the shell lo < |z - z0| < hi, integrating K psi^2.
    ShellSums s = polar_integrate([&](cplx z, double t) {
      double p = fam.psi(t);
      return k.at(z) * p * p;
    }, in, z0, hi, rule);
    J += s.infinite ? kInf : s.integral;
    double ratio = J / (I * I);
    r.levels.push_back(lo);
    r.sequence.push_back(ratio);
    if (std::isfinite(ratio) && ratio > 0) {
      logI.push_back(std::log(I));
      logRatio.push_back(std::log(ratio));
    }
  }
  if (r.sequence.size() < 6) {
    r.numeric = Verdict::inconclusive;
    r.note = "annuli not resolvable over 6 dyadic levels";
  } else if (!std::isfinite(r.sequence.back())) {
    r.numeric = Verdict::fail;
    r.exponent = -kInf;
    r.note = "K psi^2 not integrable on the annuli";
  } else {
    // ratio ~ I^-gamma: o(I^2) needs gamma > 0 with a clear margin.
    r.exponent = -tail_slope(logI, logRatio, 6);
    bool decreasing = true;
    for (std::size_t i = r.sequence.size() - 5; i < r.sequence.size(); ++i)
      decreasing = decreasing && r.sequence[i] < r.sequence[i - 1];
    r.numeric = (r.exponent >= 0.5 && decreasing) ? Verdict::pass
                : r.exponent <= 0.1               ? Verdict::fail
                                                  : Verdict::inconclusive;
  }
  std::optional<Verdict> sym;
  if (symbol_applies(symbol, z0) && fam.kind != TestFunctionFamily::custom_table) {
    double qmax = fam.kind == TestFunctionFamily::inverse_t ? 0.0 : 1.0;
    sym = (symbol->s == 0.0 && symbol->q <= qmax) ? Verdict::pass : Verdict::fail;
  }
  return finish(r, sym);
}

double OrliczSpec::phi(double t) const {
  switch (kind) {
    case exp: return std::exp(param * t);
    case power: return std::pow(t, param);
    case tlogq: return t * std::pow(std::log(std::exp(1.0) + t), param);
    default: {
      if (samples.size() < 2) throw Error(ErrorCode::invalid_argument, "Orlicz table needs two rows");
      auto it = std::lower_bound(samples.begin(), samples.end(), t, [](const auto& p, double v) { return p.first < v; });
      std::size_t hi = std::clamp<std::size_t>(it - samples.begin(), 1, samples.size() - 1);
      auto [t0, f0] = samples[hi - 1];
      auto [t1, f1] = samples[hi];
      return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    }
  }
}

double OrliczSpec::log_derivative(double t) const {
  switch (kind) {
    case exp: return param;
    case power: return param / t;
    case tlogq: {
      double l = std::log(std::exp(1.0) + t);
      return 1.0 / t + param / ((std::exp(1.0) + t) * l);
    }
    default: {
      double d = 1e-6 * std::max(1.0, t);
      return (std::log(phi(t + d)) - std::log(phi(t - d))) / (2 * d);
    }
  }
}

double OrliczSpec::inverse(double tau) const {
  if (kind == exp) return std::log(tau) / param;
  if (kind == power) return std::pow(tau, 1.0 / param);
  // Monotone bisection for the remaining forms.
  double lo = 0.0, hi = 1.0;
  while (phi(hi) < tau) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < tau ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string OrliczSpec::name() const {
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  switch (kind) {
    case exp: return "exp:" + fmt(param);
    case power: return "power:" + fmt(param);
    case tlogq: return "tlogq:" + fmt(param);
    default: return "table";
  }
}

void OrliczSpec::validate() const {
  if (kind == exp && !(param > 0)) throw Error(ErrorCode::invalid_argument, "exp Orlicz function needs alpha > 0");
  if (kind == power && !(param >= 1)) throw Error(ErrorCode::invalid_argument, "power Orlicz function needs p >= 1");
  if (kind == tlogq && !(param >= 0)) throw Error(ErrorCode::invalid_argument, "t log^q Orlicz function needs q >= 0");
  if (!(delta_star > phi(0.0)))
    throw Error(ErrorCode::invalid_argument, "delta* must exceed Phi(0) = " + std::to_string(phi(0.0)));
  // Monotone and convex on the sample set.
  std::vector<double> t, f;
  if (kind == table) {
    for (auto [a, b] : samples) {
      t.push_back(a);
      f.push_back(b);
    }
  } else {
    for (int i = 0; i <= 400; ++i) {
      double x = 0.125 * i;
      double v = phi(x);
      if (!std::isfinite(v)) break;
      t.push_back(x);
      f.push_back(v);
    }
  }
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (t[i] <= t[i - 1]) throw Error(ErrorCode::invalid_argument, "Orlicz samples must be strictly increasing in t");
    if (f[i] < f[i - 1]) throw Error(ErrorCode::invalid_argument, "Orlicz function is not nondecreasing");
  }
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    double s0 = (f[i] - f[i - 1]) / (t[i] - t[i - 1]);
    double s1 = (f[i + 1] - f[i]) / (t[i + 1] - t[i]);
    if (s1 - s0 < -1e-12 * std::max(1.0, std::abs(f[i]))) throw Error(ErrorCode::invalid_argument, "Orlicz function is not convex");
  }
}

OrliczSpec parse_orlicz(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  double value = 1.0;
  if (colon != std::string::npos) {
    try {
      value = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad Orlicz parameter in '" + text + "'");
    }
  }
  OrliczSpec s;
  if (kind == "exp") s.kind = OrliczSpec::exp;
  else if (kind == "power") s.kind = OrliczSpec::power;
  else if (kind == "tlogq") s.kind = OrliczSpec::tlogq;
  else throw Error(ErrorCode::unknown_id, "unknown Orlicz function '" + text + "' (exp:a, power:p, tlogq:q)");
  s.param = value;
  s.validate();
  return s;
}

OrliczResult check_orlicz(const DilatationField& k, cplx z0, const OrliczSpec& spec,
                          const std::optional<PowerLogSymbol>& symbol) {
  spec.validate();
  OrliczResult out;
  const bool sym = symbol_applies(symbol, z0);

  // (a) integral of Phi(K) over the region, polar shells around z0.
  CheckResult& a = out.integral;
  a.criterion = "orlicz-integral:" + spec.name();
  a.point = z0;
  double R = 1.0;
  if (k.inside) {
    const Grid& g = k.grid;
    for (cplx corner : {cplx(g.x0(), g.y0()), cplx(g.x0() + g.length, g.y0()), cplx(g.x0(), g.y0() + g.length),
                        cplx(g.x0() + g.length, g.y0() + g.length)})
      R = std::max(R, std::abs(corner - z0));
  }
  auto in = [&](cplx z) { return k.inside ? k.in_domain(z) : std::abs(z - z0) < 1.0; };
  auto val = [&](cplx z) { return spec.phi(k.at(z)); };
  int depth = k.exact ? 48 : std::max(4, static_cast<int>(std::log2(R / k.grid.h())));
  ShellSums coarse = polar_integrate(val, in, z0, R, {depth, 8, 128});
  ShellSums fine = polar_integrate(val, in, z0, R, {depth + 8, 12, 256});
  a.sequence = fine.shells;
  for (int j = 0; j < static_cast<int>(fine.shells.size()); ++j) a.levels.push_back(std::ldexp(R, -j));
  std::vector<double> tj;
  for (std::size_t j = 0; j < fine.shells.size(); ++j) tj.push_back(j + 1.0);
  auto ca = classify_increments(fine.shells, tj);
  a.exponent = ca.exponent;
  if (fine.infinite || ca.kind == IncrementClass::diverges) {
    a.numeric = Verdict::fail;
    a.note = "integral of Phi(K) diverges near the point";
  } else if (ca.kind == IncrementClass::converges) {
    double change = std::abs(fine.integral - coarse.integral) / std::abs(fine.integral);
    a.numeric = change < 0.1 ? Verdict::pass : Verdict::inconclusive;
    a.note = "integral " + std::to_string(fine.integral) + ", refinement change " + std::to_string(change);
  } else {
    a.numeric = Verdict::inconclusive;
  }
  std::optional<Verdict> asym;
  if (sym) {
    // Phi(K) ~ Phi(r^-s log^q(1/r)) against the area element r dr.
    bool finite;
    const double s = symbol->s, q = symbol->q;
    switch (spec.kind) {
      case OrliczSpec::exp: finite = s == 0.0 && (q < 1.0 || (q == 1.0 && spec.param < 2.0)); break;
      case OrliczSpec::power: finite = s * spec.param < 2.0; break;
      case OrliczSpec::tlogq: finite = s < 2.0; break;
      default: finite = false;
    }
    if (spec.kind != OrliczSpec::table) asym = finite ? Verdict::pass : Verdict::fail;
  }
  a = finish(a, asym);

  // (b) calibration integral in the variable s = Phi^{-1}(tau): dtau/(tau s) = (log Phi)'(s) ds / s.
  CheckResult& b = out.calibration;
  b.criterion = "orlicz-calibration:" + spec.name();
  b.point = z0;
  double s0 = spec.inverse(spec.delta_star);
  std::vector<double> inc, tn;
  double total = 0.0;
  for (int n = 0; n < 40; ++n) {
    double lo = std::ldexp(s0, n), hi = 2 * lo;
    double d = gauss_integral([&](double s) { return spec.log_derivative(s) / s; }, lo, hi);
    total += d;
    inc.push_back(d);
    tn.push_back(n + 1.0);
    b.levels.push_back(spec.phi(hi));
    b.sequence.push_back(total);
  }
  auto cb = classify_increments(inc, tn);
  b.exponent = cb.exponent;
  b.numeric = cb.kind == IncrementClass::diverges    ? Verdict::pass
              : cb.kind == IncrementClass::converges ? Verdict::fail
                                                     : Verdict::inconclusive;
  std::optional<Verdict> bsym;
  // Closed forms: 1/(tau log tau) diverges; tau^{-1-1/p} and log^q(tau)/tau^2 converge.
  if (spec.kind == OrliczSpec::exp) bsym = Verdict::pass;
  else if (spec.kind != OrliczSpec::table) bsym = Verdict::fail;
  b = finish(b, bsym);

  CheckResult& c = out.combined;
  c.criterion = "orlicz:" + spec.name();
  c.point = z0;
  auto combine = [](Verdict x, Verdict y) {
    if (x == Verdict::fail || y == Verdict::fail) return Verdict::fail;
    if (x == Verdict::pass && y == Verdict::pass) return Verdict::pass;
    return Verdict::inconclusive;
  };
  c.numeric = combine(a.numeric, b.numeric);
  c.verdict = combine(a.verdict, b.verdict);
  if (a.symbolic && b.symbolic) c.symbolic = combine(*a.symbolic, *b.symbolic);
  c.sequence = {a.sequence.empty() ? 0.0 : fine.integral, total};
  c.note = "integral clause " + to_string(a.verdict) + ", calibration clause " + to_string(b.verdict);
  return out;
}

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {"divergence", "log", "loglog", "fmo", "bmo", "limsup", "calibrated", "orlicz"};
  return names;
}

Verdict CriteriaReport::summary(const std::string& criterion) const {
  bool any = false, all_pass = true;
  for (const auto& c : checks) {
    if (c.criterion != criterion) continue;
    any = true;
    if (c.verdict == Verdict::fail) return Verdict::fail;
    all_pass = all_pass && c.verdict == Verdict::pass;
  }
  return any && all_pass ? Verdict::pass : Verdict::inconclusive;
}

json CriteriaReport::to_json() const {
  json pts = json::array();
  for (cplx p : points) pts.push_back({p.real(), p.imag()});
  json checks_json = json::array();
  std::vector<std::string> names;
  for (const auto& c : checks) {
    checks_json.push_back(beltrami::to_json(c));
    if (std::find(names.begin(), names.end(), c.criterion) == names.end()) names.push_back(c.criterion);
  }
  json summary_json = json::object();
  for (const auto& n : names) summary_json[n] = to_string(summary(n));
  return json{{"points", pts}, {"summary", summary_json}, {"checks", checks_json}};
}

CriteriaReport run_criteria(const DilatationField& k, const std::vector<cplx>& boundary_points,
                            const CriteriaOptions& opt,
                            const std::function<std::optional<PowerLogSymbol>(cplx)>& symbol_at) {
  CriteriaReport rep;
  for (const auto& name : opt.criteria)
    if (std::find(criterion_names().begin(), criterion_names().end(), name) == criterion_names().end())
      throw Error(ErrorCode::unknown_id, "unknown criterion '" + name + "'");
  auto wanted = [&](const std::string& n) {
    return opt.criteria.empty() || std::find(opt.criteria.begin(), opt.criteria.end(), n) != opt.criteria.end();
  };
  rep.points = boundary_points;
  for (cplx s : k.singular_points) {
    bool dup = false;
    for (cplx p : rep.points) dup = dup || std::abs(p - s) < 1e-12;
    if (!dup) rep.points.push_back(s);
  }
  const double eps0 = opt.disks.eps0;
  OrliczSpec orlicz = wanted("orlicz") ? parse_orlicz(opt.orlicz) : OrliczSpec{};
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    cplx z0 = rep.points[i];
    auto symbol = symbol_at ? symbol_at(z0) : std::nullopt;
    if (wanted("divergence") || wanted("log") || wanted("loglog")) {
      auto radii = criteria_radii(eps0, 40);
      if (!k.exact) std::erase_if(radii, [&](double r) { return r < k.grid.h(); });
      auto prof = radial_profile(k, z0, radii);
      if (wanted("divergence")) rep.checks.push_back(check_divergence_integral(prof, eps0, symbol));
      if (wanted("log")) rep.checks.push_back(check_growth(prof, GrowthMode::log, symbol));
      if (wanted("loglog")) rep.checks.push_back(check_growth(prof, GrowthMode::loglog, symbol));
    }
    DiskOptions d = opt.disks;
    d.seed = opt.seed + i;
    if (wanted("fmo")) rep.checks.push_back(check_mean_oscillation(k, z0, OscillationMode::fmo, d, symbol));
    if (wanted("bmo")) rep.checks.push_back(check_mean_oscillation(k, z0, OscillationMode::bmo_local, d, symbol));
    if (wanted("limsup")) rep.checks.push_back(check_mean_oscillation(k, z0, OscillationMode::limsup_mean, d, symbol));
    if (wanted("calibrated")) {
      for (auto kind : {TestFunctionFamily::inverse_t, TestFunctionFamily::inverse_t_log}) {
        TestFunctionFamily fam;
        fam.kind = kind;
        fam.eps0 = eps0;
        rep.checks.push_back(check_calibrated_integral(k, z0, fam, 80, symbol));
      }
    }
    if (wanted("orlicz")) {
      auto o = check_orlicz(k, z0, orlicz, symbol);
      rep.checks.push_back(o.combined);
      rep.checks.push_back(o.integral);
      rep.checks.push_back(o.calibration);
    }
  }
  return rep;
}

}  // namespace beltrami
