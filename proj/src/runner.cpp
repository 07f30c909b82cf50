#include "beltrami/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "beltrami/criteria.hpp"
#include "beltrami/pipeline.hpp"
#include "beltrami/solver.hpp"
#include "beltrami/transforms.hpp"
#include "beltrami/version.hpp"

namespace beltrami {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// "name:1,2,3" -> name, {1,2,3}; the tail is kept verbatim when it is not numeric.
std::pair<std::string, std::string> split_id(const std::string& s) {
  auto c = s.find(':');
  if (c == std::string::npos) return {s, ""};
  return {s.substr(0, c), s.substr(c + 1)};
}

std::vector<double> numbers(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad number '" + item + "' in " + what);
    }
  }
  return v;
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::invalid_argument, std::string("config key '") + key + "' has the wrong type");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Emitter {
 public:
  Emitter(const RunConfig& c) : cfg_(c), dir_(c.out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create output directory " + c.out + ": " + ec.message());
    manifest_ = json{{"command", c.command},
                     {"library_version", kVersion},
                     {"config", c.to_json()},
                     {"grid", c.grid},
                     {"samples", c.samples},
                     {"tolerances", {{"solver", c.tol}, {"truncation", c.trunc}, {"verify", c.verify_eps}}},
                     {"seed", c.seed},
                     {"status", "running"},
                     {"outputs", json::array()}};
    write_manifest();
  }

  void json_file(const std::string& name, const json& j) {
    std::ofstream f(dir_ / name);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + (dir_ / name).string());
    f << j.dump(2) << "\n";
    record(name);
  }

  /// CSV with header x,y,Re,Im; rows with non-finite values are skipped.
  void csv_file(const std::string& name, const std::vector<std::pair<cplx, cplx>>& rows) {
    std::ofstream f(dir_ / name);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + (dir_ / name).string());
    f << "x,y,Re,Im\n";
    for (const auto& [z, v] : rows) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;
      f << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
    }
    record(name);
  }

  void finish(const std::string& status, const json& extra = json::object()) {
    manifest_["status"] = status;
    for (auto it = extra.begin(); it != extra.end(); ++it) manifest_[it.key()] = it.value();
    write_manifest();
  }

  const json& manifest() const { return manifest_; }

 private:
  void record(const std::string& name) {
    manifest_["outputs"].push_back(name);
    if (!cfg_.quiet) std::cerr << "wrote " << (dir_ / name).string() << "\n";
  }
  void write_manifest() {
    std::ofstream f(dir_ / "manifest.json");
    if (!f) throw Error(ErrorCode::io_error, "cannot write manifest in " + dir_.string());
    f << manifest_.dump(2) << "\n";
  }

  const RunConfig& cfg_;
  fs::path dir_;
  json manifest_;
};

std::shared_ptr<const PrimeEndChart> make_domain(const RunConfig& c) {
  if (c.domain == "jordan-polyline" && !c.domain_csv.empty()) {
    auto v = read_polyline_csv(c.domain_csv);
    cplx centroid = 0.0;
    for (cplx p : v) centroid += p;
    centroid /= static_cast<double>(v.size());
    return polyline_domain(v, centroid);
  }
  return catalog_domain(c.domain, c.domain_params);
}

int stride(const RunConfig& c) { return c.csv_stride > 0 ? c.csv_stride : std::max(1, c.grid / 256); }

std::vector<std::pair<cplx, cplx>> grid_rows(const Grid& g, const ComplexGrid& v, int step) {
  std::vector<std::pair<cplx, cplx>> rows;
  for (int j = step / 2; j < g.n; j += step)
    for (int i = step / 2; i < g.n; i += step) rows.emplace_back(g.point(i, j), v[g.index(i, j)]);
  return rows;
}

json qc_report(const QcMap& F) {
  const auto& r = F.report;
  return json{{"iterations", F.iterations},
              {"converged", F.converged},
              {"status", F.converged ? "converged" : "unconverged"},
              {"contraction", F.contraction},
              {"sup_mu", F.mu.sup_norm()},
              {"increments", F.increments},
              {"truncation", F.truncation},
              {"margin_warning", F.margin_warning},
              {"residual", r.residual},
              {"relative_residual", r.relative},
              {"median_mu_error", r.median_mu_error},
              {"jacobian",
               {{"min", r.jacobian.min},
                {"median", r.jacobian.median},
                {"negative_cells", r.jacobian.negative_cells},
                {"fold_cells", r.jacobian.fold_cells},
                {"cells", r.jacobian.cells},
                {"positive_fraction", r.jacobian.positive_fraction}}}};
}

MuField make_mu(const RunConfig& c, const DomainSpec& d, double trunc) { return sample_mu(c.mu, d, c.grid, trunc); }

CriteriaReport criteria_for(const RunConfig& c, const PrimeEndChart& chart) {
  MuField mu;
  try {
    mu = make_mu(c, chart.domain(), c.trunc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::domain_error) throw;
    // Criteria concern K itself: cap grid samples just below 1 but keep the exact evaluator untouched.
    mu = make_mu(c, chart.domain(), 1e-12);
    mu.truncation = 0.0;
  }
  DilatationField k = dilatation_field(mu);
  std::vector<cplx> pts;
  for (int i = 0; i < c.points; ++i) pts.push_back(chart.point(kTwoPi * i / c.points, 1.0));
  CriteriaOptions opt;
  opt.criteria = c.criteria;
  opt.orlicz = c.orlicz;
  opt.points = c.points;
  opt.seed = c.seed;
  auto symbol = power_log_symbol(mu);
  return run_criteria(k, pts, opt, [symbol](cplx) { return symbol; });
}

void run_check(const RunConfig& c, Emitter& out) {
  auto chart = make_domain(c);
  auto rep = criteria_for(c, *chart);
  json j = rep.to_json();
  j["mu"] = c.mu.name;
  j["orlicz"] = c.orlicz;
  out.json_file("criteria.json", j);
  out.finish("ok", {{"summary", j["summary"]}});
}

void run_solve_qc(const RunConfig& c, Emitter& out) {
  auto chart = make_domain(c);
  MuField mu = make_mu(c, chart->domain(), c.trunc);
  QcMap F = principal_solution(mu, {c.tol, c.trunc, c.max_iter});
  out.csv_file("w.csv", grid_rows(F.grid(), F.w, stride(c)));
  if (c.dump_spectral) {
    SpectralGrid sg(mu.grid);
    out.csv_file("spectral.csv", grid_rows(mu.grid, sg.beurling(mu.values).values, stride(c)));
  }
  json rep = qc_report(F);
  out.json_file("residual.json", rep);
  out.finish(F.converged ? "ok" : "unconverged", {{"converged", F.converged}});
}

void run_solve(const RunConfig& c, Emitter& out) {
  auto chart = make_domain(c);
  if (chart->domain().kind == DomainKind::annulus) throw Error(ErrorCode::invalid_argument, "use solve-multivalent for the annulus");
  DirichletProblem pb{chart, make_mu(c, chart->domain(), c.trunc), parse_phi(c.phi, chart), c.samples,
                      {c.tol, c.trunc, c.max_iter}, c.verify_eps};
  RegularSolution s = solve_regular(pb);
  ComplexGrid f = sample_solution(s, pb.mu.grid, chart->domain());
  out.csv_file("solution.csv", grid_rows(pb.mu.grid, f, stride(c)));
  BoundaryReport br =
      verify_boundary([&](cplx z) { return s(z).real(); }, *chart, pb.phi, c.verify_eps, c.prime_ends, c.extra_angles);
  out.json_file("boundary.json", br.to_json());
  json crit = criteria_for(c, *chart).to_json();
  out.json_file("criteria.json", crit);
  json rep{{"converged", s.converged},
           {"composite_residual", s.composite_residual},
           {"composite_jacobian_positive_fraction", s.composite_jacobian.positive_fraction},
           {"composite_fold_cells", s.composite_jacobian.fold_cells},
           {"map_accuracy", s.map_accuracy},
           {"monodromy_period", monodromy_period(s, chart->point(0.0, 0.0), 0.25 * std::abs(chart->point(0.0, 0.9) - chart->point(0.0, 0.0)))},
           {"boundary_verdict", br.pass ? "pass" : "fail"},
           {"criteria_summary", crit["summary"]}};
  if (s.F) rep["solver"] = qc_report(*s.F);
  out.json_file("solution.json", rep);
  out.finish(s.converged ? "ok" : "unconverged", {{"boundary_verdict", rep["boundary_verdict"]}});
}

void run_solve_multivalent(const RunConfig& c, Emitter& out) {
  auto chart = make_domain(c);
  DirichletProblem pb{chart, make_mu(c, chart->domain(), c.trunc), parse_phi(c.phi, chart), c.samples,
                      {c.tol, c.trunc, c.max_iter}, c.verify_eps};
  MultivalentSolution s = solve_multivalent(pb, 100, c.seed, c.grid);
  std::vector<std::pair<cplx, cplx>> rows;
  const Grid& g = pb.mu.grid;
  const int step = stride(c);
  // Im f on the branch continued from the positive real axis (cut along the negative axis).
  for (int j = step / 2; j < g.n; j += step)
    for (int i = step / 2; i < g.n; i += step) {
      cplx z = g.point(i, j);
      if (!chart->domain().contains(z)) continue;
      cplx w = s.g(z);
      double v = s.u.regular_part(w).imag() + s.u.c0 * std::arg(w);
      rows.emplace_back(z, cplx(s.re_f(z), v));
    }
  out.csv_file("solution.csv", rows);
  BoundaryReport br = verify_boundary([&](cplx z) { return s.re_f(z); }, *chart, pb.phi, c.verify_eps, c.prime_ends);
  out.json_file("boundary.json", br.to_json());
  json rep{{"rho", s.rho},
           {"image_rho", s.image_rho},
           {"measured_image_rho", s.measured_image_rho},
           {"exponent", s.exponent},
           {"c0", s.u.c0},
           {"period", s.period},
           {"boundary_error", s.u.boundary_error},
           {"n_max", s.u.n_max},
           {"loops", s.loops},
           {"max_re_jump", s.max_re_jump},
           {"max_im_jump_error", s.max_im_jump_error},
           {"normalisation", "v = 0 at the start of every path"}};
  if (!s.u.warning.empty()) rep["warning"] = s.u.warning;
  out.json_file("multivalent.json", rep);
  out.finish("ok", {{"period", s.period}});
}

void run_verify(const RunConfig& c, Emitter& out) {
  auto chart = make_domain(c);
  std::vector<double> levels = c.trunc_levels.empty() ? std::vector<double>{c.trunc} : c.trunc_levels;
  json reports = json::array();
  std::vector<double> finals;
  bool all = true;
  for (double t : levels) {
    MuField mu = make_mu(c, chart->domain(), t);
    QcMap F = principal_solution(mu, {c.tol, t, c.max_iter});
    ExtensionReport r = verify_extension(F, *chart, 16, 12, c.verify_eps);
    double fin = 0.0;
    for (const auto& e : r.ends) fin = std::max(fin, e.forward.back());
    finals.push_back(fin);
    all = all && r.verdict == "consistent-with-extension";
    json j = r.to_json();
    j["truncation"] = t;
    j["final_diameter"] = fin;
    j["solver"] = qc_report(F);
    reports.push_back(j);
  }
  std::vector<double> diffs;
  for (std::size_t i = 1; i < finals.size(); ++i) diffs.push_back(std::abs(finals[i] - finals[i - 1]));
  bool stable = std::all_of(diffs.begin(), diffs.end(), [](double d) { return d < 1e-2; });
  json ext{{"levels", reports},
           {"successive_final_differences", diffs},
           {"stable", stable},
           {"verdict", all && stable ? "consistent-with-extension" : "not-consistent"}};
  out.json_file("extension.json", ext);
  out.finish("ok", {{"verdict", ext["verdict"]}});
}

}  // namespace

json RunConfig::to_json() const {
  json mu_j{{"profile", mu.name}, {"params", mu.params}};
  if (!mu.csv_path.empty()) mu_j["csv"] = mu.csv_path;
  json dom{{"id", domain}, {"params", domain_params}};
  if (!domain_csv.empty()) dom["csv"] = domain_csv;
  return json{{"command", command}, {"domain", dom},       {"mu", mu_j},
              {"phi", phi},         {"grid", grid},        {"samples", samples},
              {"tol", tol},         {"trunc", trunc},      {"max_iter", max_iter},
              {"out", out},         {"seed", seed},        {"criteria", criteria},
              {"orlicz", orlicz},   {"points", points},    {"verify_eps", verify_eps},
              {"prime_ends", prime_ends}, {"extra_angles", extra_angles}, {"trunc_levels", trunc_levels},
              {"csv_stride", csv_stride}, {"dump_spectral", dump_spectral}};
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "command", "domain", "mu", "phi", "grid", "samples", "tol", "trunc", "max_iter", "out", "seed", "quiet",
      "criteria", "orlicz", "points", "verify_eps", "prime_ends", "extra_angles", "trunc_levels", "csv_stride",
      "dump_spectral"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw Error(ErrorCode::invalid_argument, "unknown config key '" + it.key() + "'");
  RunConfig c;
  c.command = get<std::string>(j, "command", "");
  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (d.is_string()) {
      auto [id, rest] = split_id(d.get<std::string>());
      c.domain = id;
      if (!rest.empty()) {
        if (id == "jordan-polyline") c.domain_csv = rest;
        else c.domain_params = numbers(rest, "domain");
      }
    } else if (d.is_object()) {
      c.domain = get<std::string>(d, "id", "disk");
      c.domain_params = get<std::vector<double>>(d, "params", {});
      c.domain_csv = get<std::string>(d, "csv", "");
    } else {
      throw Error(ErrorCode::invalid_argument, "config key 'domain' must be a string or object");
    }
  }
  if (j.contains("mu")) {
    const json& m = j["mu"];
    if (m.is_string()) {
      auto [name, rest] = split_id(m.get<std::string>());
      c.mu.name = name;
      if (name == "custom-grid") c.mu.csv_path = rest;
      else if (!rest.empty()) c.mu.params = numbers(rest, "mu");
    } else if (m.is_object()) {
      c.mu.name = get<std::string>(m, "profile", "zero");
      c.mu.params = get<std::vector<double>>(m, "params", {});
      c.mu.csv_path = get<std::string>(m, "csv", "");
    } else {
      throw Error(ErrorCode::invalid_argument, "config key 'mu' must be a string or object");
    }
  }
  c.phi = get<std::string>(j, "phi", c.phi);
  c.grid = get<int>(j, "grid", c.grid);
  c.samples = get<int>(j, "samples", c.samples);
  c.tol = get<double>(j, "tol", c.tol);
  c.trunc = get<double>(j, "trunc", c.trunc);
  c.max_iter = get<int>(j, "max_iter", c.max_iter);
  c.out = get<std::string>(j, "out", c.out);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.quiet = get<bool>(j, "quiet", c.quiet);
  c.criteria = get<std::vector<std::string>>(j, "criteria", {});
  c.orlicz = get<std::string>(j, "orlicz", c.orlicz);
  c.points = get<int>(j, "points", c.points);
  c.verify_eps = get<double>(j, "verify_eps", c.verify_eps);
  c.prime_ends = get<int>(j, "prime_ends", c.prime_ends);
  c.extra_angles = get<std::vector<double>>(j, "extra_angles", {});
  c.trunc_levels = get<std::vector<double>>(j, "trunc_levels", {});
  c.csv_stride = get<int>(j, "csv_stride", c.csv_stride);
  c.dump_spectral = get<bool>(j, "dump_spectral", c.dump_spectral);
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"check", "solve-qc", "solve", "solve-multivalent", "verify"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw Error(ErrorCode::invalid_argument,
                "unknown command '" + c.command + "' (check, solve-qc, solve, solve-multivalent, verify)");
  if (c.grid < 16 || !is_power_of_two(c.grid))
    throw Error(ErrorCode::invalid_argument, "grid N=" + std::to_string(c.grid) + " must be a power of two >= 16");
  if (c.samples < 64 || !is_power_of_two(c.samples))
    throw Error(ErrorCode::invalid_argument,
                "samples M=" + std::to_string(c.samples) + " must be a power of two >= 64");
  if (!(c.tol > 0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
  if (!(c.verify_eps > 0)) throw Error(ErrorCode::invalid_argument, "verify_eps must be positive");
  if (!(c.trunc >= 0 && c.trunc < 1)) throw Error(ErrorCode::invalid_argument, "trunc must lie in [0, 1)");
  for (double t : c.trunc_levels)
    if (!(t > 0 && t < 1)) throw Error(ErrorCode::invalid_argument, "trunc_levels entries must lie in (0, 1)");
  if (c.max_iter < 1) throw Error(ErrorCode::invalid_argument, "max_iter must be at least 1");
  if (c.points < 1) throw Error(ErrorCode::invalid_argument, "points must be at least 1");
  if (c.prime_ends < 1) throw Error(ErrorCode::invalid_argument, "prime_ends must be at least 1");
  if (c.out.empty()) throw Error(ErrorCode::invalid_argument, "out must name a directory");
  static const std::vector<std::string> domains = {"disk", "slit-disk", "annulus", "jordan-polyline", "plane"};
  if (std::find(domains.begin(), domains.end(), c.domain) == domains.end())
    throw Error(ErrorCode::unknown_id, "unknown domain id '" + c.domain + "'");
  static const std::vector<std::string> profiles = {"zero", "constant", "radial-power", "boundary-log", "power-log", "custom-grid"};
  if (std::find(profiles.begin(), profiles.end(), c.mu.name) == profiles.end())
    throw Error(ErrorCode::unknown_id, "unknown mu profile '" + c.mu.name + "'");
  for (const auto& n : c.criteria)
    if (std::find(criterion_names().begin(), criterion_names().end(), n) == criterion_names().end())
      throw Error(ErrorCode::unknown_id, "unknown criterion '" + n + "'");
}

RunResult run(const RunConfig& c) {
  validate(c);
  Emitter out(c);
  try {
    if (c.command == "check") run_check(c, out);
    else if (c.command == "solve-qc") run_solve_qc(c, out);
    else if (c.command == "solve") run_solve(c, out);
    else if (c.command == "solve-multivalent") run_solve_multivalent(c, out);
    else run_verify(c, out);
  } catch (const Error& e) {
    json err{{"error", e.what()}, {"code", static_cast<int>(e.code())}, {"stage", c.command}};
    out.json_file("error.json", err);
    out.finish("failed", {{"error", err}});
    throw;
  }
  return {0, out.manifest()};
}

}  // namespace beltrami
