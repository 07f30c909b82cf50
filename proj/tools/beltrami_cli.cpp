// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "beltrami/beltrami_c.h"

using nlohmann::json;

namespace {

struct Overrides {
  std::optional<std::string> domain, mu, phi, orlicz, out;
  std::optional<int> grid, samples, points, max_iter;
  std::optional<double> tol, trunc, verify_eps;
  std::vector<std::string> criteria;
  std::vector<double> trunc_levels;
  bool dump_spectral = false;
};

void print_error(int code, const std::string& msg) {
  std::cerr << json{{"status", "failed"}, {"code", code}, {"error", msg}}.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beltrami equation solver and criteria checker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bw_version()));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for randomised sampling");
  app.add_flag("--quiet", quiet, "suppress progress output");

  Overrides o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--domain", o.domain, "domain id, e.g. disk, slit-disk, annulus:0.5");
    sub->add_option("--mu", o.mu, "mu profile, e.g. constant:0.3, radial-power:0.5");
    sub->add_option("--grid", o.grid, "grid size N (power of two)");
    sub->add_option("--out", o.out, "output directory");
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "solver tolerance");
    sub->add_option("--trunc", o.trunc, "truncation epsilon for |mu| near 1");
    sub->add_option("--max-iter", o.max_iter, "iteration cap");
  };

  auto* check = app.add_subcommand("check", "evaluate divergence/oscillation criteria for K_mu");
  common(check);
  check->add_option("--criterion", o.criteria, "divergence, log, loglog, fmo, bmo, limsup, calibrated, orlicz")
      ->delimiter(',');
  check->add_option("--phi", o.orlicz, "Orlicz function: exp:a, power:p, tlogq:q");
  check->add_option("--points", o.points, "number of boundary points");

  auto* qc = app.add_subcommand("solve-qc", "principal solution of the Beltrami equation");
  common(qc);
  solver(qc);
  qc->add_flag("--dump-spectral", o.dump_spectral, "also write the Beurling transform of mu");

  auto* solve = app.add_subcommand("solve", "Dirichlet problem on a simply connected domain");
  common(solve);
  solver(solve);
  solve->add_option("--phi", o.phi, "boundary data: cos, fourier:a0,a1,b1,..., jump, csv:path");
  solve->add_option("--samples", o.samples, "boundary samples M (power of two)");
  solve->add_option("--verify-eps", o.verify_eps, "boundary verification tolerance");

  auto* multi = app.add_subcommand("solve-multivalent", "multivalent Dirichlet problem on the annulus");
  common(multi);
  solver(multi);
  multi->add_option("--phi", o.phi, "boundary data: annulus:inner,outer, fourier:..., csv:path");
  multi->add_option("--samples", o.samples, "boundary samples M (power of two)");

  auto* verify = app.add_subcommand("verify", "numerical check of boundary extension");
  common(verify);
  solver(verify);
  verify->add_option("--trunc-levels", o.trunc_levels, "truncation levels to compare")->delimiter(',');
  verify->add_option("--verify-eps", o.verify_eps, "diameter tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error(BW_INVALID_ARGUMENT, e.what());
    return 2;
  }

  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    try {
      cfg = json::parse(f);
    } catch (const json::exception& e) {
      print_error(BW_INVALID_ARGUMENT, std::string("cannot parse config: ") + e.what());
      return BW_INVALID_ARGUMENT;
    }
    if (!cfg.is_object()) {
      print_error(BW_INVALID_ARGUMENT, "config must be a JSON object");
      return BW_INVALID_ARGUMENT;
    }
  }
  cfg["command"] = app.get_subcommands().front()->get_name();
  if (seed) cfg["seed"] = *seed;
  if (quiet) cfg["quiet"] = true;
  auto set = [&](const char* key, const auto& v) {
    if (v) cfg[key] = *v;
  };
  set("domain", o.domain);
  set("mu", o.mu);
  set("phi", o.phi);
  set("orlicz", o.orlicz);
  set("out", o.out);
  set("grid", o.grid);
  set("samples", o.samples);
  set("points", o.points);
  set("max_iter", o.max_iter);
  set("tol", o.tol);
  set("trunc", o.trunc);
  set("verify_eps", o.verify_eps);
  if (!o.criteria.empty()) cfg["criteria"] = o.criteria;
  if (!o.trunc_levels.empty()) cfg["trunc_levels"] = o.trunc_levels;
  if (o.dump_spectral) cfg["dump_spectral"] = true;

  char* manifest = nullptr;
  bw_status st = bw_run(cfg.dump().c_str(), &manifest);
  std::string text = manifest ? manifest : "";
  bw_free_string(manifest);
  if (st != BW_OK) {
    if (text.empty()) print_error(st, bw_last_error());
    else std::cerr << text << "\n";
    return static_cast<int>(st);
  }
  if (!quiet) {
    json m = json::parse(text);
    std::cout << "status: " << m.value("status", "") << "\n";
    for (const auto& f : m["outputs"]) std::cout << "  " << f.get<std::string>() << "\n";
  }
  return 0;
}
