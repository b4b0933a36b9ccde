// poissonctl: verify, reduce and integrate multiseparable Poisson systems.

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisson/commands.hpp"
#include "poisson/config.hpp"

namespace {

struct SystemOptions {
  std::string config_path;
  std::string system;
  std::vector<std::string> params;
};

void add_system_options(CLI::App* cmd, SystemOptions& opts) {
  auto* config = cmd->add_option("--config", opts.config_path, "JSON system description");
  auto* system = cmd->add_option("--system", opts.system, "catalog system: kmk, toda, symplectic");
  cmd->add_option("--param", opts.params, "catalog parameter K=V (repeatable)")->needs(system);
  config->excludes(system);
  system->excludes(config);
}

poisson::SystemConfig load_system(const SystemOptions& opts) {
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + opts.config_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return poisson::parse_config(text);
  }
  if (opts.system.empty()) throw std::runtime_error("one of --config or --system is required");
  std::map<std::string, double> params;
  for (const std::string& kv : opts.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw std::runtime_error("--param expects K=V, got '" + kv + "'");
    std::size_t used = 0;
    const std::string value = kv.substr(eq + 1);
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw std::runtime_error("--param " + kv + ": value is not a number");
    params[kv.substr(0, eq)] = v;
  }
  return poisson::catalog_config(opts.system, params);
}

poisson::Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::runtime_error("--x0: cannot read '" + item + "'");
    values.push_back(v);
  }
  return Eigen::Map<poisson::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int emit(const poisson::CommandResult& result, const std::string& out_path) {
  if (!result.summary.empty()) std::cerr << result.summary << '\n';
  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return poisson::kExitUsage;
    }
    out << result.output;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiseparable Poisson structures: verification, Darboux reduction, integration"};
  app.require_subcommand(1);

  SystemOptions sys;
  int points = 50;
  std::uint64_t seed = 0;
  std::string out_path;
  double dt = 1e-3;
  long long steps = 1000;
  std::string route = "direct";
  std::string hamiltonian;
  std::string x0;

  auto* verify = app.add_subcommand("verify", "Jacobi, Casimir and rank sweeps");
  add_system_options(verify, sys);
  verify->add_option("--points", points, "sample points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "sampler seed");
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* darboux = app.add_subcommand("darboux", "Darboux chart and canonical-form certificate");
  add_system_options(darboux, sys);
  darboux->add_option("--points", points, "certification points (default 100)")->check(CLI::PositiveNumber);
  darboux->add_option("--seed", seed, "sampler seed");
  darboux->add_option("--out", out_path, "write the report here instead of stdout");

  auto* integrate = app.add_subcommand("integrate", "trajectory as CSV");
  add_system_options(integrate, sys);
  integrate->add_option("--dt", dt, "time step")->check(CLI::PositiveNumber);
  integrate->add_option("--steps", steps, "number of steps")->check(CLI::NonNegativeNumber);
  integrate->add_option("--route", route, "direct (RK4 in x) or canonical (midpoint in z)")
      ->check(CLI::IsMember({"direct", "canonical"}));
  integrate->add_option("--hamiltonian", hamiltonian,
                        "quadratic-diagonal[:w1,..], linear:c1,.. or coordinate:i");
  integrate->add_option("--x0", x0, "initial state, comma separated");
  integrate->add_option("--out", out_path, "write the CSV here instead of stdout");

  auto* catalog = app.add_subcommand("catalog", "catalog systems");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list catalog systems and default parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return poisson::kExitUsage;
  }

  try {
    if (list->parsed()) return emit(poisson::cmd_catalog_list(), out_path);

    const poisson::SystemConfig config = load_system(sys);
    if (verify->parsed()) return emit(poisson::cmd_verify(config, points, seed), out_path);
    if (darboux->parsed())
      return emit(poisson::cmd_darboux(config, darboux->count("--points") ? points : 100, seed), out_path);

    poisson::IntegrateOptions opts;
    opts.dt = dt;
    opts.steps = steps;
    opts.route = route == "canonical" ? poisson::Route::Canonical : poisson::Route::Direct;
    if (!hamiltonian.empty()) opts.hamiltonian = poisson::parse_hamiltonian(hamiltonian, config.n);
    if (!x0.empty()) opts.x0 = parse_point(x0);
    return emit(poisson::cmd_integrate(config, opts), out_path);
  } catch (const std::exception& e) {
    return emit(poisson::usage_error(e), "");
  }
}
