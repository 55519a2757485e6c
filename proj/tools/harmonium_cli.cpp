// harmonium: scenario runner.  One subcommand per scenario; CSV goes to --out
// (or stdout).  Exit codes: 0 ok, 2 configuration error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "harmonium/runner.hpp"

namespace {

using harmonium::runner::ScenarioConfig;

template <class T>
void option(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

std::string describe(harmonium::runner::Scenario s) {
  using harmonium::runner::Scenario;
  switch (s) {
    case Scenario::entropy_visibility: return "entropy and fringe visibility over g0 t/alpha, exact and closed form";
    case Scenario::potentials_C: return "scaling constant C against alpha, one column per potential";
    case Scenario::validate: return "spectral distances d_GH and d_SHO over log-spaced times";
    case Scenario::fringe: return "particle-1 detection probability at a crossing time";
    case Scenario::constants: return "orbit-averaged constants and the entropy constant c";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  namespace rn = harmonium::runner;
  CLI::App app{"Two trapped particles with a weak gravitational coupling: entanglement, fringes, spectral checks"};
  app.require_subcommand(1);
  app.fallthrough();

  ScenarioConfig flags;
  std::string config_file;
  app.add_option("--config", config_file, "key = value configuration file (flags override it)");
  option(app, "--alpha", flags.alpha, "coherent displacement amplitude");
  option(app, "--g0", flags.g0, "dimensionless coupling");
  option(app, "--mass", flags.mass, "particle mass [kg] (physical parametrization)");
  option(app, "--omega", flags.omega, "trap angular frequency [rad/s]");
  option(app, "--separation", flags.separation, "superposition separation [m]");
  option(app, "--newton-G", flags.newton_G, "gravitational constant [m^3 kg^-1 s^-2]");
  option(app, "--potential", flags.potential, "newton | yukawa:<mu> | coulomb:<d> (comma list for potentials-C)");
  option(app, "--t-min", flags.t_min, "first time sample");
  option(app, "--t-max", flags.t_max, "last time sample (fringe: time near which to look for a crossing)");
  option(app, "--steps", flags.steps, "number of samples (fringe: grid points)");
  option(app, "--alpha-min", flags.alpha_min, "potentials-C: smallest alpha");
  option(app, "--alpha-max", flags.alpha_max, "potentials-C: largest alpha");
  option(app, "--nmax", flags.n_max, "spectral basis: largest radial quantum number");
  option(app, "--lmax", flags.l_max, "spectral basis: largest angular momentum");
  option(app, "--cache-dir", flags.cache_dir, "eigendecomposition cache (default $HARMONIUM_CACHE_DIR)");
  option(app, "--out", flags.out, "output CSV path ('-' for stdout)");
  app.add_flag_callback("--exact", [&] { flags.exact = true; }, "evaluate the exact routes (default)");
  app.add_flag_callback("--closed-form", [&] { flags.exact = false; }, "closed forms only; exact columns are nan");

  for (auto s : {rn::Scenario::entropy_visibility, rn::Scenario::potentials_C, rn::Scenario::validate,
                 rn::Scenario::fringe, rn::Scenario::constants}) {
    app.add_subcommand(rn::to_string(s), describe(s))->callback([&flags, s] { flags.scenario = s; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rn::kExitConfig;
  }

  ScenarioConfig config;
  try {
    if (!config_file.empty()) config = rn::load_config(config_file);
  } catch (const harmonium::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return rn::kExitConfig;
  }
  config.merge(flags);

  const rn::RunResult result = rn::run(config, std::cout);
  if (!result.message.empty()) fmt::print(stderr, "{}\n", result.message);
  return result.exit_code;
}
