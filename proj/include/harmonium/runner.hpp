#pragma once

// Scenario runner behind the command-line tool: configuration (key = value
// file plus overrides), the named scenarios and their CSV output.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "harmonium/core_model.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/gaussian_dynamics.hpp"
#include "harmonium/numerics.hpp"
#include "harmonium/observables.hpp"
#include "harmonium/perturbation.hpp"
#include "harmonium/potential.hpp"
#include "harmonium/spectral.hpp"

namespace harmonium::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr int kCsvVersion = 1;

enum class Scenario { entropy_visibility, potentials_C, validate, fringe, constants };

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::entropy_visibility: return "entropy-visibility";
    case Scenario::potentials_C: return "potentials-C";
    case Scenario::validate: return "validate";
    case Scenario::fringe: return "fringe";
    case Scenario::constants: return "constants";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s) {
  for (Scenario sc : {Scenario::entropy_visibility, Scenario::potentials_C, Scenario::validate, Scenario::fringe,
                      Scenario::constants}) {
    if (to_string(sc) == s) return sc;
  }
  throw ConfigError(fmt::format(
      "unknown scenario '{}' (expected entropy-visibility | potentials-C | validate | fringe | constants)", s));
}

/// Every field is optional so that a config file and command-line flags can
/// be layered; resolve() fills scenario defaults.
struct ScenarioConfig {
  std::optional<Scenario> scenario;
  std::optional<double> alpha;
  std::optional<double> g0;
  std::optional<double> mass;
  std::optional<double> omega;
  std::optional<double> separation;
  std::optional<double> newton_G;
  std::optional<std::string> potential;  // comma-separated list allowed for potentials-C
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> steps;
  std::optional<double> alpha_min;
  std::optional<double> alpha_max;
  std::optional<bool> exact;
  std::optional<int> n_max;
  std::optional<int> l_max;
  std::optional<std::string> cache_dir;
  std::optional<std::string> out;

  /// Fields set in `over` win.
  void merge(const ScenarioConfig& over) {
    auto take = [](auto& mine, const auto& theirs) {
      if (theirs) mine = theirs;
    };
    take(scenario, over.scenario);
    take(alpha, over.alpha);
    take(g0, over.g0);
    take(mass, over.mass);
    take(omega, over.omega);
    take(separation, over.separation);
    take(newton_G, over.newton_G);
    take(potential, over.potential);
    take(t_min, over.t_min);
    take(t_max, over.t_max);
    take(steps, over.steps);
    take(alpha_min, over.alpha_min);
    take(alpha_max, over.alpha_max);
    take(exact, over.exact);
    take(n_max, over.n_max);
    take(l_max, over.l_max);
    take(cache_dir, over.cache_dir);
    take(out, over.out);
  }
};

// ---------------------------------------------------------------------------
// Config file

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid {}", where, text,
                                  std::is_integral_v<T> ? "integer" : "number"));
  }
  return v;
}

inline bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes" || text == "exact") return true;
  if (text == "false" || text == "0" || text == "no" || text == "closed-form") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", where, text));
}

}  // namespace detail

/// Applies one key = value pair; `where` prefixes diagnostics.
inline void set_field(ScenarioConfig& c, const std::string& key, const std::string& value, const std::string& where) {
  using detail::parse_number;
  const std::string at = fmt::format("{}: {}", where, key);
  if (key == "scenario") {
    try {
      c.scenario = parse_scenario(value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}", at, e.what()));
    }
  } else if (key == "alpha") c.alpha = parse_number<double>(value, at);
  else if (key == "g0") c.g0 = parse_number<double>(value, at);
  else if (key == "mass") c.mass = parse_number<double>(value, at);
  else if (key == "omega") c.omega = parse_number<double>(value, at);
  else if (key == "separation") c.separation = parse_number<double>(value, at);
  else if (key == "newton_G") c.newton_G = parse_number<double>(value, at);
  else if (key == "potential") c.potential = value;
  else if (key == "t_min") c.t_min = parse_number<double>(value, at);
  else if (key == "t_max") c.t_max = parse_number<double>(value, at);
  else if (key == "steps") c.steps = parse_number<int>(value, at);
  else if (key == "alpha_min") c.alpha_min = parse_number<double>(value, at);
  else if (key == "alpha_max") c.alpha_max = parse_number<double>(value, at);
  else if (key == "mode") c.exact = detail::parse_bool(value, at);
  else if (key == "nmax") c.n_max = parse_number<int>(value, at);
  else if (key == "lmax") c.l_max = parse_number<int>(value, at);
  else if (key == "cache_dir") c.cache_dir = value;
  else if (key == "out") c.out = value;
  else throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
}

/// key = value lines; '#' starts a comment.
inline ScenarioConfig parse_config(std::istream& in, const std::string& source = "config") {
  ScenarioConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = fmt::format("{}:{}", source, lineno);
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}: expected 'key = value', got '{}'", where, line));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(fmt::format("{}: empty key or value", where));
    set_field(c, key, value, where);
  }
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", file.string()));
  return parse_config(in, file.string());
}

// ---------------------------------------------------------------------------
// Resolved configuration

struct Resolved {
  Scenario scenario = Scenario::constants;
  DimensionlessParams params;
  std::vector<Potential> potentials;
  double t_min = 0.0;
  double t_max = 0.0;
  int steps = 2;
  double alpha_min = 2.0;
  double alpha_max = 10.0;
  bool exact = true;
  spectral::BasisSpec spec;
  std::optional<std::filesystem::path> cache_dir;
};

inline Resolved resolve(const ScenarioConfig& c) {
  if (!c.scenario) throw ConfigError("no scenario given");
  Resolved r;
  r.scenario = *c.scenario;
  r.exact = c.exact.value_or(true);

  const bool physical = c.mass || c.omega || c.separation || c.newton_G;
  if (physical && (c.alpha || c.g0)) {
    throw ConfigError("give either alpha/g0 or the physical parameters (mass, omega, separation, newton_G), not both");
  }
  double default_alpha = 100.0;
  if (r.scenario == Scenario::validate) default_alpha = 2.0;
  if (r.scenario == Scenario::fringe) default_alpha = 10.0;
  if (physical) {
    PhysicalConfig pc;
    pc.mass = c.mass.value_or(pc.mass);
    pc.trap_frequency = c.omega.value_or(pc.trap_frequency);
    pc.separation = c.separation.value_or(pc.separation);
    pc.newton_G = c.newton_G.value_or(pc.newton_G);
    try {
      r.params = nondimensionalize(pc);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else {
    r.params.alpha = c.alpha.value_or(default_alpha);
    double g0 = 1.0;
    if (r.scenario == Scenario::entropy_visibility) g0 = 1e-4 * r.params.alpha;
    if (r.scenario == Scenario::validate) g0 = 1e-6 * r.params.alpha;
    if (r.scenario == Scenario::fringe) g0 = 1e-3 * r.params.alpha;
    r.params.g0 = c.g0.value_or(g0);
  }
  if (!(r.params.alpha > 0) || !std::isfinite(r.params.alpha)) {
    throw ConfigError(fmt::format("alpha must be positive, got {}", r.params.alpha));
  }
  if (!(r.params.g0 >= 0) || !std::isfinite(r.params.g0)) {
    throw ConfigError(fmt::format("g0 must be non-negative, got {}", r.params.g0));
  }

  const std::string pot_text = c.potential.value_or("newton");
  std::stringstream ss(pot_text);
  std::string item;
  while (std::getline(ss, item, ',')) r.potentials.push_back(parse_potential(detail::trim(item), r.params.g0));
  if (r.potentials.empty()) throw ConfigError("potential list is empty");
  if (r.potentials.size() > 1 && r.scenario != Scenario::potentials_C) {
    throw ConfigError("a potential list is only accepted by the potentials-C scenario");
  }

  const double g0_over_alpha = r.params.g0 / r.params.alpha;
  switch (r.scenario) {
    case Scenario::entropy_visibility:
      r.t_min = c.t_min.value_or(0.0);
      r.t_max = c.t_max.value_or(g0_over_alpha > 0 ? 0.3 / g0_over_alpha : 100.0);
      r.steps = c.steps.value_or(31);
      break;
    case Scenario::validate:
      r.t_min = c.t_min.value_or(1.0);
      r.t_max = c.t_max.value_or(1e5);
      r.steps = c.steps.value_or(20);
      if (!(r.t_min > 0)) throw ConfigError("validate uses a log-spaced grid: t_min must be > 0");
      break;
    case Scenario::fringe:
      r.t_min = c.t_min.value_or(0.0);
      r.t_max = c.t_max.value_or(g0_over_alpha > 0 ? 0.1 / g0_over_alpha : 10.0);
      r.steps = c.steps.value_or(kFringeGridPoints);
      break;
    default:
      r.t_min = c.t_min.value_or(0.0);
      r.t_max = c.t_max.value_or(0.0);
      r.steps = c.steps.value_or(33);
      break;
  }
  if (!(r.t_min >= 0)) throw ConfigError(fmt::format("t_min must be >= 0, got {}", r.t_min));
  if (!(r.t_max >= r.t_min)) throw ConfigError(fmt::format("t_max ({}) must be >= t_min ({})", r.t_max, r.t_min));
  if (r.steps < 2) throw ConfigError(fmt::format("steps must be >= 2, got {}", r.steps));

  r.alpha_min = c.alpha_min.value_or(2.0);
  r.alpha_max = c.alpha_max.value_or(10.0);
  if (!(r.alpha_min > 0) || !(r.alpha_max >= r.alpha_min)) {
    throw ConfigError(fmt::format("need 0 < alpha_min <= alpha_max (got {}, {})", r.alpha_min, r.alpha_max));
  }

  if (r.scenario == Scenario::validate) {
    try {
      r.spec = spectral::default_spec(r.params.alpha, spectral::Sign::plus);
    } catch (const DomainError& e) {
      if (!(c.n_max && c.l_max)) throw ConfigError(fmt::format("{} (set nmax and lmax)", e.what()));
      r.spec.sign = spectral::Sign::plus;
    }
    if (c.n_max) r.spec.n_max = *c.n_max;
    if (c.l_max) r.spec.l_max = *c.l_max;
    if (r.spec.n_max < 0 || r.spec.l_max < 0) throw ConfigError("nmax and lmax must be >= 0");
  }
  if (c.cache_dir) r.cache_dir = std::filesystem::path(*c.cache_dir);
  else r.cache_dir = spectral::default_cache_dir();
  return r;
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, Scenario s, const std::vector<std::string>& columns) : os_(os) {
    fmt::print(os_, "# harmonium-csv v{} scenario={}\n", kCsvVersion, to_string(s));
    for (std::size_t i = 0; i < columns.size(); ++i) fmt::print(os_, "{}{}", i ? "," : "", columns[i]);
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) fmt::print(os_, "{}{}", i ? "," : "", number(values[i]));
    os_ << '\n';
  }

  static std::string number(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.17g}", v);
  }

 private:
  std::ostream& os_;
};

/// Evaluates rows[i] = f(i) concurrently and keeps input order.
template <class F>
std::vector<std::vector<double>> sweep(int count, F&& f) {
  std::vector<std::vector<double>> rows(count);
  numerics::parallel_for(count, [&](int i) { rows[i] = f(i); });
  return rows;
}

inline std::vector<double> linear_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return g;
}

// ---------------------------------------------------------------------------
// Scenarios

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
};

inline RunResult run_entropy_visibility(const Resolved& r, std::ostream& os) {
  const Potential pot = r.potentials.front();
  const PhaseEvolution ev(build_initial_state(r.params.alpha), pot, r.params);
  const double C = scaling_constant_C(pot, r.params);
  const auto grid = linear_grid(r.t_min, r.t_max, r.steps);
  CsvWriter csv(os, r.scenario, {"g0t_over_alpha", "S_exact", "S_closed", "V_exact", "V_closed"});
  const auto rows = sweep(r.steps, [&](int i) -> std::vector<double> {
    double t = grid[i];
    if (t > 0) t = ev.crossing_time(t);
    const SuperpositionState s = ev.state_at(t);
    const double x = C * t;
    const double nan = std::nan("");
    const double s_exact = r.exact ? phase_entropy(s) : nan;
    const double v_exact = r.exact ? (t > 0 ? fringe_visibility_exact(s) : 1.0) : nan;
    return {r.params.g0 * t / r.params.alpha, s_exact, phase_entropy_closed_form(x), v_exact,
            visibility_closed_form(x)};
  });
  for (const auto& row : rows) csv.row(row);
  return {};
}

inline RunResult run_potentials_C(const Resolved& r, std::ostream& os) {
  std::vector<std::string> cols{"alpha"};
  for (const auto& p : r.potentials) cols.push_back(fmt::format("C[{}]", p.name()));
  CsvWriter csv(os, r.scenario, cols);
  const auto grid = linear_grid(r.alpha_min, r.alpha_max, r.steps);
  const auto rows = sweep(r.steps, [&](int i) {
    std::vector<double> row{grid[i]};
    for (const auto& p : r.potentials) row.push_back(scaling_constant_C(p, {p.strength(), grid[i]}));
    return row;
  });
  for (const auto& row : rows) csv.row(row);
  return {};
}

inline RunResult run_validate(const Resolved& r, std::ostream& os) {
  const auto grid = spectral::log_grid(r.t_min, r.t_max, r.steps);
  const auto res = spectral::validate(r.params.alpha, r.params.g0 / r.params.alpha, grid, r.spec, r.cache_dir);
  CsvWriter csv(os, r.scenario, {"t", "d_GH", "d_SHO", "pass"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({res.t[i], res.d_gh[i], res.d_sho[i],
              spectral::ValidationResult::row_passes(res.d_gh[i], res.d_sho[i]) ? 1.0 : 0.0});
  }
  if (!res.pass()) return {kExitNumerical, "spectral-validator: d_GH >= d_SHO at some sample"};
  return {};
}

inline RunResult run_fringe(const Resolved& r, std::ostream& os) {
  const Potential pot = r.potentials.front();
  const PhaseEvolution ev(build_initial_state(r.params.alpha), pot, r.params);
  const double t = ev.crossing_time(r.t_max);
  const SuperpositionState s = ev.state_at(t);
  const FringeProfile f = detection_profile(s, r.steps);
  fmt::print(os, "# t = {}\n", CsvWriter::number(t));
  CsvWriter csv(os, r.scenario, {"x1", "probability"});
  for (std::size_t i = 0; i < f.grid.size(); ++i) csv.row({f.grid[i], f.probability[i]});
  return {};
}

inline RunResult run_constants(const Resolved& r, std::ostream& os) {
  const Potential pot = r.potentials.front();
  const PerturbationConstants k = perturbation_constants(pot, r.params.alpha);
  fmt::print(os, "# harmonium-csv v{} scenario={}\n", kCsvVersion, to_string(r.scenario));
  os << "name,value\n";
  for (const auto& [name, v] : std::vector<std::pair<std::string, double>>{
           {"C_phi", k.C_phi}, {"C_lambda", k.C_lambda}, {"C_gab", k.C_gab}, {"C_gba", k.C_gba},
           {"C_aa", k.C_aa}, {"c", k.c}}) {
    fmt::print(os, "{},{}\n", name, CsvWriter::number(v));
  }
  return {};
}

/// Runs the scenario writing CSV to `os`; numerical failures are reported via
/// the exit code and message (configuration errors throw ConfigError).
inline RunResult run(const Resolved& r, std::ostream& os) {
  try {
    switch (r.scenario) {
      case Scenario::entropy_visibility: return run_entropy_visibility(r, os);
      case Scenario::potentials_C: return run_potentials_C(r, os);
      case Scenario::validate: return run_validate(r, os);
      case Scenario::fringe: return run_fringe(r, os);
      case Scenario::constants: return run_constants(r, os);
    }
  } catch (const NumericalError& e) {
    return {kExitNumerical, fmt::format("numerical error: {}", e.what())};
  } catch (const SingularityError& e) {
    return {kExitNumerical, fmt::format("singularity: {}", e.what())};
  } catch (const DomainError& e) {
    return {kExitNumerical, fmt::format("domain error: {}", e.what())};
  }
  return {};
}

/// Resolves, runs and writes to the configured output (stdout when unset).
inline RunResult run(const ScenarioConfig& c, std::ostream& fallback) {
  Resolved r;
  try {
    r = resolve(c);
  } catch (const ConfigError& e) {
    return {kExitConfig, fmt::format("config error: {}", e.what())};
  }
  if (c.out && *c.out != "-") {
    std::ofstream file(*c.out, std::ios::trunc);
    if (!file) return {kExitConfig, fmt::format("config error: cannot write '{}'", *c.out)};
    return run(r, file);
  }
  return run(r, fallback);
}

}  // namespace harmonium::runner
