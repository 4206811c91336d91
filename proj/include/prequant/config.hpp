#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "prequant/errors.hpp"

namespace prequant {

/// Named tolerances used by the scenario checks, each overridable from a
/// config file under the `tolerances.` section.  Values are the contract
/// the reports are judged against, so they live here, not inline in code.
struct Tolerances {
  double moser_residual = 1e-3;       // sup |flow^* w1 - w0| at the working step count
  double moser_ratio_min = 4.0;       // residual shrink factor when steps double
  double darboux_residual = 1e-3;     // sup |chart^* w - standard| on the ball
  double gauge_sup = 1e-5;            // sup |xi - d phi|
  double path_disagreement = 1e-5;    // canonical path family disagreement
  double hermitian_real = 1e-10;      // |Re phi| for hermitian pairs
  double equivariance = 1e-5;         // flow vs rotation commutator
  double averaged_gauge = 1e-5;       // sup |xi - d phi_bar|
  double invariance = 1e-6;           // sup |g^* f - f| over group samples
  double period = 1e-9;               // loop period against its closed form
  double circle_pullback = 1e-4;      // circle map pullback vs xi
  double level = 1e-6;                // Bohr-Sommerfeld level position and residual
  double spectrum_deviation = 1e-6;   // level-wise spectrum distance
  double holonomy_invariance = 1e-8;  // holonomy before/after gauge
  double dd_fd = 1e-4;                // d(d f) with finite-difference gradients
  double dd_analytic = 1e-6;          // d(d f) with analytic gradients
  double stokes = 1e-6;               // boundary vs interior integral
  double class_integral = 1e-6;       // 2*pi integrality of [w]

  double& by_name(const std::string& key) {
    static const std::map<std::string, double Tolerances::*> table = {
        {"moser_residual", &Tolerances::moser_residual},
        {"moser_ratio_min", &Tolerances::moser_ratio_min},
        {"darboux_residual", &Tolerances::darboux_residual},
        {"gauge_sup", &Tolerances::gauge_sup},
        {"path_disagreement", &Tolerances::path_disagreement},
        {"hermitian_real", &Tolerances::hermitian_real},
        {"equivariance", &Tolerances::equivariance},
        {"averaged_gauge", &Tolerances::averaged_gauge},
        {"invariance", &Tolerances::invariance},
        {"period", &Tolerances::period},
        {"circle_pullback", &Tolerances::circle_pullback},
        {"level", &Tolerances::level},
        {"spectrum_deviation", &Tolerances::spectrum_deviation},
        {"holonomy_invariance", &Tolerances::holonomy_invariance},
        {"dd_fd", &Tolerances::dd_fd},
        {"dd_analytic", &Tolerances::dd_analytic},
        {"stokes", &Tolerances::stokes},
        {"class_integral", &Tolerances::class_integral},
    };
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown tolerance '" + key + "'");
    return this->*(it->second);
  }
};

/// Everything a scenario run needs: the name, the seed for randomized
/// sweeps, the output directory, tolerance overrides, and the scenario's
/// numeric parameters.  Unknown keys are rejected at parse time.
struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  Tolerances tol;
  std::map<std::string, double> params;  // effective values, scenario fills defaults

  /// Parameter with a scenario-supplied default.
  double param(const std::string& key, double fallback) {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    params[key] = fallback;  // record the effective value for the report
    return fallback;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
  if (used != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return v;
}

/// Parameter names any scenario may read; everything else is a typo.
inline const std::vector<std::string>& known_params() {
  static const std::vector<std::string> keys = {
      "epsilon",   "k",       "c",           "steps",   "radius",  "samples",
      "grid_step", "root_tol", "gl_order",   "trap_nodes", "perturbations", "loops"};
  return keys;
}

/// Apply one `section.key = value` assignment.
inline void apply_config_line(ScenarioConfig& cfg, const std::string& dotted,
                              const std::string& value) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos)
    throw ConfigError("expected section.key, got '" + dotted + "'");
  const std::string section = dotted.substr(0, dot);
  const std::string key = dotted.substr(dot + 1);
  if (section.empty() || key.empty())
    throw ConfigError("expected section.key, got '" + dotted + "'");

  if (section == "scenario") {
    if (key != "name") throw ConfigError("unknown key 'scenario." + key + "'");
    cfg.scenario = value;
  } else if (section == "run") {
    if (key == "seed") {
      const double v = parse_double(dotted, value);
      if (v < 0 || v != std::floor(v))
        throw ConfigError("run.seed must be a nonnegative integer");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else {
      throw ConfigError("unknown key 'run." + key + "'");
    }
  } else if (section == "tolerances") {
    const double v = parse_double(dotted, value);
    if (v <= 0) throw ConfigError("tolerance '" + key + "' must be positive");
    cfg.tol.by_name(key) = v;
  } else if (section == "params") {
    const auto& known = known_params();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key 'params." + key + "'");
    cfg.params[key] = parse_double(dotted, value);
  } else {
    throw ConfigError("unknown config section '" + section + "'");
  }
}

}  // namespace detail

/// Parse a flat `section.key = value` config file.  Blank lines and lines
/// starting with '#' are comments; no nesting, no quoting.
inline ScenarioConfig parse_config_text(std::istream& in, ScenarioConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    const std::string dotted = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + dotted + "'");
    detail::apply_config_line(cfg, dotted, value);
  }
  return cfg;
}

inline ScenarioConfig parse_config_file(const std::string& path, ScenarioConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in, std::move(cfg));
}

/// Apply a single `section.key=value` override (the CLI's --set argument).
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
  detail::apply_config_line(cfg, detail::trim(assignment.substr(0, eq)),
                            detail::trim(assignment.substr(eq + 1)));
}

}  // namespace prequant
