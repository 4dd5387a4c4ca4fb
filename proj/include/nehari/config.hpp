#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/hypotheses.hpp"
#include "nehari/nehari_set.hpp"
#include "nehari/problem.hpp"
#include "nehari/solver.hpp"

namespace nehari {

struct NonlinearityConfig {
  std::string family;  // "power" | "power_sum"
  double a = 0.0, p = 0.0;
  double a2 = 0.0, p2 = 0.0;
  double domain_max = 0.0;  // 0 selects 100 * max R
};

struct WeightConfig {
  std::string family;  // "constant" | "step" | "table"
  double value = 1.0;
  double beta = 0.0;  // step support parameter
  std::vector<double> table_t, table_g;
};

struct ProblemConfig {
  NonlinearityConfig nonlinearity;
  WeightConfig weight;
  std::vector<AnnulusSpec> annuli;
  int grid_n = 400;
  SolverOptions solver;
  CertifyOptions hypothesis;
  std::uint64_t seed = 1;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& path,
                             const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline double number_or(const nlohmann::json& j, const char* key,
                        double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline std::string require_string(const nlohmann::json& j,
                                  const std::string& path, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ConfigError(path + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

}  // namespace detail

inline ProblemConfig parse_config(const nlohmann::json& j) {
  ProblemConfig cfg;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  if (!j.contains("nonlinearity") || !j.at("nonlinearity").is_object())
    throw ConfigError("nonlinearity: expected an object");
  {
    const auto& nj = j.at("nonlinearity");
    cfg.nonlinearity.family = detail::require_string(nj, "nonlinearity", "family");
    if (cfg.nonlinearity.family != "power" &&
        cfg.nonlinearity.family != "power_sum")
      throw ConfigError("nonlinearity.family: must be \"power\" or \"power_sum\"");
    cfg.nonlinearity.a = detail::require_number(nj, "nonlinearity", "a");
    cfg.nonlinearity.p = detail::require_number(nj, "nonlinearity", "p");
    if (cfg.nonlinearity.p < 1.0)
      throw ConfigError("nonlinearity.p: must be >= 1");
    if (cfg.nonlinearity.family == "power_sum") {
      cfg.nonlinearity.a2 = detail::require_number(nj, "nonlinearity", "a2");
      cfg.nonlinearity.p2 = detail::require_number(nj, "nonlinearity", "p2");
      if (cfg.nonlinearity.p2 < 1.0)
        throw ConfigError("nonlinearity.p2: must be >= 1");
    }
    cfg.nonlinearity.domain_max =
        detail::number_or(nj, "domain_max", 0.0, "nonlinearity");
  }

  if (!j.contains("weight") || !j.at("weight").is_object())
    throw ConfigError("weight: expected an object");
  {
    const auto& wj = j.at("weight");
    cfg.weight.family = detail::require_string(wj, "weight", "family");
    if (cfg.weight.family == "constant") {
      cfg.weight.value = detail::require_number(wj, "weight", "value");
    } else if (cfg.weight.family == "step") {
      cfg.weight.value = detail::number_or(wj, "height", 1.0, "weight");
      cfg.weight.beta = detail::require_number(wj, "weight", "beta");
      if (!(cfg.weight.beta > 0.0 && cfg.weight.beta < 0.5))
        throw ConfigError("weight.beta: must lie in (0, 1/2)");
    } else if (cfg.weight.family == "table") {
      if (!wj.contains("t") || !wj.at("t").is_array() || !wj.contains("g") ||
          !wj.at("g").is_array())
        throw ConfigError("weight.t / weight.g: expected arrays");
      cfg.weight.table_t = wj.at("t").get<std::vector<double>>();
      cfg.weight.table_g = wj.at("g").get<std::vector<double>>();
    } else {
      throw ConfigError(
          "weight.family: must be \"constant\", \"step\" or \"table\"");
    }
  }

  if (!j.contains("annuli") || !j.at("annuli").is_array())
    throw ConfigError("annuli: expected an array");
  const auto& aj = j.at("annuli");
  if (aj.empty()) throw ConfigError("annuli: must not be empty");
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const std::string path = "annuli[" + std::to_string(i) + "]";
    if (!aj[i].is_object()) throw ConfigError(path + ": expected an object");
    const double r = detail::require_number(aj[i], path, "r");
    const double R = detail::require_number(aj[i], path, "R");
    const double beta = detail::require_number(aj[i], path, "beta");
    try {
      cfg.annuli.emplace_back(r, R, beta);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (i > 0 && !(cfg.annuli[i - 1].R < cfg.annuli[i].r))
      throw ConfigError(path + ": annuli must be ordered and disjoint");
  }

  if (j.contains("grid_n")) {
    if (!j.at("grid_n").is_number_integer())
      throw ConfigError("grid_n: expected an integer");
    cfg.grid_n = j.at("grid_n").get<int>();
    if (cfg.grid_n < 2) throw ConfigError("grid_n: must be >= 2");
  }

  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    if (!sj.is_object()) throw ConfigError("solver: expected an object");
    cfg.solver.grad_tol = detail::number_or(sj, "grad_tol", 0.0, "solver");
    cfg.solver.max_iters = static_cast<int>(
        detail::number_or(sj, "max_iters", cfg.solver.max_iters, "solver"));
    cfg.solver.armijo_c =
        detail::number_or(sj, "armijo_c", cfg.solver.armijo_c, "solver");
    cfg.solver.backtrack_factor = detail::number_or(
        sj, "backtrack_factor", cfg.solver.backtrack_factor, "solver");
    cfg.solver.t_init = detail::number_or(sj, "t_init", cfg.solver.t_init, "solver");
    try {
      cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }
  }

  if (j.contains("hypothesis")) {
    const auto& hj = j.at("hypothesis");
    if (!hj.is_object()) throw ConfigError("hypothesis: expected an object");
    const std::string mode = detail::require_string(hj, "hypothesis", "mode");
    if (mode == "H2")
      cfg.hypothesis.mode = HMode::H2;
    else if (mode == "H3")
      cfg.hypothesis.mode = HMode::H3;
    else if (mode == "H4")
      cfg.hypothesis.mode = HMode::H4;
    else
      throw ConfigError("hypothesis.mode: must be \"H2\", \"H3\" or \"H4\"");
    cfg.hypothesis.mu = detail::number_or(hj, "mu", 0.0, "hypothesis");
    cfg.hypothesis.lambda = detail::number_or(hj, "lambda", 0.0, "hypothesis");
    if (hj.contains("search")) {
      if (!hj.at("search").is_boolean())
        throw ConfigError("hypothesis.search: expected a boolean");
      cfg.hypothesis.search_mu_lambda = hj.at("search").get<bool>();
    }
    cfg.hypothesis.samples = static_cast<int>(
        detail::number_or(hj, "samples", cfg.hypothesis.samples, "hypothesis"));
    if (cfg.hypothesis.samples < 1)
      throw ConfigError("hypothesis.samples: must be >= 1");
    if (cfg.hypothesis.mode == HMode::H3 && !cfg.hypothesis.search_mu_lambda) {
      if (!(cfg.hypothesis.mu > 1.0))
        throw ConfigError("hypothesis.mu: must be > 1 (or set search: true)");
      if (!(cfg.hypothesis.lambda > 0.0))
        throw ConfigError("hypothesis.lambda: must be > 0 (or set search: true)");
    }
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("seed: expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.hypothesis.seed = cfg.seed;
    cfg.solver.seed = 0;
  }
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

inline double config_domain_max(const ProblemConfig& cfg) {
  if (cfg.nonlinearity.domain_max > 0.0) return cfg.nonlinearity.domain_max;
  double rmax = 0.0;
  for (const AnnulusSpec& a : cfg.annuli) rmax = std::max(rmax, a.R);
  return 100.0 * std::max(rmax, 1.0);
}

inline Problem make_problem(const ProblemConfig& cfg) {
  Grid grid(cfg.grid_n);
  const double dm = config_domain_max(cfg);
  Nonlinearity f =
      cfg.nonlinearity.family == "power"
          ? Nonlinearity::power(cfg.nonlinearity.a, cfg.nonlinearity.p, dm)
          : Nonlinearity::power_sum(cfg.nonlinearity.a, cfg.nonlinearity.p,
                                    cfg.nonlinearity.a2, cfg.nonlinearity.p2,
                                    dm);
  try {
    if (cfg.weight.family == "constant")
      return Problem(grid, std::move(f),
                     WeightFunction::constant(grid, cfg.weight.value));
    if (cfg.weight.family == "step")
      return Problem(grid, std::move(f),
                     WeightFunction::step(grid, cfg.weight.value,
                                          cfg.weight.beta));
    return Problem(grid, std::move(f),
                   WeightFunction::table(grid, cfg.weight.table_t,
                                         cfg.weight.table_g));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("weight: ") + e.what());
  }
}

}  // namespace nehari
