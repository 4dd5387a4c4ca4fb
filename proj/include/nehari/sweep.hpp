#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/config.hpp"
#include "nehari/io.hpp"
#include "nehari/solver.hpp"

namespace nehari {

struct SweepAxis {
  std::string name;  // a | p | a2 | p2 | r | R | beta
  double from = 0.0;
  double to = 0.0;
  int steps = 1;  // number of sample points along the axis
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  bool solve = false;
};

inline SweepSpec parse_sweep(const nlohmann::json& j) {
  SweepSpec spec;
  if (!j.is_object() || !j.contains("axes") || !j.at("axes").is_array())
    throw ConfigError("sweep.axes: expected an array");
  const auto& axes = j.at("axes");
  if (axes.empty()) throw ConfigError("sweep.axes: must not be empty");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string path = "sweep.axes[" + std::to_string(i) + "]";
    SweepAxis ax;
    ax.name = detail::require_string(axes[i], path, "name");
    static const char* known[] = {"a", "p", "a2", "p2", "r", "R", "beta"};
    bool ok = false;
    for (const char* k : known) ok = ok || ax.name == k;
    if (!ok) throw ConfigError(path + ".name: unknown parameter " + ax.name);
    ax.from = detail::require_number(axes[i], path, "from");
    ax.to = detail::require_number(axes[i], path, "to");
    ax.steps = static_cast<int>(detail::require_number(axes[i], path, "steps"));
    if (ax.steps < 1) throw ConfigError(path + ".steps: must be >= 1");
    if (!(ax.from <= ax.to)) throw ConfigError(path + ": empty range");
    spec.axes.push_back(ax);
  }
  if (j.contains("solve")) {
    if (!j.at("solve").is_boolean())
      throw ConfigError("sweep.solve: expected a boolean");
    spec.solve = j.at("solve").get<bool>();
  }
  return spec;
}

inline SweepSpec load_sweep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("sweep spec is not valid JSON: " + std::string(e.what()));
  }
  return parse_sweep(j);
}

struct SweepRow {
  std::vector<double> values;  // one per axis
  HypothesisReport report;
  std::optional<Solution> solution;
  std::string error;
};

namespace detail {
inline void apply_axis(ProblemConfig& cfg, const std::string& name, double v) {
  if (name == "a")
    cfg.nonlinearity.a = v;
  else if (name == "p")
    cfg.nonlinearity.p = v;
  else if (name == "a2")
    cfg.nonlinearity.a2 = v;
  else if (name == "p2")
    cfg.nonlinearity.p2 = v;
  else if (name == "r")
    cfg.annuli[0] = AnnulusSpec(v, cfg.annuli[0].R, cfg.annuli[0].beta);
  else if (name == "R")
    cfg.annuli[0] = AnnulusSpec(cfg.annuli[0].r, v, cfg.annuli[0].beta);
  else if (name == "beta")
    cfg.annuli[0] = AnnulusSpec(cfg.annuli[0].r, cfg.annuli[0].R, v);
}
}  // namespace detail

// Cartesian sweep over the axes applied to the base configuration's first
// annulus; each row carries the hypothesis report (and the solve summary when
// requested). Rows are independent and computed on a worker pool.
inline std::vector<SweepRow> run_sweep(const ProblemConfig& base,
                                       const SweepSpec& spec) {
  std::size_t total = 1;
  for (const SweepAxis& ax : spec.axes)
    total *= static_cast<std::size_t>(ax.steps);
  std::vector<SweepRow> rows(total);
  detail::parallel_for_index(total, [&](std::size_t flat) {
    SweepRow& row = rows[flat];
    ProblemConfig cfg = base;
    std::size_t rem = flat;
    for (const SweepAxis& ax : spec.axes) {
      const int idx = static_cast<int>(rem % static_cast<std::size_t>(ax.steps));
      rem /= static_cast<std::size_t>(ax.steps);
      const double v = ax.steps == 1
                           ? ax.from
                           : ax.from + (ax.to - ax.from) * idx / (ax.steps - 1);
      row.values.push_back(v);
      try {
        detail::apply_axis(cfg, ax.name, v);
      } catch (const std::invalid_argument& e) {
        row.error = e.what();
        return;
      }
    }
    try {
      const Problem p = make_problem(cfg);
      row.report = certify(p, cfg.annuli[0], cfg.hypothesis);
      if (spec.solve && row.report.passes) {
        auto [sol, trace] = solve(p, cfg.annuli[0], cfg.solver);
        row.solution = std::move(sol);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

inline void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                            const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const SweepAxis& ax : spec.axes) out << ax.name << ',';
  out << "A_tilde,B_tilde,C_tilde,h1_left,h1_right,h1_pass,mode_pass,pass";
  if (spec.solve) out << ",norm,energy,grad_norm,solve_status";
  out << ",error\n";
  for (const SweepRow& row : rows) {
    for (double v : row.values) out << detail::fmt17(v) << ',';
    out << detail::fmt17(row.report.constants.A_tilde) << ','
        << detail::fmt17(row.report.constants.B_tilde) << ','
        << detail::fmt17(row.report.constants.C_tilde) << ','
        << detail::fmt17(row.report.h1.left_margin) << ','
        << detail::fmt17(row.report.h1.right_margin) << ','
        << (row.report.h1.pass ? 1 : 0) << ','
        << (row.report.mode_pass ? 1 : 0) << ','
        << (row.report.passes ? 1 : 0);
    if (spec.solve) {
      if (row.solution)
        out << ',' << detail::fmt17(row.solution->norm) << ','
            << detail::fmt17(row.solution->energy) << ','
            << detail::fmt17(row.solution->grad_norm) << ','
            << to_string(row.solution->status);
      else
        out << ",,,,";
    }
    out << ',' << row.error << '\n';
  }
}

}  // namespace nehari
