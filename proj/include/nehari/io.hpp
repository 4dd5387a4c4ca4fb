#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/cone.hpp"
#include "nehari/grid.hpp"
#include "nehari/hypotheses.hpp"
#include "nehari/solver.hpp"

namespace nehari {

namespace detail {
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}
}  // namespace detail

inline void write_solution_csv(const std::string& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,u\n";
  for (int i = 0; i < u.size(); ++i)
    out << detail::fmt17(u.grid().node(i)) << ',' << detail::fmt17(u[i])
        << '\n';
}

inline GridFunction read_solution_csv(const std::string& path,
                                      const Grid& expected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError(path + ": malformed CSV line: " + line);
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (static_cast<int>(values.size()) != expected.node_count())
    throw GridMismatch(path + ": " + std::to_string(values.size()) +
                       " rows, expected " +
                       std::to_string(expected.node_count()));
  return GridFunction(expected, std::move(values));
}

inline void write_trace_csv(const std::string& path, const DescentTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,energy,grad_norm,step,scale,norm\n";
  for (const IterationRecord& r : trace.records)
    out << r.iter << ',' << detail::fmt17(r.energy) << ','
        << detail::fmt17(r.grad_norm) << ',' << detail::fmt17(r.step) << ','
        << detail::fmt17(r.scale) << ',' << detail::fmt17(r.norm) << '\n';
}

inline nlohmann::json to_json(const ConeReport& rep) {
  return {{"symmetry_defect", rep.symmetry_defect},
          {"monotonicity_defect", rep.monotonicity_defect},
          {"harnack_defect", rep.harnack_defect},
          {"norm", rep.norm},
          {"tol", rep.tol},
          {"passes", rep.passes}};
}

inline nlohmann::json to_json(const HypothesisReport& rep) {
  nlohmann::json j{
      {"A_tilde", rep.constants.A_tilde},
      {"B_tilde", rep.constants.B_tilde},
      {"C_tilde", rep.constants.C_tilde},
      {"h1",
       {{"pass", rep.h1.pass},
        {"left_margin", rep.h1.left_margin},
        {"right_margin", rep.h1.right_margin},
        {"reason", rep.h1.reason}}},
      {"requested_mode", to_string(rep.requested_mode)},
      {"which", rep.mode_pass ? to_string(rep.requested_mode) : "none"},
      {"passes", rep.passes}};
  if (rep.h2)
    j["h2"] = {{"pass", rep.h2->pass},
               {"min_margin", rep.h2->min_margin},
               {"arg_min", rep.h2->arg_min}};
  if (rep.h3)
    j["h3"] = {{"pass", rep.h3->pass},
               {"ar_margin", rep.h3->ar_margin},
               {"slope_margin", rep.h3->slope_margin},
               {"budget_margin", rep.h3->budget_margin},
               {"mu", rep.mu_used},
               {"lambda", rep.lambda_used},
               {"reason", rep.h3->reason}};
  if (rep.h4)
    j["h4"] = {{"pass", rep.h4->pass},
               {"support_defect", rep.h4->support_defect},
               {"convexity_lower", rep.h4->convexity_lower},
               {"ar_lower", rep.h4->ar_lower},
               {"reason", rep.h4->reason}};
  if (rep.sampled_h1)
    j["sampled_h1"] = {{"pass", rep.sampled_h1->pass},
                       {"samples", rep.sampled_h1->samples},
                       {"min_left_value", rep.sampled_h1->min_left_value},
                       {"max_right_value", rep.sampled_h1->max_right_value},
                       {"reason", rep.sampled_h1->reason}};
  if (rep.abstract_constants)
    j["abstract_constants"] = {
        {"C1_estimate", rep.abstract_constants->C1_estimate},
        {"C2_estimate", rep.abstract_constants->C2_estimate},
        {"hessian_sign_negative",
         rep.abstract_constants->hessian_sign_negative},
        {"samples", rep.abstract_constants->samples}};
  return j;
}

inline nlohmann::json to_json(const Solution& sol) {
  return {{"norm", sol.norm},
          {"energy", sol.energy},
          {"grad_norm", sol.grad_norm},
          {"iterations", sol.iterations},
          {"residual", sol.residual},
          {"localized", sol.localized},
          {"status", to_string(sol.status)},
          {"diagnostic", sol.diagnostic},
          {"cone", to_json(sol.cone_report)}};
}

inline nlohmann::json to_json(const AnnulusOutcome& out) {
  nlohmann::json j{{"r", out.annulus.r},
                   {"R", out.annulus.R},
                   {"beta", out.annulus.beta},
                   {"status", out.status},
                   {"diagnostic", out.diagnostic},
                   {"hypothesis", to_json(out.hypothesis)}};
  if (out.solution) j["solution"] = to_json(*out.solution);
  return j;
}

}  // namespace nehari
