// Command-line driver: hypothesis checks, localized solves, certificate
// verification, and parameter sweeps for -u'' = g(t) f(u(t)), u(0)=u(1)=0.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nehari/nehari.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailed = 3;

struct GlobalOpts {
  std::string config_path;
  bool json_out = false;
  std::int64_t seed = -1;  // -1 keeps the config seed
};

nehari::ProblemConfig load(const GlobalOpts& g) {
  nehari::ProblemConfig cfg = nehari::load_config(g.config_path);
  if (g.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(g.seed);
    cfg.hypothesis.seed = cfg.seed;
  }
  return cfg;
}

void print_hypothesis(std::ostream& os, const nehari::HypothesisReport& rep) {
  os << "  constants: A~=" << rep.constants.A_tilde
     << "  B~=" << rep.constants.B_tilde << "  C~=" << rep.constants.C_tilde
     << "\n";
  os << "  H1: " << (rep.h1.pass ? "pass" : "FAIL")
     << "  left margin " << rep.h1.left_margin << "  right margin "
     << rep.h1.right_margin;
  if (!rep.h1.reason.empty()) os << "  (" << rep.h1.reason << ")";
  os << "\n";
  if (rep.h2)
    os << "  H2: " << (rep.h2->pass ? "pass" : "FAIL") << "  min margin "
       << rep.h2->min_margin << " at t=" << rep.h2->arg_min << "\n";
  if (rep.h3) {
    os << "  H3: " << (rep.h3->pass ? "pass" : "FAIL") << "  ar "
       << rep.h3->ar_margin << "  slope " << rep.h3->slope_margin
       << "  budget " << rep.h3->budget_margin << "  (mu=" << rep.mu_used
       << ", lambda=" << rep.lambda_used << ")";
    if (!rep.h3->reason.empty()) os << "  (" << rep.h3->reason << ")";
    os << "\n";
  }
  if (rep.h4) {
    os << "  H4: " << (rep.h4->pass ? "pass" : "FAIL") << "  support defect "
       << rep.h4->support_defect << "  min f'' " << rep.h4->convexity_lower
       << "  min tf'-f " << rep.h4->ar_lower;
    if (!rep.h4->reason.empty()) os << "  (" << rep.h4->reason << ")";
    os << "\n";
  }
  if (rep.sampled_h1)
    os << "  sampled sign pattern: "
       << (rep.sampled_h1->pass ? "pass" : "FAIL") << " over "
       << rep.sampled_h1->samples << " cone samples\n";
  if (rep.abstract_constants)
    os << "  curvature estimates: C1=" << rep.abstract_constants->C1_estimate
       << "  C2=" << rep.abstract_constants->C2_estimate << "  E''(u)(u,u)<0: "
       << (rep.abstract_constants->hessian_sign_negative ? "yes" : "no")
       << "\n";
  os << "  overall: " << (rep.passes ? "PASS" : "FAIL") << "\n";
}

int cmd_check(const GlobalOpts& g) {
  const nehari::ProblemConfig cfg = load(g);
  const nehari::Problem p = nehari::make_problem(cfg);
  json out{{"annuli", json::array()}};
  bool all_pass = true;
  for (std::size_t i = 0; i < cfg.annuli.size(); ++i) {
    const nehari::AnnulusSpec& a = cfg.annuli[i];
    const nehari::HypothesisReport rep = nehari::certify(p, a, cfg.hypothesis);
    all_pass = all_pass && rep.passes;
    json item{{"r", a.r}, {"R", a.R}, {"beta", a.beta},
              {"hypothesis", nehari::to_json(rep)}};
    out["annuli"].push_back(item);
    if (!g.json_out) {
      std::cout << "annulus " << (i + 1) << ": r=" << a.r << " R=" << a.R
                << " beta=" << a.beta << "\n";
      print_hypothesis(std::cout, rep);
    }
  }
  out["pass"] = all_pass;
  if (g.json_out) std::cout << out.dump(2) << "\n";
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_solve(const GlobalOpts& g, const std::string& out_dir, bool force) {
  const nehari::ProblemConfig cfg = load(g);
  const nehari::Problem p = nehari::make_problem(cfg);
  fs::create_directories(out_dir);

  std::vector<nehari::AnnulusOutcome> outcomes =
      nehari::solve_multi(p, cfg.annuli, cfg.solver, cfg.hypothesis, force);

  json report{{"seed", cfg.seed},
              {"grid_n", cfg.grid_n},
              {"annuli", json::array()}};
  bool any_failed = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const nehari::AnnulusOutcome& out = outcomes[i];
    json item = nehari::to_json(out);
    if (out.solution && out.trace) {
      const std::string tag = "_" + std::to_string(i + 1);
      const std::string sol_file = "solution" + tag + ".csv";
      const std::string trace_file = "trace" + tag + ".csv";
      nehari::write_solution_csv((fs::path(out_dir) / sol_file).string(),
                                 out.solution->u);
      nehari::write_trace_csv((fs::path(out_dir) / trace_file).string(),
                              *out.trace);
      item["files"] = {{"solution_csv", sol_file}, {"trace_csv", trace_file}};
      if (outcomes.size() == 1) {
        nehari::write_solution_csv((fs::path(out_dir) / "solution.csv").string(),
                                   out.solution->u);
        nehari::write_trace_csv((fs::path(out_dir) / "trace.csv").string(),
                                *out.trace);
        item["files"]["solution_csv"] = "solution.csv";
        item["files"]["trace_csv"] = "trace.csv";
      }
    }
    report["annuli"].push_back(item);
    any_failed = any_failed || out.status == "failed";
    if (!g.json_out) {
      std::cout << "annulus " << (i + 1) << ": " << out.status;
      if (out.solution && out.status == "solved")
        std::cout << "  |u|=" << out.solution->norm
                  << "  E=" << out.solution->energy
                  << "  |E'|=" << out.solution->grad_norm
                  << "  iters=" << out.solution->iterations
                  << "  residual=" << out.solution->residual;
      if (!out.diagnostic.empty()) std::cout << "  (" << out.diagnostic << ")";
      std::cout << "\n";
    }
  }
  std::ofstream rj(fs::path(out_dir) / "report.json");
  rj << report.dump(2) << "\n";
  if (g.json_out) std::cout << report.dump(2) << "\n";
  return any_failed ? kExitSolverFailed : kExitOk;
}

int cmd_verify(const GlobalOpts& g, const std::string& solution_path) {
  const nehari::ProblemConfig cfg = load(g);
  const nehari::Problem p = nehari::make_problem(cfg);
  const nehari::AnnulusSpec& a = cfg.annuli.front();
  const nehari::GridFunction u =
      nehari::read_solution_csv(solution_path, p.grid);

  const double norm = nehari::h01_norm(u);
  const bool localized = a.r < norm && norm < a.R;
  const nehari::ConeReport cone = nehari::cone_membership(u, 1e-8);
  const bool manifold = nehari::on_manifold(p, u, a, 1e-8);
  const double res = nehari::residual(p, u);
  double fmax = 0.0;
  for (int i = 0; i < u.size(); ++i)
    fmax = std::max(fmax, std::abs(p.g[i] * p.f.f(u[i])));
  const double res_bound = 50.0 * p.grid.h * p.grid.h * fmax;
  const bool res_ok = res <= res_bound;
  const bool pass = localized && cone.passes && manifold && res_ok;

  json out{{"norm", norm},
           {"localized", localized},
           {"cone", nehari::to_json(cone)},
           {"on_manifold", manifold},
           {"residual", res},
           {"residual_bound", res_bound},
           {"pass", pass}};

  // Shooting cross-check: nearest root by initial slope, reported as metrics.
  const double slope = u[1] / p.grid.h;
  std::vector<nehari::ShootingResult> roots =
      nehari::shoot(p, {0.0, 4.0 * a.R}, 2000);
  if (!roots.empty()) {
    const nehari::ShootingResult* best = &roots.front();
    for (const nehari::ShootingResult& r : roots)
      if (std::abs(r.slope - slope) < std::abs(best->slope - slope)) best = &r;
    out["shooting"] = {{"slope", best->slope},
                       {"candidate_slope", slope},
                       {"sup_difference", nehari::compare(u, best->u)},
                       {"roots_in_range", roots.size()}};
  } else {
    out["shooting"] = {{"roots_in_range", 0}};
  }

  if (g.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "norm " << norm << (localized ? " (localized)" : " (NOT localized)")
              << "\ncone defects: symmetry " << cone.symmetry_defect
              << ", monotonicity " << cone.monotonicity_defect << ", harnack "
              << cone.harnack_defect << (cone.passes ? " (pass)" : " (FAIL)")
              << "\non manifold: " << (manifold ? "yes" : "NO")
              << "\nresidual " << res << " (bound " << res_bound << ")"
              << (res_ok ? "" : " FAIL") << "\n";
    if (out.contains("shooting") && out["shooting"].contains("sup_difference"))
      std::cout << "shooting agreement: slope " << out["shooting"]["slope"]
                << " vs " << slope << ", sup difference "
                << out["shooting"]["sup_difference"] << "\n";
    else
      std::cout << "shooting: no root in default slope range\n";
    std::cout << "verify: " << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const GlobalOpts& g, const std::string& spec_path,
              const std::string& out_dir) {
  const nehari::ProblemConfig cfg = load(g);
  const nehari::SweepSpec spec = nehari::load_sweep(spec_path);
  fs::create_directories(out_dir);
  const std::vector<nehari::SweepRow> rows = nehari::run_sweep(cfg, spec);
  const std::string csv = (fs::path(out_dir) / "sweep.csv").string();
  nehari::write_sweep_csv(csv, spec, rows);
  if (g.json_out) {
    json out{{"rows", rows.size()}, {"csv", csv}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "wrote " << rows.size() << " rows to " << csv << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localized critical points of -u'' = g(t) f(u) via fiber "
               "scaling on an annular cone"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::string out_dir = "out";
  std::string solution_path;
  std::string spec_path;
  bool force = false;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* opt = sub->add_option("--config", g.config_path, "problem config (JSON)");
    if (needs_config) opt->required();
    sub->add_flag("--json", g.json_out, "machine-readable output on stdout");
    sub->add_option("--seed", g.seed, "override the config seed");
  };

  CLI::App* check = app.add_subcommand("check", "run the hypothesis checks");
  add_common(check);

  CLI::App* solve = app.add_subcommand("solve", "check then solve per annulus");
  add_common(solve);
  solve->add_option("--out", out_dir, "output directory");
  solve->add_flag("--force", force, "solve even when checks fail");

  CLI::App* multi =
      app.add_subcommand("multi", "multi-annulus driver (same as solve)");
  add_common(multi);
  multi->add_option("--out", out_dir, "output directory");
  multi->add_flag("--force", force, "solve even when checks fail");

  CLI::App* verify =
      app.add_subcommand("verify", "re-certify a solution profile");
  add_common(verify);
  verify->add_option("--solution", solution_path, "solution.csv to verify")
      ->required();

  CLI::App* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
  add_common(sweep);
  sweep->add_option("--spec", spec_path, "sweep spec (JSON)")->required();
  sweep->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (check->parsed()) return cmd_check(g);
    if (solve->parsed()) return cmd_solve(g, out_dir, force);
    if (multi->parsed()) return cmd_solve(g, out_dir, force);
    if (verify->parsed()) return cmd_verify(g, solution_path);
    if (sweep->parsed()) return cmd_sweep(g, spec_path, out_dir);
  } catch (const nehari::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nehari::GridMismatch& e) {
    std::cerr << "shape mismatch: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nehari::OverlappingAnnuli& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailed;
  }
  return kExitConfigError;
}
