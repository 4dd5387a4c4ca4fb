#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nehari/io.hpp"
#include "nehari/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with stdout+stderr captured to a file.
RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "run.log";
  const std::string cmd =
      std::string(NEHARI_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  res.output = ss.str();
  return res;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("nehari_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

const char* kInstanceConfig = R"({
  "nonlinearity": {"family": "power", "a": 3.0, "p": 3.0},
  "weight": {"family": "constant", "value": 1.0},
  "annuli": [{"r": 1.0, "R": 60.0, "beta": 0.2}],
  "grid_n": 400,
  "solver": {"max_iters": 2000},
  "hypothesis": {"mode": "H2", "samples": 8},
  "seed": 42
})";

}  // namespace

TEST_CASE("check passes on the cubic instance and fails on a small annulus") {
  fs::path dir = fresh_dir("check");
  write_file(dir / "config.json", kInstanceConfig);
  RunResult ok = run_cli("check --config " + (dir / "config.json").string() +
                             " --json",
                         dir);
  CHECK(ok.exit_code == 0);
  json rep = json::parse(ok.output);
  CHECK(rep["pass"] == true);
  CHECK(rep["annuli"][0]["hypothesis"]["h1"]["pass"] == true);

  json cfg = json::parse(kInstanceConfig);
  cfg["annuli"][0]["R"] = 10.0;
  write_file(dir / "small.json", cfg.dump());
  RunResult bad =
      run_cli("check --config " + (dir / "small.json").string() + " --json", dir);
  CHECK(bad.exit_code == 1);
  json brep = json::parse(bad.output);
  CHECK(brep["annuli"][0]["hypothesis"]["h1"]["right_margin"] < 0.0);
}

TEST_CASE("malformed configs exit with a field diagnostic") {
  fs::path dir = fresh_dir("badcfg");
  json cfg = json::parse(kInstanceConfig);
  cfg["annuli"][0]["beta"] = 0.3;
  write_file(dir / "config.json", cfg.dump());
  RunResult res =
      run_cli("check --config " + (dir / "config.json").string(), dir);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("beta") != std::string::npos);

  json no_annuli = json::parse(kInstanceConfig);
  no_annuli["annuli"] = json::array();
  write_file(dir / "empty.json", no_annuli.dump());
  CHECK(run_cli("solve --config " + (dir / "empty.json").string(), dir)
            .exit_code == 2);

  CHECK(run_cli("check --config " + (dir / "missing.json").string(), dir)
            .exit_code == 2);
}

TEST_CASE("solve produces certified files and verify round-trips") {
  fs::path dir = fresh_dir("solve");
  write_file(dir / "config.json", kInstanceConfig);
  const std::string cfg = (dir / "config.json").string();
  RunResult res =
      run_cli("solve --config " + cfg + " --out " + (dir / "out").string(), dir);
  REQUIRE(res.exit_code == 0);

  std::ifstream rj(dir / "out" / "report.json");
  REQUIRE(rj.good());
  json report = json::parse(rj);
  REQUIRE(report["annuli"].size() == 1);
  const json& ann = report["annuli"][0];
  CHECK(ann["status"] == "solved");
  CHECK(ann["solution"]["localized"] == true);
  const double grad_tol = 1e-8 * std::sqrt(60.0);
  CHECK(ann["solution"]["grad_norm"].get<double>() <= grad_tol);
  CHECK(ann["solution"]["cone"]["passes"] == true);

  REQUIRE(fs::exists(dir / "out" / "solution.csv"));
  REQUIRE(fs::exists(dir / "out" / "trace.csv"));
  {
    std::ifstream tr(dir / "out" / "trace.csv");
    std::string header;
    std::getline(tr, header);
    CHECK(header == "iter,energy,grad_norm,step,scale,norm");
  }

  // CSV values round-trip through the reader at full precision.
  nehari::Grid grid(400);
  nehari::GridFunction u =
      nehari::read_solution_csv((dir / "out" / "solution.csv").string(), grid);
  CHECK(nehari::h01_norm(u) ==
        Catch::Approx(ann["solution"]["norm"].get<double>()).margin(1e-12));

  RunResult verify = run_cli("verify --config " + cfg + " --solution " +
                                 (dir / "out" / "solution.csv").string(),
                             dir);
  CHECK(verify.exit_code == 0);

  // A perturbed profile fails with a symmetry defect.
  nehari::GridFunction bad = u;
  for (int i = 0; i <= grid.n; ++i)
    bad[i] += 0.1 * std::sin(2 * std::numbers::pi * grid.node(i));
  bad[0] = bad[grid.n] = 0.0;
  nehari::write_solution_csv((dir / "perturbed.csv").string(), bad);
  RunResult perturbed = run_cli("verify --config " + cfg + " --solution " +
                                    (dir / "perturbed.csv").string() + " --json",
                                dir);
  CHECK(perturbed.exit_code == 1);
  json pj = json::parse(perturbed.output);
  CHECK(pj["cone"]["symmetry_defect"].get<double>() > 0.1);

  // The zero profile is not localized.
  nehari::write_solution_csv((dir / "zero.csv").string(),
                             nehari::GridFunction::zeros(grid));
  CHECK(run_cli("verify --config " + cfg + " --solution " +
                    (dir / "zero.csv").string(),
                dir).exit_code == 1);

  // Wrong grid length is a shape mismatch.
  nehari::write_solution_csv((dir / "short.csv").string(),
                             nehari::GridFunction::zeros(nehari::Grid(200)));
  CHECK(run_cli("verify --config " + cfg + " --solution " +
                    (dir / "short.csv").string(),
                dir).exit_code == 2);
}

TEST_CASE("solve is deterministic for a fixed config and seed") {
  fs::path dir = fresh_dir("determinism");
  write_file(dir / "config.json", kInstanceConfig);
  const std::string cfg = (dir / "config.json").string();
  REQUIRE(run_cli("solve --config " + cfg + " --out " + (dir / "a").string(),
                  dir).exit_code == 0);
  REQUIRE(run_cli("solve --config " + cfg + " --out " + (dir / "b").string(),
                  dir).exit_code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
  CHECK(slurp(dir / "a" / "solution.csv") == slurp(dir / "b" / "solution.csv"));
}

TEST_CASE("multi-annulus run records skips without failing") {
  fs::path dir = fresh_dir("multi");
  json cfg = json::parse(kInstanceConfig);
  cfg["annuli"].push_back({{"r", 61.0}, {"R", 120.0}, {"beta", 0.05}});
  write_file(dir / "config.json", cfg.dump());
  RunResult res = run_cli("multi --config " + (dir / "config.json").string() +
                              " --out " + (dir / "out").string(),
                          dir);
  CHECK(res.exit_code == 0);
  std::ifstream rj(dir / "out" / "report.json");
  json report = json::parse(rj);
  REQUIRE(report["annuli"].size() == 2);
  CHECK(report["annuli"][0]["status"] == "solved");
  CHECK(report["annuli"][1]["status"] == "skipped");
  CHECK(fs::exists(dir / "out" / "solution_1.csv"));
  CHECK_FALSE(fs::exists(dir / "out" / "solution_2.csv"));
}

TEST_CASE("sweep emits one row per grid point") {
  fs::path dir = fresh_dir("sweep");
  write_file(dir / "config.json", kInstanceConfig);
  write_file(dir / "sweep.json", R"({
    "axes": [{"name": "a", "from": 1.0, "to": 5.0, "steps": 3},
             {"name": "R", "from": 20.0, "to": 100.0, "steps": 3}]
  })");
  RunResult res = run_cli("sweep --config " + (dir / "config.json").string() +
                              " --spec " + (dir / "sweep.json").string() +
                              " --out " + (dir / "out").string(),
                          dir);
  CHECK(res.exit_code == 0);
  std::ifstream csv(dir / "out" / "sweep.csv");
  REQUIRE(csv.good());
  std::string line;
  int rows = -1;  // skip header
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 9);

  write_file(dir / "bad.json", R"({"axes": []})");
  CHECK(run_cli("sweep --config " + (dir / "config.json").string() +
                    " --spec " + (dir / "bad.json").string() + " --out " +
                    (dir / "out").string(),
                dir).exit_code == 2);

  write_file(dir / "rev.json",
             R"({"axes": [{"name": "a", "from": 5.0, "to": 1.0, "steps": 3}]})");
  CHECK(run_cli("sweep --config " + (dir / "config.json").string() +
                    " --spec " + (dir / "rev.json").string() + " --out " +
                    (dir / "out").string(),
                dir).exit_code == 2);
}

TEST_CASE("force overrides the hypothesis gate") {
  fs::path dir = fresh_dir("force");
  // Checks fail on (1,10) but the descent still finds the localized point.
  json cfg = json::parse(kInstanceConfig);
  cfg["annuli"][0]["R"] = 10.0;
  write_file(dir / "config.json", cfg.dump());
  const std::string base = "solve --config " + (dir / "config.json").string() +
                           " --out " + (dir / "out").string();
  CHECK(run_cli(base, dir).exit_code == 0);  // skip is not a failure
  RunResult forced = run_cli(base + " --force", dir);
  CHECK(forced.exit_code == 0);
  std::ifstream rj(dir / "out" / "report.json");
  json report = json::parse(rj);
  CHECK(report["annuli"][0]["status"] == "solved");
  CHECK(report["annuli"][0]["hypothesis"]["passes"] == false);

  // No fiber root exists above the localized branch: the forced solve must
  // report the sign-pattern failure instead of fabricating a solution.
  json cfg2 = json::parse(kInstanceConfig);
  cfg2["annuli"][0] = {{"r", 61.0}, {"R", 120.0}, {"beta", 0.05}};
  write_file(dir / "far.json", cfg2.dump());
  RunResult failed = run_cli("solve --config " + (dir / "far.json").string() +
                                 " --out " + (dir / "out2").string() +
                                 " --force",
                             dir);
  CHECK(failed.exit_code == 3);
  std::ifstream rj2(dir / "out2" / "report.json");
  json report2 = json::parse(rj2);
  CHECK(report2["annuli"][0]["status"] == "failed");
}

TEST_CASE("single-point sweep with solve matches check plus solve") {
  fs::path dir = fresh_dir("sweep1");
  write_file(dir / "config.json", kInstanceConfig);
  write_file(dir / "sweep.json", R"({
    "axes": [{"name": "a", "from": 3.0, "to": 3.0, "steps": 1}],
    "solve": true
  })");
  RunResult res = run_cli("sweep --config " + (dir / "config.json").string() +
                              " --spec " + (dir / "sweep.json").string() +
                              " --out " + (dir / "out").string(),
                          dir);
  REQUIRE(res.exit_code == 0);
  std::ifstream csv(dir / "out" / "sweep.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header.find("norm") != std::string::npos);
  CHECK(row.find("converged") != std::string::npos);

  // The swept row agrees with the direct solve on the same config.
  RunResult direct = run_cli("solve --config " + (dir / "config.json").string() +
                                 " --out " + (dir / "direct").string() + " --json",
                             dir);
  REQUIRE(direct.exit_code == 0);
  json report = json::parse(direct.output);
  const double norm = report["annuli"][0]["solution"]["norm"].get<double>();
  CHECK(row.find(std::to_string(norm).substr(0, 6)) != std::string::npos);
}

TEST_CASE("alternate hypothesis modes through the config") {
  fs::path dir = fresh_dir("modes");

  json h4 = json::parse(kInstanceConfig);
  h4["nonlinearity"]["a"] = 1.0;
  h4["weight"] = {{"family", "step"}, {"height", 1.0}, {"beta", 0.2}};
  h4["annuli"][0] = {{"r", 1.0}, {"R", 100.0}, {"beta", 0.2}};
  h4["hypothesis"] = {{"mode", "H4"}, {"samples", 6}};
  write_file(dir / "h4.json", h4.dump());
  RunResult rh4 =
      run_cli("check --config " + (dir / "h4.json").string() + " --json", dir);
  CHECK(rh4.exit_code == 0);
  json jh4 = json::parse(rh4.output);
  CHECK(jh4["annuli"][0]["hypothesis"]["which"] == "H4");
  CHECK(jh4["annuli"][0]["hypothesis"]["h4"]["support_defect"] == 0.0);

  json h3 = json::parse(kInstanceConfig);
  h3["hypothesis"] = {{"mode", "H3"}, {"search", true}, {"samples", 6}};
  write_file(dir / "h3.json", h3.dump());
  RunResult rh3 =
      run_cli("check --config " + (dir / "h3.json").string() + " --json", dir);
  CHECK(rh3.exit_code == 0);
  json jh3 = json::parse(rh3.output);
  CHECK(jh3["annuli"][0]["hypothesis"]["which"] == "H3");
  CHECK(jh3["annuli"][0]["hypothesis"]["h3"]["mu"].get<double>() > 1.0);

  // H3 without constants and without search is a config error.
  json bad = json::parse(kInstanceConfig);
  bad["hypothesis"] = {{"mode", "H3"}};
  write_file(dir / "bad.json", bad.dump());
  RunResult rbad = run_cli("check --config " + (dir / "bad.json").string(), dir);
  CHECK(rbad.exit_code == 2);
  CHECK(rbad.output.find("mu") != std::string::npos);
}
