#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nehari/cone.hpp"
#include "nehari/energy.hpp"
#include "nehari/hypotheses.hpp"
#include "nehari/nehari_set.hpp"
#include "nehari/sampling.hpp"
#include "nehari/verify.hpp"

namespace nehari {

struct SolverOptions {
  double grad_tol = 0.0;  // 0 selects 1e-8 * sqrt(r R)
  int max_iters = 10000;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double t_init = 1.0;
  std::uint64_t seed = 0;  // 0 starts from the canonical sine profile

  void validate() const {
    if (grad_tol < 0.0) throw std::invalid_argument("grad_tol must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
      throw std::invalid_argument("armijo_c must lie in (0,1)");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
      throw std::invalid_argument("backtrack_factor must lie in (0,1)");
    if (!(t_init > 0.0 && t_init <= 1.0))
      throw std::invalid_argument("t_init must lie in (0,1]");
  }
};

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;   // accepted step leaving this iterate (0 at the last)
  double scale = 1.0;  // fiber scale of the projection that produced this iterate
  double norm = 0.0;
  double cone_defect = 0.0;
  double manifold_residual = 0.0;  // |(E'(u),u)| / |u|^2
  double z = 0.0;  // derivative of the scaling map along -E'(u)
};

struct DescentTrace {
  std::vector<IterationRecord> records;
};

enum class SolveStatus { converged, max_iters_exceeded, line_search_stalled };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters_exceeded: return "max_iters_exceeded";
    case SolveStatus::line_search_stalled: return "line_search_stalled";
  }
  return "?";
}

struct Solution {
  GridFunction u;
  double norm = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  ConeReport cone_report;
  bool localized = false;  // r < norm < R strictly
  double residual = 0.0;
  SolveStatus status = SolveStatus::converged;
  std::string diagnostic;
};

namespace detail {
constexpr double kDefensiveConeTol = 1e-7;
constexpr double kManifoldTol = 1e-8;

inline GridFunction cone_path_point(const GridFunction& u, double t,
                                    const GridFunction& grad) {
  GridFunction w = add_scaled(u, -t, grad);
  const ConeReport rep = cone_membership(w, kDefensiveConeTol);
  if (!rep.passes)
    throw ConeDefect("descent path left the cone: max defect " +
                     std::to_string(rep.max_defect()) + " at |w| " +
                     std::to_string(rep.norm));
  return w;
}
}  // namespace detail

// One descent step on the manifold: project(u - t E'(u)). The intermediate
// point (1-t)u + t N(u) stays in the cone for t in [0,1] and is checked
// defensively.
inline GridFunction ekeland_step(const Problem& p, const AnnulusSpec& a,
                                 const GridFunction& u, double t) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("ekeland_step: t must lie in (0,1]");
  const GridFunction grad = gradient(p, u);
  return project(p, detail::cone_path_point(u, t, grad), a);
}

// Backtracking descent over the composite map t -> E(project(u - t E'(u))),
// starting from the projection of `seed`. Stops when the gradient norm falls
// below grad_tol. Projection scale invariance makes the start independent of
// the seed's magnitude.
inline std::pair<Solution, DescentTrace> solve_from(const Problem& p,
                                                    const AnnulusSpec& a,
                                                    GridFunction seed,
                                                    const SolverOptions& opts) {
  opts.validate();
  if (p.f.domain_max < a.R)
    throw DomainError("solve: domain_max smaller than the outer radius");
  const double grad_tol =
      opts.grad_tol > 0.0 ? opts.grad_tol : 1e-8 * std::sqrt(a.r * a.R);

  seed = (std::sqrt(a.r * a.R) / h01_norm(seed)) * seed;
  FiberRootResult root = nehari_scale(p, seed, a);
  GridFunction u = root.s_value * seed;
  double scale_in = root.s_value;

  DescentTrace trace;
  int accepted = 0;
  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    const double e_u = energy(p, u);
    const GridFunction grad = gradient(p, u);
    const double gn = h01_norm(grad);
    const double norm2 = h01_inner(u, u);

    IterationRecord rec;
    rec.iter = iter;
    rec.energy = e_u;
    rec.grad_norm = gn;
    rec.scale = scale_in;
    rec.norm = std::sqrt(norm2);
    rec.cone_defect = cone_membership(u, detail::kManifoldTol).max_defect();
    rec.manifold_residual = std::abs(h01_inner(grad, u)) / norm2;
    rec.z = scale_directional_derivative(p, u, -1.0 * grad);
    trace.records.push_back(rec);

    auto finish = [&](SolveStatus status, std::string why) {
      Solution sol{u,
                   rec.norm,
                   e_u,
                   gn,
                   accepted,
                   cone_membership(u, detail::kManifoldTol),
                   a.r < rec.norm && rec.norm < a.R,
                   residual(p, u),
                   status,
                   std::move(why)};
      return std::make_pair(std::move(sol), std::move(trace));
    };

    if (gn <= grad_tol) return finish(SolveStatus::converged, "");
    if (iter == opts.max_iters)
      return finish(SolveStatus::max_iters_exceeded,
                    "gradient norm " + std::to_string(gn) +
                        " above tolerance after max_iters");

    double t = opts.t_init;
    bool stepped = false;
    while (t >= 1e-14) {
      GridFunction w = detail::cone_path_point(u, t, grad);
      FiberRootResult step_root = nehari_scale(p, w, a);
      GridFunction candidate = step_root.s_value * w;
      if (energy(p, candidate) <= e_u - opts.armijo_c * t * gn * gn) {
        trace.records.back().step = t;
        u = std::move(candidate);
        scale_in = step_root.s_value;
        ++accepted;
        stepped = true;
        break;
      }
      t *= opts.backtrack_factor;
    }
    if (!stepped)
      return finish(SolveStatus::line_search_stalled,
                    "no step above 1e-14 achieved sufficient decrease");
  }
  throw std::logic_error("solve: unreachable");
}

inline std::pair<Solution, DescentTrace> solve(const Problem& p,
                                               const AnnulusSpec& a,
                                               const SolverOptions& opts = {}) {
  GridFunction seed = [&] {
    if (opts.seed == 0) return sample_sin_pi(p.grid);
    std::mt19937_64 rng(opts.seed);
    return random_cone_element(p.grid, rng);
  }();
  return solve_from(p, a, std::move(seed), opts);
}

struct AnnulusOutcome {
  AnnulusSpec annulus;
  HypothesisReport hypothesis;
  std::optional<Solution> solution;
  std::optional<DescentTrace> trace;
  std::string status;  // "solved" | "skipped" | "failed"
  std::string diagnostic;
};

namespace detail {
template <typename F>
void parallel_for_index(std::size_t count, F&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(hw, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (std::thread& th : pool) th.join();
}
}  // namespace detail

// Checks then solves each annulus independently; annuli must be strictly
// ordered and disjoint so solutions carry disjoint norm ranges. Rows run on
// a bounded worker pool.
inline std::vector<AnnulusOutcome> solve_multi(
    const Problem& p, const std::vector<AnnulusSpec>& annuli,
    const SolverOptions& opts = {}, const CertifyOptions& copts = {},
    bool force = false) {
  for (std::size_t i = 0; i + 1 < annuli.size(); ++i)
    if (!(annuli[i].R < annuli[i + 1].r))
      throw OverlappingAnnuli("solve_multi: annulus " + std::to_string(i + 1) +
                              " overlaps annulus " + std::to_string(i + 2));
  std::vector<std::optional<AnnulusOutcome>> slots(annuli.size());
  detail::parallel_for_index(annuli.size(), [&](std::size_t i) {
    const AnnulusSpec& a = annuli[i];
    AnnulusOutcome out{a, HypothesisReport{}, std::nullopt, std::nullopt, "", ""};
    try {
      out.hypothesis = certify(p, a, copts);
      if (!out.hypothesis.passes && !force) {
        out.status = "skipped";
        out.diagnostic = "hypothesis checks failed";
      } else {
        auto [sol, tr] = solve(p, a, opts);
        const bool ok = sol.status == SolveStatus::converged && sol.localized;
        out.status = ok ? "solved" : "failed";
        if (!ok) out.diagnostic = to_string(sol.status);
        out.solution = std::move(sol);
        out.trace = std::move(tr);
      }
    } catch (const std::exception& e) {
      out.status = "failed";
      out.diagnostic = e.what();
    }
    slots[i] = std::move(out);
  });
  std::vector<AnnulusOutcome> results;
  results.reserve(annuli.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace nehari
