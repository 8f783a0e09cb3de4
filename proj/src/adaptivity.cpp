#include "goast/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

namespace goast {

const char* to_string(RefinementMode mode) { return mode == RefinementMode::Uniform ? "uniform" : "dwr"; }

void AdaptiveConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument(fmt::format("theta must lie in (0, 1], got {}", theta));
  if (max_dofs < 1) throw std::invalid_argument("max_dofs must be positive");
  if (max_levels < 1) throw std::invalid_argument("max_levels must be positive");
  if (degree != 1 && degree != 2) throw std::invalid_argument("degree must be 1 or 2");
  if ((mode == RefinementMode::Dwr || estimate_uniform) && degree != 1)
    throw std::invalid_argument("the estimator needs degree 1 (enrichment to degree 2)");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
}

std::vector<int> doerfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("doerfler_mark: theta must lie in (0, 1]");
  double total = 0.0;
  for (double v : indicators) {
    if (!std::isfinite(v)) throw std::invalid_argument("doerfler_mark: non-finite indicator");
    total += std::abs(v);
  }
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  if (total == 0.0) return {};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(indicators[a]) > std::abs(indicators[b]); });
  std::vector<int> marked;
  double acc = 0.0;
  const double target = theta * total;
  for (int e : order) {
    if (indicators[e] == 0.0) break;
    marked.push_back(e);
    acc += std::abs(indicators[e]);
    if (acc >= target) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

namespace {

struct LevelSolution {
  FeFunction u;
  SolveStats stats;
};

LevelSolution solve_primal(const ProblemDefinition& prob, const std::shared_ptr<const FeSpace>& V,
                           const FeFunction& init, const NewtonConfig& ncfg, const LinearSolverConfig& lcfg,
                           const AssemblyOptions& opts) {
  auto res = newton_solve(prob, V, init, ncfg, lcfg, opts);
  return {std::move(res.u), std::move(res.stats)};
}

}  // namespace

AdaptiveResult adaptive_loop(const ProblemDefinition& prob, const GoalFunctional& goal, SimplicialMesh initial,
                             const AdaptiveConfig& cfg, const NewtonConfig& ncfg, const LinearSolverConfig& lcfg,
                             const LevelObserver& observer) {
  prob.validate();
  cfg.validate();
  ncfg.validate();
  lcfg.validate();
  if (initial.space_dim() != prob.d) throw std::invalid_argument("adaptive_loop: mesh and problem dimensions differ");
  goal.check_alignment(initial);

  const bool estimating = cfg.mode == RefinementMode::Dwr || cfg.estimate_uniform;
  AssemblyOptions opts;
  opts.threads = cfg.threads;
  // Coarse solves use the enriched rule so that the injected coarse solution
  // satisfies the enriched residual on coarse test functions.
  if (estimating) opts.quad_order = 2 * 2 + 2;

  AdaptiveResult result;
  auto mesh = std::make_shared<const SimplicialMesh>(std::move(initial));
  auto V = std::make_shared<const FeSpace>(mesh, cfg.degree);
  FeFunction init = random_initial_guess(V, cfg.seed);

  for (int level = 0;; ++level) {
    ConvergenceRecord rec;
    rec.level = level;
    rec.dofs = V->num_dofs();
    rec.elements = mesh->num_elements();

    auto primal = solve_primal(prob, V, init, ncfg, lcfg, opts);
    rec.newton_iters = primal.stats.newton_iters;
    rec.inner_iters = primal.stats.total_inner_iters;
    rec.inner_failures = primal.stats.inner_failures;
    rec.newton_converged = primal.stats.converged;
    rec.newton_residual = primal.stats.final_residual_norm;
    rec.residual_history = primal.stats.residual_history;
    rec.damping = primal.stats.damping;
    if (!primal.stats.converged) rec.message = primal.stats.message;
    const FeFunction& u = primal.u;

    rec.J_h = eval_goal(goal, u);
    if (prob.exact_goal) rec.J_error = *prob.exact_goal - rec.J_h;
    if (prob.exact) {
      const auto& ex = *prob.exact;
      const auto norms = error_norms(u, ex.value, ex.gradient);
      rec.l2_Q_error = norms.l2_Q;
      rec.l2_h1_error = norms.l2_h1;
    }

    std::optional<EstimatorBreakdown> breakdown;
    if (estimating) {
      auto adj = solve_adjoint(prob, V, u, goal, lcfg, opts);
      rec.inner_failures += adj.solve.converged ? 0 : 1;
      const auto V2 = enrich(V);
      AssemblyOptions opts2 = opts;
      opts2.quad_order = -1;
      auto primal2 = solve_primal(prob, V2, inject(u, V2), ncfg, lcfg, opts2);
      if (!primal2.stats.converged) {
        rec.newton_converged = false;
        rec.message += (rec.message.empty() ? "" : "; ") + std::string("enriched ") + primal2.stats.message;
      }
      auto adj2 = solve_adjoint(prob, V2, primal2.u, goal, lcfg, opts2);
      rec.inner_failures += adj2.solve.converged ? 0 : 1;
      breakdown = estimate(prob, goal, u, adj.z, primal2.u, adj2.z, opts2);
      rec.eta_h = breakdown->eta_h;
      rec.eta_h_p = breakdown->eta_h_p;
      rec.eta_h_a = breakdown->eta_h_a;
      rec.eta_k = breakdown->eta_k;
      rec.remainder = breakdown->remainder;
      rec.enriched_error = breakdown->goal_enriched - breakdown->goal_injected;
      double s = 0.0;
      for (double v : breakdown->local) s += v;
      rec.local_sum = s;
      if (prob.exact_goal) {
        const auto eff = efficiency(*breakdown, *prob.exact_goal, rec.J_h);
        rec.I_eff_h = eff.h;
        rec.I_eff_p = eff.p;
        rec.I_eff_a = eff.a;
      }
    }
    if (!rec.newton_converged) result.all_converged = false;

    std::vector<int> marked;
    bool last = level + 1 >= cfg.max_levels;
    std::vector<std::shared_ptr<const SimplicialMesh>> chain;
    if (!last) {
      if (cfg.mode == RefinementMode::Dwr) {
        marked = doerfler_mark(breakdown->local, cfg.theta);
        if (marked.empty()) last = true;
        else chain.push_back(std::make_shared<const SimplicialMesh>(refine(*mesh, marked)));
      } else {
        marked.resize(mesh->num_elements());
        std::iota(marked.begin(), marked.end(), 0);
        auto m = mesh;
        for (int r = 0; r < mesh->dim(); ++r) {
          m = std::make_shared<const SimplicialMesh>(refine_all(*m));
          chain.push_back(m);
        }
      }
    }
    std::shared_ptr<const FeSpace> next;
    if (!last) {
      next = std::make_shared<const FeSpace>(chain.back(), cfg.degree);
      if (next->num_dofs() > cfg.max_dofs) last = true;
    }
    if (last) marked.clear();

    result.records.push_back(rec);
    if (observer) observer(LevelData{result.records.back(), *mesh, u, breakdown ? &*breakdown : nullptr, marked});
    if (last) break;

    // nested iteration: carry the solution through every intermediate mesh
    FeFunction carried = u;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      carried = transfer(carried, std::make_shared<const FeSpace>(chain[i], cfg.degree));
    init = transfer(carried, next);
    init.zero_constrained();
    mesh = chain.back();
    V = next;
  }
  return result;
}

}  // namespace goast
