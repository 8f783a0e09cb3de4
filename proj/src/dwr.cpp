#include "goast/dwr.hpp"

#include <cmath>
#include <stdexcept>

namespace goast {

std::shared_ptr<const FeSpace> enrich(const std::shared_ptr<const FeSpace>& space) {
  if (space->degree() != 1) throw std::invalid_argument("enrich: only degree 1 spaces can be enriched");
  return std::make_shared<const FeSpace>(space->mesh_ptr(), 2);
}

FeFunction inject(const FeFunction& f, const std::shared_ptr<const FeSpace>& enriched) {
  if (f.space().mesh_ptr() != enriched->mesh_ptr()) throw std::invalid_argument("inject: different meshes");
  if (enriched->degree() < f.space().degree()) throw std::invalid_argument("inject: target space is coarser");
  return transfer(f, enriched);
}

EstimatorBreakdown estimate(const ProblemDefinition& prob, const GoalFunctional& goal, const FeFunction& u_h,
                            const FeFunction& z_h, const FeFunction& u_h2, const FeFunction& z_h2,
                            const AssemblyOptions& opts) {
  if (&u_h.space() != &z_h.space()) throw std::invalid_argument("estimate: coarse primal and adjoint spaces differ");
  if (&u_h2.space() != &z_h2.space()) throw std::invalid_argument("estimate: enriched primal and adjoint spaces differ");
  const auto& V2 = u_h2.space_ptr();
  if (V2->mesh_ptr() != u_h.space().mesh_ptr()) throw std::invalid_argument("estimate: spaces live on different meshes");

  const FeFunction u_t = inject(u_h, V2);
  const FeFunction z_t = inject(z_h, V2);
  const int n = V2->num_dofs();
  std::vector<double> ep(n), ez(n);
  for (int i = 0; i < n; ++i) {
    ep[i] = V2->is_constrained(i) ? 0.0 : u_h2.coefficients()[i] - u_t.coefficients()[i];
    ez[i] = V2->is_constrained(i) ? 0.0 : z_h2.coefficients()[i] - z_t.coefficients()[i];
  }
  std::vector<double> zt(z_t.coefficients());
  zero_constrained(*V2, zt);

  const int ne = V2->mesh().num_elements();
  const int nb = V2->dofs_per_element();
  const int order = quadrature_order(*V2, opts);
  EstimatorBreakdown out;
  out.local.assign(ne, 0.0);
  out.local_p.assign(ne, 0.0);
  out.local_a.assign(ne, 0.0);
  std::vector<double> local_k(ne, 0.0);

  parallel_chunks(ne, opts.threads, [&](int begin, int end, int) {
    std::array<double, 10> R{}, G{};
    std::array<double, 100> K{};
    for (int e = begin; e < end; ++e) {
      const auto dofs = V2->element_dofs(e);
      local_residual(*V2, u_t, prob, e, order, R);
      local_jacobian(*V2, u_t, prob, e, order, K);
      local_goal_gradient(goal, u_t, e, G);
      double p = 0.0, a = 0.0, k = 0.0;
      for (int b = 0; b < nb; ++b) {
        const int i = dofs[b];
        p -= R[b] * ez[i];
        k -= R[b] * zt[i];
        a += G[b] * ep[i];
        double Kep = 0.0;
        for (int c = 0; c < nb; ++c) Kep += K[b * nb + c] * ep[dofs[c]];
        a -= zt[i] * Kep;
      }
      out.local_p[e] = p;
      out.local_a[e] = a;
      out.local[e] = 0.5 * (p + a);
      local_k[e] = k;
    }
  });
  for (int e = 0; e < ne; ++e) {
    out.eta_h_p += out.local_p[e];
    out.eta_h_a += out.local_a[e];
    out.eta_k += local_k[e];
  }
  out.eta_h = 0.5 * (out.eta_h_p + out.eta_h_a);
  out.goal_enriched = eval_goal(goal, u_h2);
  out.goal_injected = eval_goal(goal, u_t);
  out.remainder = (out.goal_enriched - out.goal_injected) - (out.eta_h + out.eta_k);
  return out;
}

Efficiency efficiency(const EstimatorBreakdown& b, double J_exact, double J_h) {
  Efficiency out;
  const double err = J_exact - J_h;
  if (std::abs(err) < 1e-14) return out;
  out.h = b.eta_h / err;
  out.p = b.eta_h_p / err;
  out.a = b.eta_h_a / err;
  return out;
}

}  // namespace goast
