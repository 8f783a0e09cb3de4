#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "goast/assembly.hpp"
#include "goast/goals.hpp"

namespace goast {

// Same mesh, degree raised from 1 to 2.
std::shared_ptr<const FeSpace> enrich(const std::shared_ptr<const FeSpace>& space);

// Exact embedding of a coarse-space function into the enriched space.
FeFunction inject(const FeFunction& f, const std::shared_ptr<const FeSpace>& enriched);

struct EstimatorBreakdown {
  double eta_h_p = 0.0;  // -A(u~)(z2 - z~)
  double eta_h_a = 0.0;  // J'(u~)(u2 - u~) - A'(u~)(u2 - u~, z~)
  double eta_h = 0.0;    // (eta_h_p + eta_h_a) / 2
  double eta_k = 0.0;    // -A(u~)(z~)
  std::vector<double> local;    // per element, sums to eta_h
  std::vector<double> local_p;  // per element, sums to eta_h_p
  std::vector<double> local_a;  // per element, sums to eta_h_a
  double goal_enriched = 0.0;   // J(u2)
  double goal_injected = 0.0;   // J(u~)
  // [J(u2) - J(u~)] - [eta_h + eta_k]
  double remainder = 0.0;
  std::optional<double> I_eff_h, I_eff_p, I_eff_a;
};

// All residual forms are evaluated in the enriched space with the rule chosen by
// `opts` for that space.
EstimatorBreakdown estimate(const ProblemDefinition& prob, const GoalFunctional& goal, const FeFunction& u_h,
                            const FeFunction& z_h, const FeFunction& u_h2, const FeFunction& z_h2,
                            const AssemblyOptions& opts = {});

struct Efficiency {
  std::optional<double> h, p, a;
};

// eta / (J_exact - J_h); absent when |J_exact - J_h| < 1e-14.
Efficiency efficiency(const EstimatorBreakdown& b, double J_exact, double J_h);

}  // namespace goast
