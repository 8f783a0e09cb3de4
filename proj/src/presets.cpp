#include "goast/presets.hpp"

#include <stdexcept>

#include "goast/problems.hpp"

namespace goast {

const char* to_string(Preset p) {
  switch (p) {
    case Preset::SmoothConvergence: return "smooth_convergence";
    case Preset::LinearGoal: return "linear_goal";
    case Preset::NonlinearGoal: return "nonlinear_goal";
    case Preset::Custom: return "custom";
  }
  return "?";
}

std::optional<Preset> parse_preset(const std::string& name) {
  for (auto p : {Preset::SmoothConvergence, Preset::LinearGoal, Preset::NonlinearGoal, Preset::Custom})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

std::optional<double> reference_region_energy(int d, double p) {
  if (p != 4.0) return std::nullopt;
  if (d == 1) return reference::kDiamondEnergyD1;
  if (d == 2) return reference::kOctahedronEnergyD2;
  return std::nullopt;
}

Experiment make_experiment(Preset preset, int d, double p, double eps, const std::string& custom_goal) {
  bool region = preset == Preset::NonlinearGoal;
  if (preset == Preset::Custom) {
    if (custom_goal == "p_energy") region = true;
    else if (custom_goal != "final_time") throw std::invalid_argument("unknown goal: " + custom_goal);
  }
  ProblemDefinition prob = smooth_problem(d, p, eps);
  if (region) {
    auto mesh = build_region_mesh(d);
    auto goal = GoalFunctional::p_energy(default_region(d), p, mesh);
    prob.exact_goal = reference_region_energy(d, p);
    return {std::move(prob), std::move(goal), std::move(mesh)};
  }
  prob.exact_goal = reference::final_time_goal(d);
  return {std::move(prob), GoalFunctional::final_time(), build_box_mesh(d, 2)};
}

}  // namespace goast
