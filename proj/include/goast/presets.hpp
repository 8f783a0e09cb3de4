#pragma once

#include <optional>
#include <string>

#include "goast/adaptivity.hpp"

namespace goast {

enum class Preset { SmoothConvergence, LinearGoal, NonlinearGoal, Custom };

const char* to_string(Preset p);
std::optional<Preset> parse_preset(const std::string& name);

struct Experiment {
  ProblemDefinition problem;
  GoalFunctional goal;
  SimplicialMesh mesh;
};

// Manufactured smooth solution with the goal of the preset. `Custom` uses the
// goal named by `custom_goal` ("final_time" or "p_energy").
Experiment make_experiment(Preset preset, int d, double p, double eps, const std::string& custom_goal = "final_time");

// Reference value of the region goal for the smooth solution; known for p = 4.
std::optional<double> reference_region_energy(int d, double p);

}  // namespace goast
