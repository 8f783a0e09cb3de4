#pragma once

#include "goast/assembly.hpp"

namespace goast {

// u(x,t) = t^2 e^t prod_i sin(pi x_i)
ExactSolution smooth_solution(int d);

// f = dt u - trace(flux_jacobian(grad_x u) hess_x u) for a given exact solution.
ScalarField manufactured_source(const ExactSolution& exact, int d, double p, double eps);

// Problem with the smooth manufactured solution and the matching source.
ProblemDefinition smooth_problem(int d, double p, double eps);

namespace reference {

// Integral of the smooth solution over Omega at t = 1: 2e/pi for d = 1.
double final_time_goal(int d);

// Integral of |grad_x u|^4 of the smooth solution over the diamond
// |x-1/2| + |t-1/2| <= 1/4 (d = 1, independent quadrature).
inline constexpr double kDiamondEnergyD1 = 0.011016424135601841;
// Same over the octahedron with square cross-section (d = 2).
inline constexpr double kOctahedronEnergyD2 = 0.01937125060566419;

}  // namespace reference

}  // namespace goast
