#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "goast/goals.hpp"
#include "goast/problems.hpp"
#include "oracles.hpp"

using namespace goast;

namespace {

std::shared_ptr<const FeSpace> make_space(SimplicialMesh m, int k) {
  return std::make_shared<const FeSpace>(std::make_shared<const SimplicialMesh>(std::move(m)), k);
}

FeFunction random_state(const std::shared_ptr<const FeSpace>& V, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1, 1);
  FeFunction u(V);
  for (double& c : u.coefficients()) c = dist(rng);
  u.zero_constrained();
  return u;
}

double energy_integrand(double x, double y, double t, int d) {
  const auto g = oracle::smooth_grad(x, y, t, d);
  const double n2 = g[0] * g[0] + g[1] * g[1];
  return n2 * n2;
}

// |grad_x u|^4 over the diamond, split into four triangles around the center.
double diamond_energy_oracle() {
  const std::array<std::array<double, 2>, 4> corner{{{0.75, 0.5}, {0.5, 0.75}, {0.25, 0.5}, {0.5, 0.25}}};
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    s += oracle::integrate_triangle({{{0.5, 0.5}, corner[i], corner[(i + 1) % 4]}},
                                    [](double x, double t) { return energy_integrand(x, 0.0, t, 1); }, 24);
  return s;
}

// Same over the octahedron: eight tetrahedra spanned by the center, an apex
// and one edge of the square equator.
double octahedron_energy_oracle() {
  const double h = 0.5 / std::numbers::sqrt2;
  const std::array<std::array<double, 3>, 4> sq{{{0.75, 0.75, 0.5}, {0.25, 0.75, 0.5}, {0.25, 0.25, 0.5}, {0.75, 0.25, 0.5}}};
  double s = 0.0;
  for (double apex : {0.5 - h, 0.5 + h})
    for (int i = 0; i < 4; ++i)
      s += oracle::integrate_tet({{{0.5, 0.5, 0.5}, {0.5, 0.5, apex}, sq[i], sq[(i + 1) % 4]}},
                                 [](double x, double y, double t) { return energy_integrand(x, y, t, 2); }, 20);
  return s;
}

}  // namespace

TEST_CASE("region gauges and volumes") {
  const auto D = diamond_region();
  CHECK(D.volume == doctest::Approx(0.125));
  CHECK(D.contains({0.5, 0.5, 0.0}));
  CHECK(D.contains({0.75, 0.5, 0.0}));
  CHECK_FALSE(D.contains({0.7, 0.7, 0.0}));
  const auto O = octahedron_region();
  const double h = 0.5 / std::numbers::sqrt2;
  CHECK(O.volume == doctest::Approx(std::numbers::sqrt2 / 3.0 * 0.125));
  // pyramids: 2 * (1/3) * base 1/4 * height h
  CHECK(O.volume == doctest::Approx(2.0 / 3.0 * 0.25 * h));
  CHECK(O.contains({0.75, 0.75, 0.5}));
  CHECK(O.contains({0.5, 0.5, 0.5 + h}));
  CHECK_FALSE(O.contains({0.5, 0.5, 0.5 + h + 1e-6}));
  CHECK_FALSE(O.contains({0.7, 0.7, 0.6}));
  CHECK_THROWS(default_region(3));
}

TEST_CASE("region meshes resolve their regions") {
  for (int d = 1; d <= 2; ++d) {
    const auto m = build_region_mesh(d);
    CHECK_NOTHROW(GoalFunctional::p_energy(default_region(d), 4.0, m));
    double vol = 0.0;
    const auto g = GoalFunctional::p_energy(default_region(d), 4.0, m);
    for (int e = 0; e < m.num_elements(); ++e)
      if (g.in_region(m, e)) vol += m.volume(e);
    CHECK(vol == doctest::Approx(default_region(d).volume).epsilon(1e-12));
    // still resolved after refinement
    CHECK_NOTHROW(g.check_alignment(refine(m, std::vector<int>{0, 3, 11})));
  }
}

TEST_CASE("misaligned meshes are rejected") {
  CHECK_THROWS_AS(GoalFunctional::p_energy(diamond_region(), 4.0, build_box_mesh(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(GoalFunctional::p_energy(diamond_region(), 4.0, build_box_mesh(1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(GoalFunctional::p_energy(octahedron_region(), 4.0, build_box_mesh(2, 4)), std::invalid_argument);
  CHECK_THROWS_AS(GoalFunctional::p_energy(diamond_region(), 1.0, build_region_mesh(1)), std::invalid_argument);
}

TEST_CASE("final-time integral") {
  auto V = make_space(build_box_mesh(1, 4), 1);
  const auto goal = GoalFunctional::final_time();
  CHECK(eval_goal(goal, FeFunction(V)) == 0.0);

  // P1 trace is the nodal interpolant: the trapezoidal rule of the top values
  const auto u = interpolate(V, [](const Point& x) { return x[1] * std::sin(3.0 * x[0]); });
  double trap = 0.0;
  for (int i = 0; i < 4; ++i) trap += 0.125 * (std::sin(3.0 * i / 4.0) + std::sin(3.0 * (i + 1) / 4.0));
  CHECK(eval_goal(goal, u) == doctest::Approx(trap).epsilon(1e-13));

  // P2 reproduces quadratics on the top face
  auto W = make_space(build_box_mesh(2, 2), 2);
  const auto w = interpolate(W, [](const Point& x) { return x[2] * x[0] * (1.0 - x[0]) * (1.0 + x[1]); });
  CHECK(eval_goal(goal, w) == doctest::Approx(1.0 / 6.0 * 1.5).epsilon(1e-13));
}

TEST_CASE("final-time integral of the smooth solution converges to the reference value") {
  for (int d = 1; d <= 2; ++d) {
    const auto ex = smooth_solution(d);
    double prev = 1.0;
    for (int n : {2, 4, 8}) {
      const auto u = interpolate(make_space(build_box_mesh(d, n), 2), ex.value);
      const double err = std::abs(eval_goal(GoalFunctional::final_time(), u) - reference::final_time_goal(d));
      CHECK(err < prev / 4.0);
      prev = err;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("final-time goal is linear and its derivative is itself") {
  auto V = make_space(build_box_mesh(2, 2), 1);
  const auto goal = GoalFunctional::final_time();
  const auto u = random_state(V, 1), v = random_state(V, 2);
  FeFunction w(V);
  for (int i = 0; i < V->num_dofs(); ++i) w.coefficients()[i] = 2.0 * u.coefficients()[i] - 3.0 * v.coefficients()[i];
  CHECK(eval_goal(goal, w) == doctest::Approx(2.0 * eval_goal(goal, u) - 3.0 * eval_goal(goal, v)));
  CHECK(goal_derivative(goal, u, v) == doctest::Approx(eval_goal(goal, v)));
  const auto g = assemble_goal_gradient(*V, u, goal);
  CHECK(dot(g, v.coefficients()) == doctest::Approx(eval_goal(goal, v)));
}

TEST_CASE("region energy of an affine function is |grad|^p times the region volume") {
  {
    auto V = make_space(build_region_mesh(1), 1);
    const auto goal = GoalFunctional::p_energy(diamond_region(), 4.0, V->mesh());
    const auto u = interpolate(V, [](const Point& x) { return 2.0 * x[0] + 3.0 * x[1]; });
    CHECK(eval_goal(goal, u) == doctest::Approx(16.0 * 0.125));
  }
  {
    auto V = make_space(build_region_mesh(2), 2);
    const auto goal = GoalFunctional::p_energy(octahedron_region(), 3.0, V->mesh());
    const auto u = interpolate(V, [](const Point& x) { return 3.0 * x[0] - 4.0 * x[1] + x[2]; });
    CHECK(eval_goal(goal, u) == doctest::Approx(125.0 * octahedron_region().volume));
  }
}

TEST_CASE("region energy derivative matches finite differences") {
  for (int d = 1; d <= 2; ++d)
    for (double p : {1.5, 2.0, 4.0}) {
      auto V = make_space(build_region_mesh(d), 1);
      const auto goal = GoalFunctional::p_energy(default_region(d), p, V->mesh());
      const auto u = random_state(V, 5), v = random_state(V, 6);
      const double h = 1e-6;
      FeFunction up = u, um = u;
      for (int i = 0; i < V->num_dofs(); ++i) {
        up.coefficients()[i] += h * v.coefficients()[i];
        um.coefficients()[i] -= h * v.coefficients()[i];
      }
      const double fd = (eval_goal(goal, up) - eval_goal(goal, um)) / (2 * h);
      CHECK(goal_derivative(goal, u, v) == doctest::Approx(fd).epsilon(1e-6));
      const auto g = assemble_goal_gradient(*V, u, goal);
      CHECK(dot(g, v.coefficients()) == doctest::Approx(fd).epsilon(1e-6));
      // zero state: the derivative vanishes
      CHECK(goal_derivative(goal, FeFunction(V), v) == 0.0);
    }
}

TEST_CASE("region energy reference values") {
  CHECK(diamond_energy_oracle() == doctest::Approx(reference::kDiamondEnergyD1).epsilon(1e-12));
  const double octa = octahedron_energy_oracle();
  CHECK(octa == doctest::Approx(0.019371265989845697).epsilon(1e-12));
  // the tabulated constant agrees to about six digits
  CHECK(std::abs(octa - reference::kOctahedronEnergyD2) / octa < 1e-6);

  // discrete values converge to the oracle under uniform refinement
  auto m = std::make_shared<const SimplicialMesh>(build_region_mesh(1));
  const auto ex = smooth_solution(1);
  double prev = 1.0;
  for (int level = 0; level < 3; ++level) {
    auto V = std::make_shared<const FeSpace>(m, 2);
    const auto goal = GoalFunctional::p_energy(diamond_region(), 4.0, *m);
    const double err = std::abs(eval_goal(goal, interpolate(V, ex.value)) - reference::kDiamondEnergyD1);
    CHECK(err < prev);
    prev = err;
    m = std::make_shared<const SimplicialMesh>(refine_all(refine_all(*m)));
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("zero functional") {
  auto V = make_space(build_box_mesh(1, 2), 1);
  const auto goal = GoalFunctional::zero();
  CHECK(goal.is_zero());
  const auto u = random_state(V, 7);
  CHECK(eval_goal(goal, u) == 0.0);
  CHECK(goal_derivative(goal, u, u) == 0.0);
  for (double g : assemble_goal_gradient(*V, u, goal)) CHECK(g == 0.0);
}
