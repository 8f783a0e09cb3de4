#include <cmath>
#include <numbers>
#include <stdexcept>

#include "goast/problems.hpp"

namespace goast {

ExactSolution smooth_solution(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("smooth_solution: unsupported dimension");
  using std::numbers::pi;
  ExactSolution s;
  s.value = [d](const Point& x) {
    const double t = x[d];
    double v = t * t * std::exp(t);
    for (int i = 0; i < d; ++i) v *= std::sin(pi * x[i]);
    return v;
  };
  s.gradient = [d](const Point& x) {
    const double t = x[d];
    const double T = t * t * std::exp(t);
    const double dT = (2.0 * t + t * t) * std::exp(t);
    Gradient g{0.0, 0.0, 0.0};
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= std::sin(pi * x[i]);
    for (int i = 0; i < d; ++i) {
      double others = 1.0;
      for (int j = 0; j < d; ++j)
        if (j != i) others *= std::sin(pi * x[j]);
      g[i] = T * pi * std::cos(pi * x[i]) * others;
    }
    g[d] = dT * prod;
    return g;
  };
  s.hessian_x = [d](const Point& x) {
    const double t = x[d];
    const double T = t * t * std::exp(t);
    Mat2 h{};
    if (d == 1) {
      h[0][0] = -T * pi * pi * std::sin(pi * x[0]);
    } else {
      const double s0 = std::sin(pi * x[0]), s1 = std::sin(pi * x[1]);
      const double c0 = std::cos(pi * x[0]), c1 = std::cos(pi * x[1]);
      h[0][0] = -T * pi * pi * s0 * s1;
      h[1][1] = -T * pi * pi * s0 * s1;
      h[0][1] = h[1][0] = T * pi * pi * c0 * c1;
    }
    return h;
  };
  return s;
}

ScalarField manufactured_source(const ExactSolution& exact, int d, double p, double eps) {
  return [exact, d, p, eps](const Point& x) {
    const auto g = exact.gradient(x);
    const Vec2 gx{g[0], d > 1 ? g[1] : 0.0};
    const Mat2 M = flux_jacobian(gx, p, eps);
    const Mat2 H = exact.hessian_x(x);
    double div = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) div += M[i][j] * H[j][i];
    return g[d] - div;
  };
}

ProblemDefinition smooth_problem(int d, double p, double eps) {
  ProblemDefinition prob;
  prob.d = d;
  prob.p = p;
  prob.eps = eps;
  prob.exact = smooth_solution(d);
  prob.source = manufactured_source(*prob.exact, d, p, eps);
  prob.validate();
  return prob;
}

namespace reference {

double final_time_goal(int d) {
  using std::numbers::pi, std::numbers::e;
  // e * (int_0^1 sin(pi x) dx)^d = e (2/pi)^d
  return e * std::pow(2.0 / pi, d);
}

}  // namespace reference

}  // namespace goast
