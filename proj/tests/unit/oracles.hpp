#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's quadrature and shape-function code.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Gauss-Legendre on [0, 1] by Newton iteration on P_n.
inline void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Integral over the triangle (a, b, c) by a Duffy-collapsed Gauss-Legendre product.
inline double integrate_triangle(const std::array<std::array<double, 2>, 3>& v,
                                 const std::function<double(double, double)>& f, int n = 12) {
  std::vector<double> x, w;
  gauss_legendre01(n, x, w);
  const double ax = v[1][0] - v[0][0], ay = v[1][1] - v[0][1];
  const double bx = v[2][0] - v[0][0], by = v[2][1] - v[0][1];
  const double det = std::abs(ax * by - ay * bx);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = x[i], q = x[j];
      const double l1 = r * (1.0 - q), l2 = r * q;
      s += w[i] * w[j] * r * f(v[0][0] + l1 * ax + l2 * bx, v[0][1] + l1 * ay + l2 * by);
    }
  return s * det;
}

// Integral over the tetrahedron with vertices v by collapsed Gauss-Legendre.
inline double integrate_tet(const std::array<std::array<double, 3>, 4>& v,
                            const std::function<double(double, double, double)>& f, int n = 10) {
  std::vector<double> x, w;
  gauss_legendre01(n, x, w);
  std::array<std::array<double, 3>, 3> B{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) B[k][i] = v[i + 1][k] - v[0][k];
  const double det = std::abs(B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                              B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                              B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]));
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double a = x[i], b = x[j], c = x[k];
        // (a, b, c) in the cube -> barycentric (l1, l2, l3), Jacobian a^2 b
        const double l1 = a * (1.0 - b), l2 = a * b * (1.0 - c), l3 = a * b * c;
        std::array<double, 3> p{};
        for (int r = 0; r < 3; ++r) p[r] = v[0][r] + B[r][0] * l1 + B[r][1] * l2 + B[r][2] * l3;
        s += w[i] * w[j] * w[k] * a * a * b * f(p[0], p[1], p[2]);
      }
  return s * det;
}

// Exact integral of xi^a eta^b zeta^c over the reference simplex of dimension dim.
inline double monomial_integral(int dim, int a, int b, int c) {
  auto fact = [](int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  if (dim == 1) return 1.0 / (a + 1);
  if (dim == 2) return fact(a) * fact(b) / fact(a + b + 2);
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}

// u = t^2 e^t prod sin(pi x_i) and its spatial gradient, written out again.
inline double smooth_u(double x, double y, double t, int d) {
  const double s = std::sin(std::numbers::pi * x) * (d == 2 ? std::sin(std::numbers::pi * y) : 1.0);
  return t * t * std::exp(t) * s;
}

inline std::array<double, 2> smooth_grad(double x, double y, double t, int d) {
  using std::numbers::pi;
  const double T = t * t * std::exp(t);
  if (d == 1) return {T * pi * std::cos(pi * x), 0.0};
  return {T * pi * std::cos(pi * x) * std::sin(pi * y), T * pi * std::sin(pi * x) * std::cos(pi * y)};
}

}  // namespace oracle
