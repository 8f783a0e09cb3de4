#include "goast/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

namespace goast {

void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on the monic Jacobi recurrence, beta = 0.
  const double beta = 0.0;
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + ab;
      sub(k) = std::sqrt(4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    weights[k] = mu0 * v * v;
  }
}

namespace {

// Rule on [0,1] for the weight (1-u)^alpha.
void collapsed_line(int n, double alpha, std::vector<double>& u, std::vector<double>& w) {
  std::vector<double> x, wx;
  gauss_jacobi(n, alpha, x, wx);
  u.resize(n);
  w.resize(n);
  const double scale = std::pow(0.5, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    u[i] = 0.5 * (1.0 + x[i]);
    w[i] = scale * wx[i];
  }
}

QuadratureRule build(int dim, int order) {
  QuadratureRule rule;
  rule.dim = dim;
  rule.order = order;
  const int n = std::max(1, (order + 2) / 2);
  std::vector<double> u0, w0, u1, w1, u2, w2;
  if (dim == 1) {
    collapsed_line(n, 0.0, u0, w0);
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({u0[i], 0.0, 0.0});
      rule.weights.push_back(w0[i]);
    }
  } else if (dim == 2) {
    collapsed_line(n, 1.0, u0, w0);
    collapsed_line(n, 0.0, u1, w1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        rule.points.push_back({u0[i], (1.0 - u0[i]) * u1[j], 0.0});
        rule.weights.push_back(w0[i] * w1[j]);
      }
  } else {
    collapsed_line(n, 2.0, u0, w0);
    collapsed_line(n, 1.0, u1, w1);
    collapsed_line(n, 0.0, u2, w2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double a = 1.0 - u0[i];
          rule.points.push_back({u0[i], a * u1[j], a * (1.0 - u1[j]) * u2[k]});
          rule.weights.push_back(w0[i] * w1[j] * w2[k]);
        }
  }
  return rule;
}

}  // namespace

const QuadratureRule& quadrature(int dim, int order) {
  if (dim < 1 || dim > 3) throw std::invalid_argument(fmt::format("quadrature: unsupported dimension {}", dim));
  if (order < 0 || order > kMaxQuadratureOrder)
    throw std::invalid_argument(fmt::format("quadrature: unsupported order {}", order));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({dim, order});
  if (it == cache.end()) it = cache.emplace(std::pair{dim, order}, build(dim, order)).first;
  return it->second;
}

}  // namespace goast
