#include "goast/solvers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/core.h>

namespace goast {

const char* to_string(LinearSolverKind kind) { return kind == LinearSolverKind::Gmres ? "gmres" : "direct"; }

const char* to_string(Preconditioner kind) {
  switch (kind) {
    case Preconditioner::None: return "none";
    case Preconditioner::Jacobi: return "jacobi";
    case Preconditioner::Ilu0: return "ilu0";
  }
  return "?";
}

void LinearSolverConfig::validate() const {
  if (!(gmres_rel_tol > 0.0)) throw std::invalid_argument("linear solver: tolerance must be positive");
  if (gmres_max_iter < 1) throw std::invalid_argument("linear solver: max iterations must be at least 1");
}

void NewtonConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("newton: tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("newton: max_iter must be at least 1");
  if (max_line_search_steps < 0) throw std::invalid_argument("newton: negative line search steps");
}

namespace {

class Preconditioning {
 public:
  Preconditioning(const SparseOperator& K, Preconditioner kind) : K_(K), kind_(kind) {
    const int n = K.rows();
    if (kind == Preconditioner::Jacobi) {
      inv_diag_.assign(n, 1.0);
      for (int i = 0; i < n; ++i) {
        const double d = K(i, i);
        if (d != 0.0) inv_diag_[i] = 1.0 / d;
      }
    } else if (kind == Preconditioner::Ilu0) {
      factorize();
    }
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    const int n = K_.rows();
    switch (kind_) {
      case Preconditioner::None:
        std::copy(x.begin(), x.end(), y.begin());
        return;
      case Preconditioner::Jacobi:
        for (int i = 0; i < n; ++i) y[i] = inv_diag_[i] * x[i];
        return;
      case Preconditioner::Ilu0: {
        const auto& rp = K_.row_ptr();
        const auto& cols = K_.cols();
        for (int i = 0; i < n; ++i) {
          double s = x[i];
          for (int k = rp[i]; k < diag_[i]; ++k) s -= lu_[k] * y[cols[k]];
          y[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
          double s = y[i];
          for (int k = diag_[i] + 1; k < rp[i + 1]; ++k) s -= lu_[k] * y[cols[k]];
          y[i] = s / lu_[diag_[i]];
        }
        return;
      }
    }
  }

 private:
  void factorize() {
    const int n = K_.rows();
    const auto& rp = K_.row_ptr();
    const auto& cols = K_.cols();
    lu_ = K_.values();
    diag_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      diag_[i] = K_.find(i, i);
      if (diag_[i] < 0) throw std::runtime_error("ilu0: missing diagonal entry");
    }
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
      for (int k = rp[i]; k < rp[i + 1]; ++k) pos[cols[k]] = k;
      for (int k = rp[i]; k < diag_[i]; ++k) {
        const int c = cols[k];
        const double piv = lu_[diag_[c]];
        if (piv == 0.0) throw std::runtime_error("ilu0: zero pivot");
        lu_[k] /= piv;
        for (int m = diag_[c] + 1; m < rp[c + 1]; ++m) {
          const int j = pos[cols[m]];
          if (j >= 0) lu_[j] -= lu_[k] * lu_[m];
        }
      }
      for (int k = rp[i]; k < rp[i + 1]; ++k) pos[cols[k]] = -1;
      if (lu_[diag_[i]] == 0.0) throw std::runtime_error("ilu0: zero pivot");
    }
  }

  const SparseOperator& K_;
  Preconditioner kind_;
  std::vector<double> inv_diag_;
  std::vector<double> lu_;
  std::vector<int> diag_;
};

LinearSolveResult gmres(const SparseOperator& K, std::span<const double> b, const LinearSolverConfig& cfg) {
  const int n = K.rows();
  LinearSolveResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  res.residual_history.push_back(bnorm);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Preconditioning M(K, cfg.preconditioner);
  const int m = std::min(cfg.gmres_max_iter, n);
  std::vector<std::vector<double>> V;
  V.reserve(m + 1);
  V.emplace_back(b.begin(), b.end());
  for (double& v : V[0]) v /= bnorm;
  std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
  g[0] = bnorm;
  std::vector<double> z(n), w(n);
  const double target = cfg.gmres_rel_tol * bnorm;
  int k = 0;
  for (; k < m; ++k) {
    M.apply(V[k], z);
    K.multiply(z, w);
    for (int i = 0; i <= k; ++i) {
      H[i][k] = dot(w, V[i]);
      for (int r = 0; r < n; ++r) w[r] -= H[i][k] * V[i][r];
    }
    // second Gram-Schmidt pass
    for (int i = 0; i <= k; ++i) {
      const double c = dot(w, V[i]);
      H[i][k] += c;
      for (int r = 0; r < n; ++r) w[r] -= c * V[i][r];
    }
    H[k + 1][k] = norm2(w);
    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
      H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
      H[i][k] = t;
    }
    const double den = std::hypot(H[k][k], H[k + 1][k]);
    if (den == 0.0) {
      res.message = "gmres breakdown";
      break;
    }
    cs[k] = H[k][k] / den;
    sn[k] = H[k + 1][k] / den;
    const double hk1 = H[k + 1][k];
    H[k][k] = den;
    H[k + 1][k] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    res.residual_history.push_back(std::abs(g[k + 1]));
    if (std::abs(g[k + 1]) <= target || hk1 == 0.0) {
      ++k;
      break;
    }
    V.emplace_back(w);
    for (double& v : V.back()) v /= hk1;
  }
  res.iterations = k;
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
    y[i] = s / H[i][i];
  }
  std::vector<double> u(n, 0.0);
  for (int j = 0; j < k; ++j)
    for (int r = 0; r < n; ++r) u[r] += y[j] * V[j][r];
  M.apply(u, res.x);
  std::vector<double> r = K * res.x;
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  res.relative_residual = norm2(r) / bnorm;
  // the true residual may lag the recurrence by rounding; allow a small margin
  res.converged = res.relative_residual <= 1.01 * cfg.gmres_rel_tol;
  if (!res.converged && res.message.empty())
    res.message = fmt::format("gmres stopped after {} iterations at relative residual {:.3e}", k,
                              res.relative_residual);
  return res;
}

LinearSolveResult direct(const SparseOperator& K, std::span<const double> b) {
  const int n = K.rows();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(K.nnz());
  for (int i = 0; i < n; ++i)
    for (int k = K.row_ptr()[i]; k < K.row_ptr()[i + 1]; ++k)
      if (K.values()[k] != 0.0) trip.emplace_back(i, K.cols()[k], K.values()[k]);
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  LinearSolveResult res;
  if (lu.info() != Eigen::Success) {
    res.x.assign(n, 0.0);
    res.message = "sparse LU factorization failed: " + lu.lastErrorMessage();
    return res;
  }
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
  Eigen::VectorXd x = lu.solve(rhs);
  res.x.assign(x.data(), x.data() + n);
  res.iterations = 1;
  std::vector<double> r = K * res.x;
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double bnorm = norm2(b);
  res.relative_residual = bnorm > 0.0 ? norm2(r) / bnorm : norm2(r);
  res.converged = std::isfinite(res.relative_residual) && res.relative_residual < 1e-8;
  if (!res.converged) res.message = "direct solve inaccurate";
  return res;
}

}  // namespace

LinearSolveResult linear_solve(const SparseOperator& K, std::span<const double> b, const LinearSolverConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(b.size()) != K.rows()) throw std::invalid_argument("linear_solve: dimension mismatch");
  if (cfg.kind == LinearSolverKind::Direct) {
    if (norm2(b) == 0.0) {
      LinearSolveResult res;
      res.x.assign(b.size(), 0.0);
      res.converged = true;
      return res;
    }
    return direct(K, b);
  }
  try {
    return gmres(K, b, cfg);
  } catch (const std::runtime_error& ex) {
    LinearSolveResult res;
    res.x.assign(b.size(), 0.0);
    res.message = ex.what();
    return res;
  }
}

NewtonResult newton_solve(const ProblemDefinition& prob, std::shared_ptr<const FeSpace> space, const FeFunction& init,
                          const NewtonConfig& ncfg, const LinearSolverConfig& lcfg, const AssemblyOptions& opts) {
  ncfg.validate();
  lcfg.validate();
  if (init.size() != space->num_dofs()) throw std::invalid_argument("newton_solve: initial guess has wrong size");
  NewtonResult out{FeFunction(space, init.coefficients()), {}};
  out.u.zero_constrained();
  auto& st = out.stats;
  const int n = space->num_dofs();

  std::vector<double> r = assemble_residual(*space, out.u, prob, opts);
  double rnorm = norm2(r);
  st.initial_residual_norm = rnorm;
  st.residual_history.push_back(rnorm);
  const double tol = std::max(ncfg.abs_tol, ncfg.rel_tol * rnorm);
  FeFunction trial(space, std::vector<double>(n, 0.0));

  while (true) {
    if (rnorm <= tol) {
      st.converged = true;
      break;
    }
    if (st.newton_iters >= ncfg.max_iter) {
      st.message = fmt::format("newton: no convergence in {} iterations, residual {:.3e}", ncfg.max_iter, rnorm);
      break;
    }
    const SparseOperator K = assemble_jacobian(*space, out.u, prob, opts);
    std::vector<double> rhs(r);
    for (double& v : rhs) v = -v;
    const auto lin = linear_solve(K, rhs, lcfg);
    st.total_inner_iters += lin.iterations;
    if (!lin.converged) ++st.inner_failures;

    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> rt;
    double rtnorm = 0.0;
    for (int s = 0; s <= ncfg.max_line_search_steps; ++s) {
      for (int i = 0; i < n; ++i) trial.coefficients()[i] = out.u.coefficients()[i] + lambda * lin.x[i];
      rt = assemble_residual(*space, trial, prob, opts);
      rtnorm = norm2(rt);
      if (rtnorm < rnorm) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++st.newton_iters;
    if (!accepted) {
      st.message = fmt::format("newton: line search failed at iteration {}, residual {:.3e}", st.newton_iters, rnorm);
      break;
    }
    std::swap(out.u.coefficients(), trial.coefficients());
    r = std::move(rt);
    rnorm = rtnorm;
    st.residual_history.push_back(rnorm);
    st.damping.push_back(lambda);
  }
  st.final_residual_norm = rnorm;
  return out;
}

AdjointResult solve_adjoint(const ProblemDefinition& prob, std::shared_ptr<const FeSpace> space, const FeFunction& u,
                            const GoalFunctional& goal, const LinearSolverConfig& lcfg, const AssemblyOptions& opts) {
  const SparseOperator K = assemble_jacobian(*space, u, prob, opts);
  const std::vector<double> g = assemble_goal_gradient(*space, u, goal);
  AdjointResult out;
  out.solve = linear_solve(K.transpose(), g, lcfg);
  out.z = FeFunction(space, out.solve.x);
  out.z.zero_constrained();
  return out;
}

FeFunction random_initial_guess(std::shared_ptr<const FeSpace> space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> c(space->num_dofs(), 0.0);
  for (int i = 0; i < space->num_dofs(); ++i) {
    const double v = dist(rng);
    if (!space->is_constrained(i)) c[i] = v;
  }
  return FeFunction(std::move(space), std::move(c));
}

}  // namespace goast
