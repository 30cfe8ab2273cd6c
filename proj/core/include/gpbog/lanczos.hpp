#pragma once

#include <Eigen/Dense>
#include <functional>

namespace gpbog {

using LinearOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct LanczosOptions {
  int nev = 1;               // lowest eigenpairs wanted
  int krylov_dim = 40;       // basis size before a restart
  int max_restarts = 400;
  double tol = 1e-10;        // on ||A x - theta x||
  bool throw_on_stagnation = true;
};

struct LanczosResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, unit norm
  Eigen::VectorXd residuals;
  long matvecs = 0;
  bool converged = false;
};

/// Deterministic start vector: normalized all-ones plus a small fixed
/// pseudo-random perturbation so that symmetry sectors orthogonal to the
/// constant vector are still reached.
Eigen::VectorXd default_start_vector(Eigen::Index n);

/// Thick-restart Lanczos with full reorthogonalization for the lowest
/// eigenpairs of a symmetric operator.
LanczosResult lanczos_lowest(const LinearOperator& op, Eigen::Index n, const LanczosOptions& opt,
                             const Eigen::VectorXd* start = nullptr);

}  // namespace gpbog
