#include "gpbog/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gpbog/errors.hpp"

namespace gpbog {

Eigen::VectorXd default_start_vector(Eigen::Index n) {
  std::mt19937_64 rng(0x5eed1234abcdULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.05 * u(rng);
  return v.normalized();
}

namespace {

// Orthogonalize w against the first k columns of V twice (DGKS-style).
void reorthogonalize(const Eigen::MatrixXd& V, Eigen::Index k, Eigen::VectorXd& w, Eigen::VectorXd* coeff) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd c = V.leftCols(k).transpose() * w;
    w.noalias() -= V.leftCols(k) * c;
    if (coeff) {
      if (pass == 0)
        *coeff = c;
      else
        *coeff += c;
    }
  }
}

}  // namespace

LanczosResult lanczos_lowest(const LinearOperator& op, Eigen::Index n, const LanczosOptions& opt,
                             const Eigen::VectorXd* start) {
  if (n <= 0) throw ValidationError("lanczos: empty operator");
  LanczosResult res;
  const int nev = static_cast<int>(std::min<Eigen::Index>(opt.nev, n));

  // Small problems: build the dense matrix column by column.
  if (n <= std::max(opt.krylov_dim, 64)) {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n), y(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      e(j) = 1.0;
      op(e, y);
      a.col(j) = y;
      e(j) = 0.0;
    }
    res.matvecs = n;
    a = 0.5 * (a + a.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    res.values = es.eigenvalues().head(nev);
    res.vectors = es.eigenvectors().leftCols(nev);
    res.residuals.resize(nev);
    for (int i = 0; i < nev; ++i) res.residuals(i) = (a * res.vectors.col(i) - res.values(i) * res.vectors.col(i)).norm();
    res.converged = true;
    return res;
  }

  const int m = std::max(opt.krylov_dim, 2 * nev + 8);
  const int keep = std::min(m - 2, nev + std::max(4, m / 4));
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  V.col(0) = start ? start->normalized() : default_start_vector(n);

  Eigen::VectorXd w(n), coeff;
  Eigen::Index k = 0;  // number of locked-in Ritz columns at the start of a cycle
  double last_residual = INFINITY;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Eigen::Index j = k;
    Eigen::Index filled = m;
    double beta = 0.0;
    for (; j < m; ++j) {
      op(V.col(j), w);
      ++res.matvecs;
      reorthogonalize(V, j + 1, w, &coeff);
      for (Eigen::Index i = 0; i <= j; ++i) T(i, j) = T(j, i) = coeff(i);
      beta = w.norm();
      if (beta < 1e-14 * std::max(1.0, std::abs(T(j, j)))) {
        // Invariant subspace found.
        filled = j + 1;
        beta = 0.0;
        break;
      }
      V.col(j + 1) = w / beta;
      if (j + 1 < m) T(j + 1, j) = T(j, j + 1) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(filled, filled));
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& S = es.eigenvectors();
    const int want = static_cast<int>(std::min<Eigen::Index>(nev, filled));
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < want; ++i) {
      const double r = std::abs(beta * S(filled - 1, i));
      worst = std::max(worst, r);
      if (r > opt.tol) ok = false;
    }
    last_residual = worst;
    if (ok || filled < m) {
      res.values = theta.head(want);
      res.vectors = V.leftCols(filled) * S.leftCols(want);
      res.residuals.resize(want);
      for (int i = 0; i < want; ++i) {
        res.vectors.col(i).normalize();
        op(res.vectors.col(i), w);
        ++res.matvecs;
        res.residuals(i) = (w - res.values(i) * res.vectors.col(i)).norm();
      }
      res.converged = res.residuals.maxCoeff() <= std::max(opt.tol, 1e-15) * 10.0 || ok;
      return res;
    }
    // Thick restart: keep the lowest `keep` Ritz vectors plus the residual direction.
    Eigen::MatrixXd ritz = V.leftCols(m) * S.leftCols(keep);
    Eigen::VectorXd resid = V.col(m);
    V.leftCols(keep) = ritz;
    V.col(keep) = resid;
    T.setZero();
    for (int i = 0; i < keep; ++i) {
      T(i, i) = theta(i);
      T(i, keep) = T(keep, i) = beta * S(m - 1, i);
    }
    k = keep;
  }
  if (opt.throw_on_stagnation) throw ConvergenceError("lanczos did not converge", last_residual);
  res.converged = false;
  return res;
}

}  // namespace gpbog
