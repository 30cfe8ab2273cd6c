#include "gpbog/gaussian_state.hpp"

#include <cmath>
#include <functional>

#include "gpbog/errors.hpp"
#include "gpbog/numerics.hpp"

namespace gpbog {

GaussianRealization realize(const QuasiFreePair& pair) {
  const Eigen::Index n = pair.dim();
  if (!admissible(pair).admissible) throw PreconditionError("pair is not admissible");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // Symmetrized quadrature covariances ⟨xx⟩ = γ + α + ½, ⟨pp⟩ = γ − α + ½.
  const Eigen::MatrixXd X = pair.gamma + pair.alpha + 0.5 * I;
  const Eigen::MatrixXd P = pair.gamma - pair.alpha + 0.5 * I;
  const Eigen::MatrixXd Xh = psd_sqrt(X, 0.0);
  Eigen::MatrixXd W = Xh * P * Xh;
  W = 0.5 * (W + W.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
  const Eigen::VectorXd nu = es.eigenvalues().cwiseMax(0.25).cwiseSqrt();
  // x = A x'', p = A^{-T} p'' brings both covariances to diag(ν).
  const Eigen::MatrixXd A = Xh * es.eigenvectors() * nu.cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd Ainv = A.inverse();
  GaussianRealization g;
  g.U = 0.5 * (Ainv + A.transpose());
  g.V = 0.5 * (Ainv - A.transpose());
  g.occupation = (nu.array() - 0.5).cwiseMax(0.0).matrix();
  g.Z = -g.U.inverse() * g.V;
  g.Z = 0.5 * (g.Z + g.Z.transpose()).eval();
  return g;
}

Eigen::VectorXd squeezed_vacuum(const GaussianRealization& g, const TruncatedFock& space) {
  const int n = space.modes();
  if (g.Z.rows() != n) throw ValidationError("realization and Fock space differ in mode count");
  const Eigen::Index d = static_cast<Eigen::Index>(space.dim());
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(d), term = Eigen::VectorXd::Zero(d), tmp, next;
  term(0) = 1.0;
  psi = term;
  // exp(Q)|0⟩ = Σ Q^m/m! |0⟩ with Q = ½ Σ Z_ij a*_i a*_j; each term is exact below the cap.
  for (int m = 1; 2 * m <= space.max_total(); ++m) {
    next = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) {
      space.apply_create(i, term, tmp);
      for (int j = 0; j < n; ++j) {
        if (g.Z(i, j) == 0.0) continue;
        Eigen::VectorXd t2;
        space.apply_create(j, tmp, t2);
        next += 0.5 * g.Z(i, j) * t2;
      }
    }
    term = next / m;
    psi += term;
  }
  // ‖exp(Q)|0⟩‖² = det(1 − Z²)^{-1/2}.
  const Eigen::MatrixXd Z2 = Eigen::MatrixXd::Identity(n, n) - g.Z * g.Z;
  const double norm2 = 1.0 / std::sqrt(Z2.determinant());
  return psi / std::sqrt(norm2);
}

Mixture truncated_mixture(const QuasiFreePair& pair, int L, const MixtureOptions& opt) {
  const GaussianRealization g = realize(pair);
  const int n = static_cast<int>(pair.dim());
  // Geometric weights p(k) = (1−q) q^k with q = n̄/(1+n̄).
  std::vector<double> q(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) q[j] = g.occupation(j) / (1.0 + g.occupation(j));
  std::vector<std::vector<int>> configs;
  std::vector<double> weights;
  double kept = 0.0;
  int T = 0;
  for (; T <= opt.max_thermal; ++T) {
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int mode, int remaining) {
      if (mode == n) {
        if (remaining != 0) return;
        double w = 1.0;
        for (int j = 0; j < n; ++j) w *= (1.0 - q[j]) * std::pow(q[j], cur[j]);
        if (w > 0.0) {
          configs.push_back(cur);
          weights.push_back(w);
          kept += w;
        }
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        cur[mode] = v;
        rec(mode + 1, remaining - v);
      }
      cur[mode] = 0;
    };
    rec(0, T);
    if (1.0 - kept < opt.mass_tol) break;
  }
  const int T_used = std::min(T, opt.max_thermal);
  const TruncatedFock work(n, L + T_used);
  const Eigen::VectorXd omega = squeezed_vacuum(g, work);
  Mixture mix;
  mix.level = L;
  mix.thermal_mass = kept;
  const TruncatedFock out_space(n, L);
  const auto out_dim = static_cast<Eigen::Index>(out_space.dim());
  Eigen::VectorXd t1, t2;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    Eigen::VectorXd v = omega;
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < configs[c][j]; ++r) {
        // b*_j = Σ_i U_ji a*_i + V_ji a_i.
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.size());
        for (int i = 0; i < n; ++i) {
          if (g.U(j, i) != 0.0) {
            work.apply_create(i, v, t1);
            acc += g.U(j, i) * t1;
          }
          if (g.V(j, i) != 0.0) {
            work.apply_annihilate(i, v, t2);
            acc += g.V(j, i) * t2;
          }
        }
        v = acc / std::sqrt(static_cast<double>(r + 1));
      }
    mix.components.push_back({weights[c], v.head(out_dim)});
  }
  return mix;
}

Eigen::VectorXd single_mode_squeezed(double s, int n_pairs) {
  if (n_pairs < 0) throw ValidationError("n_pairs must be non-negative");
  // sinh r = s; c_{2m} = (cosh r)^{-1/2} (tanh r / 2)^m √((2m)!)/m!, built by recurrence.
  const double ch = std::sqrt(1.0 + s * s), th = s / ch;
  Eigen::VectorXd c(n_pairs + 1);
  c(0) = 1.0 / std::sqrt(ch);
  for (int m = 1; m <= n_pairs; ++m) c(m) = c(m - 1) * th * std::sqrt((2.0 * m - 1) * (2.0 * m)) / (2.0 * m);
  return c;
}

}  // namespace gpbog
