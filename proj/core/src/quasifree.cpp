#include "gpbog/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gpbog/errors.hpp"
#include "gpbog/numerics.hpp"

namespace gpbog {

namespace {
void require_symmetric(const Eigen::MatrixXd& m, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError(std::string(name) + " is not symmetric");
}

// Contraction matrix for ⟨A B⟩ with A left of B: 0 → γ, 1 → 1 + γ, 2 → α.
int contraction_kind(const LadderOp& a, const LadderOp& b) {
  if (a.create && !b.create) return 0;
  if (!a.create && b.create) return 1;
  return 2;
}

// All perfect matchings of {0, …, 2ℓ−1}, as partner arrays.
void matchings(std::vector<int>& partner, std::vector<std::vector<int>>& out) {
  const auto first = std::find(partner.begin(), partner.end(), -1);
  if (first == partner.end()) {
    out.push_back(partner);
    return;
  }
  const int i = static_cast<int>(first - partner.begin());
  for (int j = i + 1; j < static_cast<int>(partner.size()); ++j) {
    if (partner[j] != -1) continue;
    partner[i] = j;
    partner[j] = i;
    matchings(partner, out);
    partner[i] = partner[j] = -1;
  }
}
}  // namespace

QuasiFreePair QuasiFreePair::make(Eigen::MatrixXd gamma, Eigen::MatrixXd alpha) {
  if (gamma.rows() != gamma.cols() || alpha.rows() != alpha.cols() || gamma.rows() != alpha.rows())
    throw ValidationError("gamma and alpha must be square matrices of equal size");
  if (!gamma.allFinite() || !alpha.allFinite()) throw ValidationError("non-finite density matrix entries");
  require_symmetric(gamma, "gamma");
  require_symmetric(alpha, "alpha");
  QuasiFreePair p;
  p.gamma = 0.5 * (gamma + gamma.transpose());
  p.alpha = 0.5 * (alpha + alpha.transpose());
  p.trace_gamma = p.gamma.trace();
  return p;
}

QuasiFreePair QuasiFreePair::vacuum(int n) {
  return make(Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n));
}

Admissibility admissible(const QuasiFreePair& pair, double rel_tol) {
  const Eigen::Index n = pair.dim();
  Admissibility r;
  const double scale = std::max({1.0, pair.gamma.cwiseAbs().maxCoeff(), pair.alpha.cwiseAbs().maxCoeff()});
  if (n == 0) {
    r.admissible = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(pair.gamma);
  r.min_eig_gamma = eg.eigenvalues()(0);
  Eigen::MatrixXd block(2 * n, 2 * n);
  block << pair.gamma, pair.alpha, pair.alpha, Eigen::MatrixXd::Identity(n, n) + pair.gamma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(block);
  r.min_eig_block = eb.eigenvalues()(0);
  const double tol = -rel_tol * scale;
  if (r.min_eig_gamma < tol) {
    r.witness = eg.eigenvectors().col(0);
  } else if (r.min_eig_block < tol) {
    r.witness = eb.eigenvectors().col(0);
  } else {
    r.admissible = true;
  }
  return r;
}

QuasiFreePair from_kernel(const TrialStateSpec& spec, const Eigen::VectorXd& phi) {
  const Eigen::Index n = spec.k.rows();
  if (spec.k.cols() != n || phi.size() != n) throw ValidationError("kernel and condensate vector sizes differ");
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw ValidationError("condensate vector is not normalized");
  require_symmetric(spec.k, "k");
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n) - phi * phi.transpose();
  const Eigen::MatrixXd alpha = Q * spec.k * Q;
  const Eigen::MatrixXd gamma = Q * spec.k.transpose() * spec.k * Q;
  auto pair = QuasiFreePair::make(0.5 * (gamma + gamma.transpose()), 0.5 * (alpha + alpha.transpose()));
  const auto adm = admissible(pair);
  if (!adm.admissible)
    throw PreconditionError("from_kernel produced a non-admissible pair (min block eigenvalue " +
                            std::to_string(adm.min_eig_block) + ")");
  return pair;
}

WickTerms wick_energy(const QuasiFreePair& pair, const Eigen::MatrixXd& h, const InteractionTensor& W,
                      const Eigen::VectorXd& phi, double N, const WickOptions& opt) {
  const int n = static_cast<int>(pair.dim());
  if (h.rows() != n || h.cols() != n || W.dim() != n || phi.size() != n)
    throw ValidationError("wick_energy inputs live on different bases");
  if (!(N > 0.0)) throw ValidationError("N must be positive");
  require_symmetric(h, "one-body matrix");
  W.validate();
  const Eigen::MatrixXd& g = pair.gamma;
  const Eigen::MatrixXd& a = pair.alpha;
  WickTerms t;
  t.condensate = N * phi.dot(h * phi);
  t.one_body = (h.array() * g.array()).sum();
  CompensatedSum hartree, pairing, direct, exchange, psq;
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) {
          // Index order W(m, q, p, r): m,p on particle one, q,r on particle two.
          const double w = W(m, q, p, r);
          if (w == 0.0) continue;
          hartree.add(w * phi(m) * phi(q) * phi(p) * phi(r));
          pairing.add(w * phi(m) * phi(q) * a(p, r));
          direct.add(w * g(m, p) * g(q, r));
          exchange.add(w * g(m, q) * g(p, r));
          psq.add(w * a(m, q) * a(p, r));
        }
  t.hartree = 0.5 * N * N * hartree.value();
  t.pairing = N * pairing.value();
  t.direct = direct.value();
  t.exchange = exchange.value();
  t.pair_square = psq.value();
  t.interaction = 0.5 * (1.0 + opt.correction_C / N) * (t.direct + t.exchange + t.pair_square);
  t.total = t.condensate + t.hartree + t.one_body + t.pairing + t.interaction;
  return t;
}

double wick_expectation(const QuasiFreePair& pair, const std::vector<LadderOp>& ops) {
  if (ops.size() % 2 != 0) return 0.0;
  const Eigen::Index n = pair.dim();
  for (const auto& o : ops)
    if (o.mode < 0 || o.mode >= n) throw ValidationError("ladder operator mode out of range");
  auto contract = [&](const LadderOp& x, const LadderOp& y) {
    switch (contraction_kind(x, y)) {
      case 0: return pair.gamma(y.mode, x.mode);
      case 1: return (x.mode == y.mode ? 1.0 : 0.0) + pair.gamma(x.mode, y.mode);
      default: return pair.alpha(x.mode, y.mode);
    }
  };
  std::function<double(std::vector<int>&)> rec = [&](std::vector<int>& left) -> double {
    if (left.empty()) return 1.0;
    const int i = left.front();
    double s = 0.0;
    for (std::size_t k = 1; k < left.size(); ++k) {
      const int j = left[k];
      const double c = contract(ops[i], ops[j]);
      if (c == 0.0) continue;
      std::vector<int> rest;
      for (std::size_t l = 1; l < left.size(); ++l)
        if (l != k) rest.push_back(left[l]);
      s += c * rec(rest);
    }
    return s;
  };
  std::vector<int> idx(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) idx[i] = static_cast<int>(i);
  return rec(idx);
}

double number_moment(const QuasiFreePair& pair, int ell) {
  if (ell < 0 || ell > 4) throw DomainError("number_moment supports 0 <= ell <= 4");
  if (ell == 0) return 1.0;
  const Eigen::Index n = pair.dim();
  const Eigen::MatrixXd mats[3] = {pair.gamma, Eigen::MatrixXd::Identity(n, n) + pair.gamma, pair.alpha};
  // Operator slots: vertex v carries a*_{i_v} at 2v and a_{i_v} at 2v+1.
  std::vector<int> partner(static_cast<std::size_t>(2 * ell), -1);
  std::vector<std::vector<int>> all;
  matchings(partner, all);
  CompensatedSum total;
  for (const auto& m : all) {
    // Every vertex has degree two, so the pairing graph is a union of cycles, each worth Tr(∏ edges).
    std::vector<bool> used(static_cast<std::size_t>(2 * ell), false);
    double value = 1.0;
    for (int start = 0; start < 2 * ell && value != 0.0; ++start) {
      if (used[start]) continue;
      Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(n, n);
      int slot = start;
      do {
        const int other = m[slot];
        used[slot] = used[other] = true;
        const int lo = std::min(slot, other), hi = std::max(slot, other);
        const LadderOp A{lo % 2 == 0, 0}, B{hi % 2 == 0, 0};
        prod = prod * mats[contraction_kind(A, B)];
        slot = other ^ 1;  // the vertex's other slot
      } while (slot != start);
      value *= prod.trace();
    }
    total.add(value);
  }
  return total.value();
}

MomentCheck moment_bound_check(const QuasiFreePair& pair, int ell, double C2, double C3) {
  if (ell != 2 && ell != 3) throw DomainError("moment_bound_check supports ell in {2, 3}");
  MomentCheck c;
  c.moment = number_moment(pair, ell);
  c.bound = (ell == 2 ? C2 : C3) * std::pow(1.0 + pair.trace_gamma, ell);
  c.holds = c.moment <= c.bound;
  return c;
}

}  // namespace gpbog
