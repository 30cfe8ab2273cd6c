#include "gpbog/many_body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "gpbog/errors.hpp"
#include "gpbog/lanczos.hpp"
#include "gpbog/numerics.hpp"
#include "gpbog/thread_pool.hpp"

namespace gpbog {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::torus_1d: return "torus_1d";
    case BasisKind::torus_3d: return "torus_3d";
    case BasisKind::oscillator_modes: return "oscillator_modes";
    case BasisKind::custom: return "custom";
  }
  return "custom";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "torus_1d") return BasisKind::torus_1d;
  if (s == "torus_3d") return BasisKind::torus_3d;
  if (s == "oscillator_modes") return BasisKind::oscillator_modes;
  if (s == "custom") return BasisKind::custom;
  throw ValidationError("unknown basis kind '" + s + "'");
}

void ManyBodyProblem::validate() const {
  const int M = modes();
  if (M < 1 || one_body.cols() != M) throw ValidationError("one-body matrix must be square and non-empty");
  if (two_body.dim() != M) throw ValidationError("interaction tensor and one-body matrix differ in size");
  if (N < 1) throw ValidationError("particle number must be positive");
  if (!one_body.allFinite()) throw ValidationError("non-finite one-body entry");
  const double scale = std::max(1.0, one_body.cwiseAbs().maxCoeff());
  if ((one_body - one_body.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("one-body matrix is not symmetric");
  two_body.validate();
  if (condensate.size() != 0) {
    if (condensate.size() != M) throw ValidationError("condensate vector has the wrong length");
    if (std::abs(condensate.norm() - 1.0) > 1e-10) throw ValidationError("condensate vector is not normalized");
  }
}

namespace {

const Eigen::VectorXd& require_condensate(const ManyBodyProblem& p) {
  if (p.condensate.size() != p.modes()) throw ValidationError("condensate vector not set");
  return p.condensate;
}

}  // namespace

// ---------------------------------------------------------------------------------------------------
// Hamiltonian

namespace {

FockSector checked_sector(const ManyBodyProblem& problem, std::size_t max_dim) {
  problem.validate();
  FockSector::dimension(problem.modes(), problem.N, max_dim);
  return FockSector(problem.modes(), problem.N);
}

}  // namespace

HamiltonianOperator::HamiltonianOperator(const ManyBodyProblem& problem, std::size_t max_dim)
    : p_(problem), sector_(checked_sector(problem, max_dim)) {}

template <class Emit>
void HamiltonianOperator::row(std::size_t idx, std::vector<int>& n, Emit&& emit) const {
  const int M = sector_.modes();
  const auto occ = sector_.occupation(idx);
  std::copy(occ.begin(), occ.end(), n.begin());
  const Eigen::MatrixXd& h = p_.one_body;
  for (int p = 0; p < M; ++p) {
    if (n[p] == 0) continue;
    const double ap = std::sqrt(n[p]);
    --n[p];
    for (int m = 0; m < M; ++m) {
      const double hv = h(m, p);
      if (hv == 0.0) continue;
      ++n[m];
      emit(sector_.index(n), hv * ap * std::sqrt(n[m]));
      --n[m];
    }
    ++n[p];
  }
  // a*_m a*_q a_r a_p is symmetric in m↔q and p↔r, so each unordered pair is visited once with the
  // sum of W over its distinct orderings.
  const InteractionTensor& W = p_.two_body;
  for (int p = 0; p < M; ++p) {
    if (n[p] == 0) continue;
    const double ap = std::sqrt(n[p]);
    --n[p];
    for (int r = p; r < M; ++r) {
      if (n[r] == 0) continue;
      const double ar = ap * std::sqrt(n[r]);
      --n[r];
      for (int m = 0; m < M; ++m) {
        ++n[m];
        const double am = ar * std::sqrt(n[m]);
        for (int q = m; q < M; ++q) {
          double w = W(m, q, p, r);
          if (p != r) w += W(m, q, r, p);
          if (m != q) w += W(q, m, p, r);
          if (p != r && m != q) w += W(q, m, r, p);
          if (w == 0.0) continue;
          ++n[q];
          emit(sector_.index(n), 0.5 * w * am * std::sqrt(n[q]));
          --n[q];
        }
        --n[m];
      }
      ++n[r];
    }
    ++n[p];
  }
}

void HamiltonianOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, unsigned threads) const {
  const std::size_t d = dim();
  if (static_cast<std::size_t>(x.size()) != d) throw ValidationError("vector does not match the sector dimension");
  y.setZero(static_cast<Eigen::Index>(d));
  const std::size_t chunks = std::min<std::size_t>(d, std::max(1u, threads) * 8u);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<int> work(static_cast<std::size_t>(sector_.modes()));
    const std::size_t lo = d * c / chunks, hi = d * (c + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) {
      double acc = 0.0;
      // Row i of a symmetric matrix equals the column H|i⟩.
      row(i, work, [&](std::size_t j, double v) { acc += v * x(static_cast<Eigen::Index>(j)); });
      y(static_cast<Eigen::Index>(i)) = acc;
    }
  });
}

Eigen::SparseMatrix<double> HamiltonianOperator::assemble() const {
  const std::size_t d = dim();
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> work(static_cast<std::size_t>(sector_.modes()));
  std::vector<std::pair<std::size_t, double>> col;
  for (std::size_t i = 0; i < d; ++i) {
    col.clear();
    row(i, work, [&](std::size_t j, double v) { col.emplace_back(j, v); });
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < col.size();) {
      double s = 0.0;
      const std::size_t j = col[k].first;
      for (; k < col.size() && col[k].first == j; ++k) s += col[k].second;
      if (s != 0.0) trip.emplace_back(static_cast<int>(j), static_cast<int>(i), s);
    }
  }
  Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

double HamiltonianOperator::expectation(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  apply(x, y);
  return x.dot(y);
}

Eigen::MatrixXd one_body_density(const FockSector& sector, const Eigen::VectorXd& psi) {
  const int M = sector.modes();
  if (static_cast<std::size_t>(psi.size()) != sector.dim()) throw ValidationError("state does not match the sector");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(M, M);
  std::vector<int> n(static_cast<std::size_t>(M));
  for (std::size_t i = 0; i < sector.dim(); ++i) {
    const double xi = psi(static_cast<Eigen::Index>(i));
    if (xi == 0.0) continue;
    const auto occ = sector.occupation(i);
    std::copy(occ.begin(), occ.end(), n.begin());
    for (int m = 0; m < M; ++m) {
      if (n[m] == 0) continue;
      const double am = std::sqrt(n[m]);
      --n[m];
      for (int k = 0; k < M; ++k) {
        ++n[k];
        g(m, k) += psi(static_cast<Eigen::Index>(sector.index(n))) * am * std::sqrt(n[k]) * xi;
        --n[k];
      }
      ++n[m];
    }
  }
  return 0.5 * (g + g.transpose());
}

EdResult exact_diagonalize(const ManyBodyProblem& problem, const EdOptions& opt) {
  const HamiltonianOperator H(problem, opt.max_dim);
  const auto d = static_cast<Eigen::Index>(H.dim());
  EdResult res;
  res.dim = H.dim();
  LanczosOptions lo;
  lo.nev = opt.nev;
  lo.tol = opt.tol;
  LanczosResult lr;
  if (H.dim() <= opt.assemble_below) {
    const Eigen::SparseMatrix<double> A = H.assemble();
    lr = lanczos_lowest([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = A * x; }, d, lo);
  } else {
    res.matrix_free = true;
    lr = lanczos_lowest([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { H.apply(x, y, opt.threads); }, d, lo);
  }
  res.matvecs = lr.matvecs;
  res.energies = lr.values;
  res.states = lr.vectors;
  for (Eigen::Index c = 0; c < res.states.cols(); ++c) {
    Eigen::Index imax = 0;
    res.states.col(c).cwiseAbs().maxCoeff(&imax);
    if (res.states(imax, c) < 0.0) res.states.col(c) *= -1.0;
  }
  res.energy = res.energies(0);
  res.ground = res.states.col(0);
  res.gamma1 = one_body_density(H.sector(), res.ground);
  return res;
}

CondensationReport condensation_report(const ManyBodyProblem& problem, const Eigen::VectorXd& state, double E_N) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  const HamiltonianOperator H(problem);
  if (std::abs(state.norm() - 1.0) > 1e-10) throw ValidationError("state is not normalized");
  const Eigen::MatrixXd g = one_body_density(H.sector(), state);
  CondensationReport r;
  const double occ = phi.dot(g * phi);
  r.depletion = std::max(0.0, problem.N - occ);
  r.condensate_fraction = occ / problem.N;
  r.excess_energy = H.expectation(state) - E_N;
  r.ratio = r.depletion / (r.excess_energy + 1.0);
  return r;
}

CondensationReport condensation_report(const ManyBodyProblem& problem, const EdResult& result) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  CondensationReport r;
  const double occ = phi.dot(result.gamma1 * phi);
  r.depletion = std::max(0.0, problem.N - occ);
  r.condensate_fraction = occ / problem.N;
  r.excess_energy = 0.0;
  r.ratio = r.depletion;
  return r;
}

// ---------------------------------------------------------------------------------------------------
// Excitation map

AdaptedBasis::AdaptedBasis(const Eigen::VectorXd& phi) {
  const auto M = static_cast<int>(phi.size());
  if (M < 1 || std::abs(phi.norm() - 1.0) > 1e-10) throw ValidationError("condensate vector is not normalized");
  // Q φ = e₀ with Q = R_K ⋯ R_1, each R zeroing the lower entry of a neighbouring pair.
  Eigen::VectorXd v = phi;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(M, M);
  for (int j = M - 1; j >= 1; --j) {
    const int i = j - 1;
    const double r = std::hypot(v(i), v(j));
    const double c = r == 0.0 ? 1.0 : v(i) / r, s = r == 0.0 ? 0.0 : v(j) / r;
    rot_.push_back({i, j, c, s});
    v(i) = r;
    v(j) = 0.0;
    const Eigen::RowVectorXd qi = Q.row(i), qj = Q.row(j);
    Q.row(i) = c * qi + s * qj;
    Q.row(j) = -s * qi + c * qj;
  }
  O_ = Q.transpose();
}

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double binomial(int n, int k) { return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)); }

// Substitute a*_i → S00 b*_i + S01 b*_j, a*_j → S10 b*_i + S11 b*_j in every occupation monomial.
Eigen::VectorXd substitute(const FockSector& sector, const Eigen::VectorXd& in, int i, int j,
                           const std::array<double, 4>& S) {
  const int N = sector.particles();
  std::vector<Eigen::MatrixXd> block(static_cast<std::size_t>(N + 1));
  for (int t = 0; t <= N; ++t) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(t + 1, t + 1);
    for (int a = 0; a <= t; ++a) {
      const int b = t - a;
      for (int x = 0; x <= a; ++x)
        for (int y = 0; y <= b; ++y) {
          const int p = x + y;
          const double coeff = binomial(a, x) * binomial(b, y) * std::pow(S[0], x) * std::pow(S[1], a - x) *
                               std::pow(S[2], y) * std::pow(S[3], b - y);
          if (coeff == 0.0) continue;
          B(p, a) += coeff * std::exp(0.5 * (log_factorial(p) + log_factorial(t - p) - log_factorial(a) -
                                             log_factorial(b)));
        }
    }
    block[static_cast<std::size_t>(t)] = std::move(B);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(in.size());
  std::vector<int> n(static_cast<std::size_t>(sector.modes()));
  for (std::size_t idx = 0; idx < sector.dim(); ++idx) {
    const double c = in(static_cast<Eigen::Index>(idx));
    if (c == 0.0) continue;
    const auto occ = sector.occupation(idx);
    std::copy(occ.begin(), occ.end(), n.begin());
    const int a = n[i], t = n[i] + n[j];
    const Eigen::MatrixXd& B = block[static_cast<std::size_t>(t)];
    for (int p = 0; p <= t; ++p) {
      const double v = B(p, a);
      if (v == 0.0) continue;
      n[i] = p;
      n[j] = t - p;
      out(static_cast<Eigen::Index>(sector.index(n))) += v * c;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd AdaptedBasis::to_adapted(const FockSector& sector, const Eigen::VectorXd& psi) const {
  // a*(u) = O a*(v) with O = R_1ᵀ ⋯ R_Kᵀ: peel the factors from the left.
  Eigen::VectorXd x = psi;
  for (const auto& r : rot_) x = substitute(sector, x, r.i, r.j, {r.c, -r.s, r.s, r.c});
  return x;
}

Eigen::VectorXd AdaptedBasis::from_adapted(const FockSector& sector, const Eigen::VectorXd& psi) const {
  Eigen::VectorXd x = psi;
  for (auto it = rot_.rbegin(); it != rot_.rend(); ++it) x = substitute(sector, x, it->i, it->j, {it->c, it->s, -it->s, it->c});
  return x;
}

Eigen::VectorXd ExcitationVector::layer(int k) const {
  if (k < 0 || k > N) throw ValidationError("layer index out of range");
  const TruncatedFock space(excited_modes, N);
  const auto lo = static_cast<Eigen::Index>(space.sector_offset(k));
  return data.segment(lo, static_cast<Eigen::Index>(space.sector(k).dim()));
}

std::vector<double> ExcitationVector::layer_norms() const {
  std::vector<double> out;
  for (int k = 0; k <= N; ++k) out.push_back(layer(k).norm());
  return out;
}

ExcitationVector excitation_map(const ManyBodyProblem& problem, const Eigen::VectorXd& psi) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  const int M = problem.modes();
  if (M < 2) throw ValidationError("excitation map needs at least two modes");
  const FockSector sector(M, problem.N);
  if (static_cast<std::size_t>(psi.size()) != sector.dim()) throw ValidationError("state does not match the sector");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw ValidationError("state is not normalized");
  const Eigen::VectorXd x = AdaptedBasis(phi).to_adapted(sector, psi);
  const TruncatedFock space(M - 1, problem.N);
  ExcitationVector xi{M - 1, problem.N, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dim()))};
  for (std::size_t idx = 0; idx < sector.dim(); ++idx) {
    const auto occ = sector.occupation(idx);
    xi.data(static_cast<Eigen::Index>(space.index(occ.subspan(1)))) = x(static_cast<Eigen::Index>(idx));
  }
  return xi;
}

Eigen::VectorXd excitation_map_inverse(const ManyBodyProblem& problem, const ExcitationVector& xi) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  const int M = problem.modes();
  if (xi.excited_modes != M - 1 || xi.N != problem.N) throw ValidationError("excitation vector does not match the problem");
  const FockSector sector(M, problem.N);
  const TruncatedFock space(M - 1, problem.N);
  if (static_cast<std::size_t>(xi.data.size()) != space.dim()) throw ValidationError("excitation vector has the wrong length");
  Eigen::VectorXd x(static_cast<Eigen::Index>(sector.dim()));
  for (std::size_t idx = 0; idx < sector.dim(); ++idx) {
    const auto occ = sector.occupation(idx);
    x(static_cast<Eigen::Index>(idx)) = xi.data(static_cast<Eigen::Index>(space.index(occ.subspan(1))));
  }
  return AdaptedBasis(phi).from_adapted(sector, x);
}

// ---------------------------------------------------------------------------------------------------
// Hartree analog and toy kernel

namespace {

// J_mp = Σ W(m,q,p,r) φ_q φ_r.
Eigen::MatrixXd mean_field(const InteractionTensor& W, const Eigen::VectorXd& phi) {
  const int M = W.dim();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M, M);
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < M; ++q)
      for (int p = 0; p < M; ++p)
        for (int r = 0; r < M; ++r) J(m, p) += W(m, q, p, r) * phi(q) * phi(r);
  return 0.5 * (J + J.transpose());
}

// T_ab = Σ W(a,b,c,d) φ_c φ_d.
Eigen::MatrixXd pair_source(const InteractionTensor& W, const Eigen::VectorXd& phi) {
  const int M = W.dim();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(M, M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c)
        for (int d = 0; d < M; ++d) T(a, b) += W(a, b, c, d) * phi(c) * phi(d);
  return 0.5 * (T + T.transpose());
}

Eigen::VectorXd lowest_vector(const Eigen::MatrixXd& F, const Eigen::VectorXd& align) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  const double s = align.size() ? v.dot(align) : v.sum();
  return s < 0.0 ? Eigen::VectorXd(-v) : v;
}

}  // namespace

double hartree_energy(const ManyBodyProblem& problem) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  return phi.dot(problem.one_body * phi) + 0.5 * problem.N * phi.dot(mean_field(problem.two_body, phi) * phi);
}

HartreeResult hartree_minimize(const ManyBodyProblem& problem, double tol, int max_iter) {
  const int M = problem.modes();
  if (M < 1) throw ValidationError("empty basis");
  HartreeResult res;
  Eigen::VectorXd phi = lowest_vector(problem.one_body, Eigen::VectorXd());
  double step = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::MatrixXd F = problem.one_body + problem.N * mean_field(problem.two_body, phi);
    const Eigen::VectorXd next = lowest_vector(F, phi);
    const double change = (next - phi).norm();
    res.iterations = it;
    if (change < tol) {
      phi = next;
      break;
    }
    if (it == max_iter) throw ConvergenceError("Hartree iteration did not converge", change);
    phi = ((1.0 - 0.5 * step) * phi + 0.5 * step * next).normalized();
  }
  res.phi = phi;
  const Eigen::MatrixXd J = mean_field(problem.two_body, phi);
  res.energy_per_particle = phi.dot(problem.one_body * phi) + 0.5 * problem.N * phi.dot(J * phi);
  res.mu = phi.dot(problem.one_body * phi) + problem.N * phi.dot(J * phi);
  return res;
}

Eigen::MatrixXd toy_kernel(const ManyBodyProblem& problem) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  const int M = problem.modes();
  const AdaptedBasis basis(phi);
  const Eigen::MatrixXd& O = basis.matrix();
  const Eigen::MatrixXd h = O.transpose() * problem.one_body * O;
  const Eigen::MatrixXd T = O.transpose() * pair_source(problem.two_body, phi) * O;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(M, M);
  for (int i = 1; i < M; ++i)
    for (int j = 1; j < M; ++j) {
      const double den = h(i, i) + h(j, j) - 2.0 * h(0, 0);
      if (!(den > 0.0)) throw DomainError("toy kernel needs excited diagonal entries above the condensate energy");
      k(i, j) = -problem.N * T(i, j) / den;
    }
  return O * k * O.transpose();
}

// ---------------------------------------------------------------------------------------------------
// Toy builders

namespace {

void symmetrize(InteractionTensor& W) {
  const int M = W.dim();
  InteractionTensor S(M);
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < M; ++q)
      for (int p = 0; p < M; ++p)
        for (int r = 0; r < M; ++r) {
          // Real basis: the orbit under particle exchange, (mq)↔(pr) and m↔p, q↔r.
          const double s = W(m, q, p, r) + W(q, m, r, p) + W(p, r, m, q) + W(r, p, q, m) + W(p, q, m, r) +
                           W(m, r, p, q) + W(q, p, r, m) + W(r, m, q, p);
          S(m, q, p, r) = s / 8.0;
        }
  W = std::move(S);
}

// Tensor from samples of the modes on n grid points with weight dv and the interaction kernel K(a, b).
InteractionTensor tensor_from_grid(const Eigen::MatrixXd& U, const Eigen::MatrixXd& K, double dv) {
  const auto M = static_cast<int>(U.cols());
  const Eigen::Index n = U.rows();
  std::vector<Eigen::VectorXd> rho, conv;
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < M; ++p) {
      rho.emplace_back(U.col(m).cwiseProduct(U.col(p)));
      conv.emplace_back(K * rho.back() * dv);
    }
  InteractionTensor W(M);
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < M; ++p)
      for (int q = 0; q < M; ++q)
        for (int r = 0; r < M; ++r)
          W(m, q, p, r) = conv[static_cast<std::size_t>(m * M + p)].dot(rho[static_cast<std::size_t>(q * M + r)]) * dv;
  (void)n;
  symmetrize(W);
  return W;
}

struct Wave {
  std::array<int, 3> n;
  int kind;  // 0 constant, 1 cos, 2 sin
};

// Half-space representatives with |n|² ≤ nmax2, ordered by |n|², each giving cos then sin.
std::vector<Wave> torus_waves(int dim, int nmax2) {
  std::vector<std::array<int, 3>> reps;
  const int R = static_cast<int>(std::floor(std::sqrt(nmax2)));
  for (int x = -R; x <= R; ++x)
    for (int y = (dim > 1 ? -R : 0); y <= (dim > 1 ? R : 0); ++y)
      for (int z = (dim > 2 ? -R : 0); z <= (dim > 2 ? R : 0); ++z) {
        const int n2 = x * x + y * y + z * z;
        if (n2 == 0 || n2 > nmax2) continue;
        const bool upper = z > 0 || (z == 0 && (y > 0 || (y == 0 && x > 0)));
        if (upper) reps.push_back({x, y, z});
      }
  std::stable_sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
    const int na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2], nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    return na != nb ? na < nb : a > b;
  });
  std::vector<Wave> out{{{0, 0, 0}, 0}};
  for (const auto& r : reps) {
    out.push_back({r, 1});
    out.push_back({r, 2});
  }
  return out;
}

ManyBodyProblem torus_problem(int dim, int M, int N, double coupling, double width, double L, int nmax2) {
  if (N < 1) throw ValidationError("particle number must be positive");
  if (!(width > 0.0) || !(L > 0.0)) throw ValidationError("width and length must be positive");
  const auto waves = torus_waves(dim, nmax2);
  if (M < 1 || M > static_cast<int>(waves.size()))
    throw ValidationError("torus basis supports 1 to " + std::to_string(waves.size()) + " modes");
  int nmax = 0;
  for (int m = 0; m < M; ++m)
    for (int d = 0; d < 3; ++d) nmax = std::max(nmax, std::abs(waves[static_cast<std::size_t>(m)].n[d]));
  // Four-fold products of the modes have frequencies ≤ 4 nmax per axis; G points integrate them exactly.
  const int G = 4 * nmax + 2;
  const int pts = dim == 1 ? G : G * G * G;
  const double two_pi_L = 2.0 * std::numbers::pi / L;
  const double vol = std::pow(L, dim);
  auto coord = [&](int a, int d) {
    if (dim == 1) return d == 0 ? a : 0;
    const int c[3] = {a % G, (a / G) % G, a / (G * G)};
    return c[d];
  };
  Eigen::MatrixXd U(pts, M);
  for (int a = 0; a < pts; ++a)
    for (int m = 0; m < M; ++m) {
      const Wave& w = waves[static_cast<std::size_t>(m)];
      double phase = 0.0;
      for (int d = 0; d < dim; ++d) phase += two_pi_L * w.n[d] * coord(a, d) * L / G;
      U(a, m) = w.kind == 0 ? 1.0 / std::sqrt(vol)
                            : std::sqrt(2.0 / vol) * (w.kind == 1 ? std::cos(phase) : std::sin(phase));
    }
  // Periodic V(x) = (1/vol) Σ V̂(k) cos(k·x), truncated to the band the densities can reach.
  const int band = 2 * nmax;
  const double scale = coupling / N;
  auto vhat = [&](double k2) { return scale * std::exp(-0.5 * width * width * k2); };
  std::vector<double> Vd(static_cast<std::size_t>(pts), 0.0);
  for (int a = 0; a < pts; ++a) {
    double s = 0.0;
    for (int x = -band; x <= band; ++x)
      for (int y = (dim > 1 ? -band : 0); y <= (dim > 1 ? band : 0); ++y)
        for (int z = (dim > 2 ? -band : 0); z <= (dim > 2 ? band : 0); ++z) {
          const int nv[3] = {x, y, z};
          double ph = 0.0, k2 = 0.0;
          for (int d = 0; d < dim; ++d) {
            ph += two_pi_L * nv[d] * coord(a, d) * L / G;
            k2 += std::pow(two_pi_L * nv[d], 2);
          }
          s += vhat(k2) * std::cos(ph);
        }
    Vd[static_cast<std::size_t>(a)] = s / vol;
  }
  Eigen::MatrixXd K(pts, pts);
  for (int a = 0; a < pts; ++a)
    for (int b = 0; b < pts; ++b) {
      int diff = 0;
      for (int d = dim - 1; d >= 0; --d) diff = diff * G + ((coord(a, d) - coord(b, d)) % G + G) % G;
      K(a, b) = Vd[static_cast<std::size_t>(diff)];
    }
  ManyBodyProblem p;
  p.N = N;
  p.coupling = coupling;
  p.basis = dim == 1 ? BasisKind::torus_1d : BasisKind::torus_3d;
  p.one_body = Eigen::MatrixXd::Zero(M, M);
  for (int m = 0; m < M; ++m) {
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) k2 += std::pow(two_pi_L * waves[static_cast<std::size_t>(m)].n[d], 2);
    p.one_body(m, m) = k2;
  }
  p.two_body = tensor_from_grid(U, K, vol / pts);
  p.condensate = Eigen::VectorXd::Unit(M, 0);
  p.validate();
  return p;
}

}  // namespace

ManyBodyProblem torus_1d_problem(int M, int N, double coupling, double width, double length) {
  return torus_problem(1, M, N, coupling, width, length, std::max(1, (M / 2) * (M / 2)));
}

ManyBodyProblem torus_3d_problem(int M, int N, double coupling, double width) {
  return torus_problem(3, M, N, coupling, width, 1.0, 2);
}

ManyBodyProblem oscillator_problem(int M, int N, double coupling, double width) {
  static const int quanta[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
                                    {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  if (M < 1 || M > 10) throw ValidationError("oscillator basis supports 1 to 10 modes");
  if (N < 1) throw ValidationError("particle number must be positive");
  if (!(width > 0.0)) throw ValidationError("width must be positive");
  // 1D Hermite functions of −d²/dx² + x² on a uniform grid; the Gaussian kernel factorizes per axis.
  const int n = 361;
  const double xmax = 9.0, dx = 2.0 * xmax / (n - 1);
  Eigen::MatrixXd h1(n, 3);
  for (int a = 0; a < n; ++a) {
    const double x = -xmax + a * dx, g = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    h1(a, 0) = g;
    h1(a, 1) = std::sqrt(2.0) * x * g;
    h1(a, 2) = (2.0 * x * x - 1.0) / std::sqrt(2.0) * g;
  }
  Eigen::MatrixXd K(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double d = (a - b) * dx;
      K(a, b) = std::exp(-0.5 * d * d / (width * width)) / std::sqrt(2.0 * std::numbers::pi * width * width);
    }
  // w1[a][c][b][e] = ∫∫ h_a h_c (x) K(x−y) h_b h_e (y).
  double w1[3][3][3][3];
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      const Eigen::VectorXd conv = K * h1.col(a).cwiseProduct(h1.col(c)) * dx;
      for (int b = 0; b < 3; ++b)
        for (int e = 0; e < 3; ++e) w1[a][c][b][e] = conv.dot(h1.col(b).cwiseProduct(h1.col(e))) * dx;
    }
  ManyBodyProblem p;
  p.N = N;
  p.coupling = coupling;
  p.basis = BasisKind::oscillator_modes;
  p.one_body = Eigen::MatrixXd::Zero(M, M);
  for (int m = 0; m < M; ++m) p.one_body(m, m) = 3.0 + 2.0 * (quanta[m][0] + quanta[m][1] + quanta[m][2]);
  p.two_body = InteractionTensor(M);
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < M; ++q)
      for (int pp = 0; pp < M; ++pp)
        for (int r = 0; r < M; ++r) {
          double w = coupling / N;
          for (int d = 0; d < 3; ++d) w *= w1[quanta[m][d]][quanta[pp][d]][quanta[q][d]][quanta[r][d]];
          p.two_body(m, q, pp, r) = w;
        }
  symmetrize(p.two_body);
  p.condensate = hartree_minimize(p).phi;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------------------------------
// Sandwich

SectorMixture project_to_sector(const ManyBodyProblem& problem, const QuasiFreePair& trial, const MixtureOptions& opt) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  const int M = problem.modes();
  if (M < 2) throw ValidationError("trial projection needs at least two modes");
  if (trial.dim() != M) throw ValidationError("trial pair lives on a different basis");
  const double scale = std::max(1.0, std::max(trial.gamma.norm(), trial.alpha.norm()));
  if ((trial.gamma * phi).norm() > 1e-10 * scale || (trial.alpha * phi).norm() > 1e-10 * scale)
    throw ValidationError("trial pair is not supported on the complement of the condensate");
  const Eigen::MatrixXd& O = AdaptedBasis(phi).matrix();
  const Eigen::MatrixXd g = (O.transpose() * trial.gamma * O).bottomRightCorner(M - 1, M - 1);
  const Eigen::MatrixXd a = (O.transpose() * trial.alpha * O).bottomRightCorner(M - 1, M - 1);
  const Mixture mix = truncated_mixture(QuasiFreePair::make(0.5 * (g + g.transpose()), 0.5 * (a + a.transpose())),
                                        problem.N, opt);
  SectorMixture out;
  for (const auto& c : mix.components) {
    Eigen::VectorXd psi = excitation_map_inverse(problem, {M - 1, problem.N, c.vector});
    out.mass += c.weight * psi.squaredNorm();
    out.weights.push_back(c.weight);
    out.vectors.push_back(std::move(psi));
  }
  return out;
}

double shifted_ground_energy(const ManyBodyProblem& problem, double c, const EdOptions& opt) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  ManyBodyProblem shifted = problem;
  const int M = problem.modes();
  shifted.one_body -= c * (Eigen::MatrixXd::Identity(M, M) - phi * phi.transpose());
  shifted.one_body = 0.5 * (shifted.one_body + shifted.one_body.transpose()).eval();
  EdOptions o = opt;
  o.nev = 1;
  return exact_diagonalize(shifted, o).energy;
}

SandwichReport sandwich(const ManyBodyProblem& problem, double gp_energy_analog, const QuasiFreePair& trial,
                        const SandwichOptions& opt) {
  const Eigen::VectorXd& phi = require_condensate(problem);
  SandwichReport r;
  r.gp_energy_analog = gp_energy_analog;
  r.C = opt.C;
  EdOptions ed = opt.ed;
  ed.nev = 1;
  r.E_N = exact_diagonalize(problem, ed).energy;

  const HamiltonianOperator H(problem, ed.max_dim);
  const SectorMixture mix = project_to_sector(problem, trial, opt.mixture);
  CompensatedSum e;
  for (std::size_t i = 0; i < mix.vectors.size(); ++i) e.add(mix.weights[i] * H.expectation(mix.vectors[i]));
  r.trial_mass = mix.mass;
  r.trace_defect = 1.0 - mix.mass;
  r.trial_energy = e.value() / mix.mass;
  r.wick_energy = wick_energy(trial, problem.one_body, problem.two_body, phi, problem.N).total;
  r.variational_holds = r.E_N <= r.trial_energy + opt.slack;

  const int M = problem.modes();
  const Eigen::MatrixXd& O = AdaptedBasis(phi).matrix();
  const Eigen::MatrixXd h = O.transpose() * problem.one_body * O;
  r.one_body_gap = M > 1 ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.bottomRightCorner(M - 1, M - 1))
                                   .eigenvalues()(0) -
                               h(0, 0)
                         : 0.0;

  const double target = problem.N * gp_energy_analog - opt.C;
  auto holds = [&](double c) { return shifted_ground_energy(problem, c, ed) >= target - opt.slack; };
  if (std::isfinite(opt.c)) {
    r.c_supplied = opt.c;
    r.lambda_at_c = shifted_ground_energy(problem, opt.c, ed);
    r.supplied_holds = r.lambda_at_c >= target - opt.slack;
  }
  if (holds(0.0)) {
    double lo = 0.0, hi = std::max(1.0, 2.0 * std::abs(r.one_body_gap));
    for (int i = 0; i < 60 && holds(hi); ++i) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > opt.bisection_tol * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    r.c_best = lo;
  }
  return r;
}

}  // namespace gpbog
