#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gpbog/errors.hpp"
#include "gpbog/fock.hpp"
#include "gpbog/gaussian_state.hpp"
#include "gpbog/homogeneous_trial.hpp"
#include "gpbog/quasifree.hpp"

using namespace gpbog;
namespace {
Eigen::MatrixXd random_sym(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  return scale * 0.5 * (A + A.transpose());
}

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v.normalized();
}

InteractionTensor random_tensor(int n, std::mt19937_64& rng) {
  // Built from real basis products so all index symmetries hold exactly.
  std::normal_distribution<double> g;
  InteractionTensor W(n);
  Eigen::MatrixXd C = random_sym(n * n, rng, 1.0);
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) W(m, q, p, r) = 0.0;
  // W(m,n,p,q) = S[(m,p),(n,q)] with S symmetric in each pair and in the pair swap.
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const int i1 = std::min(m, p) * n + std::max(m, p), i2 = std::min(a, b) * n + std::max(a, b);
          W(m, a, p, b) = C(i1, i2);
        }
  return W;
}

InteractionTensor rotate(const InteractionTensor& W, const Eigen::MatrixXd& O) {
  const int n = W.dim();
  InteractionTensor R(n);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int p = 0; p < n; ++p)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += O(i, m) * O(j, a) * O(k, p) * O(l, b) * W(i, j, k, l);
          R(m, a, p, b) = s;
        }
  return R;
}

QuasiFreePair random_pair(int n, std::mt19937_64& rng, double scale = 0.4) {
  return from_kernel({random_sym(n, rng, scale), 10.0}, random_unit(n, rng));
}
}  // namespace

TEST_CASE("admissibility of elementary pairs") {
  CHECK(admissible(QuasiFreePair::vacuum(3)).admissible);
  for (double s : {0.1, 0.7, 2.0}) {
    Eigen::MatrixXd g(1, 1), a(1, 1);
    g << s * s;
    a << s * std::sqrt(1 + s * s);
    const auto r = admissible(QuasiFreePair::make(g, a));
    CHECK(r.admissible);
    CHECK(std::abs(g(0, 0) * (1 + g(0, 0)) - a(0, 0) * a(0, 0)) <= 1e-10);
    CHECK(std::abs(r.min_eig_block) < 1e-10 * (1 + s * s));
  }
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2), a = z;
  a(0, 1) = a(1, 0) = 0.3;
  const auto bad = admissible(QuasiFreePair::make(z, a));
  CHECK_FALSE(bad.admissible);
  CHECK(bad.witness.size() == 4);
  CHECK_THROWS_AS(QuasiFreePair::make(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)), ValidationError);
}

TEST_CASE("from_kernel structure") {
  std::mt19937_64 rng(11);
  const Eigen::VectorXd phi = Eigen::VectorXd::Unit(4, 0);
  CHECK(from_kernel({Eigen::MatrixXd::Zero(4, 4), 5}, phi).gamma.norm() == 0.0);
  // Rank-one kernel orthogonal to φ.
  Eigen::VectorXd v(4);
  v << 0.0, 0.6, -0.3, 0.2;
  const Eigen::MatrixXd k = 0.8 * v * v.transpose();
  const auto p = from_kernel({k, 5}, phi);
  CHECK((p.alpha - k).norm() < 1e-14);
  CHECK((p.gamma - k * k).norm() < 1e-14);
  CHECK(admissible(p).admissible);
  for (int i = 0; i < 100; ++i) CHECK(admissible(random_pair(5, rng, 1.5)).admissible);
  CHECK_THROWS_AS(from_kernel({k, 5}, 2.0 * phi), ValidationError);
}

TEST_CASE("trace formulas match index-level Wick sums") {
  std::mt19937_64 rng(3);
  const auto p = random_pair(3, rng, 0.8);
  for (int ell = 1; ell <= 3; ++ell) {
    double brute = 0.0;
    std::vector<int> idx(ell, 0);
    const int total = static_cast<int>(std::pow(3, ell));
    for (int c = 0; c < total; ++c) {
      int r = c;
      std::vector<LadderOp> ops;
      for (int v = 0; v < ell; ++v) {
        ops.push_back({true, r % 3});
        ops.push_back({false, r % 3});
        r /= 3;
      }
      brute += wick_expectation(p, ops);
    }
    CHECK(number_moment(p, ell) == doctest::Approx(brute).epsilon(1e-12));
  }
  const double tg = p.trace_gamma;
  CHECK(number_moment(p, 2) ==
        doctest::Approx(tg * tg + tg + p.gamma.squaredNorm() + p.alpha.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("single-mode squeezed moments against the Fock expansion") {
  for (double s : {0.2, 0.5, 1.0}) {
    const Eigen::VectorXd c = single_mode_squeezed(s, 60);
    double n1 = 0, n2 = 0, n3 = 0, aa = 0, norm = 0;
    for (int m = 0; m <= 60; ++m) {
      const double w = c(m) * c(m), n = 2.0 * m;
      norm += w;
      n1 += w * n;
      n2 += w * n * n;
      n3 += w * n * n * n;
      if (m > 0) aa += c(m - 1) * c(m) * std::sqrt(n * (n - 1));  // ⟨a a⟩
    }
    CHECK(std::abs(norm - 1.0) < 1e-13);
    Eigen::MatrixXd g(1, 1), a(1, 1);
    g << s * s;
    a << s * std::sqrt(1 + s * s);
    const auto p = QuasiFreePair::make(g, a);
    CHECK(std::abs(n1 - s * s) < 1e-10);
    CHECK(std::abs(aa - a(0, 0)) < 1e-10);
    CHECK(std::abs(number_moment(p, 2) - n2) < 1e-8);
    CHECK(std::abs(2 * g(0, 0) * g(0, 0) + g(0, 0) + a(0, 0) * a(0, 0) - n2) < 1e-8);
    CHECK(std::abs(number_moment(p, 3) - n3) < 1e-7 * n3);
  }
}

TEST_CASE("Gaussian realization reproduces the density matrices") {
  std::mt19937_64 rng(21);
  const auto p = random_pair(3, rng, 0.2);  // mixed: γ = Qk²Q ≠ α²
  const Mixture mix = truncated_mixture(p, 22, {1e-14, 40});
  CHECK(mix.thermal_mass > 1.0 - 1e-12);
  const TruncatedFock space(3, 22);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3), a = g;
  double trace = 0.0;
  Eigen::VectorXd ti, tj;
  for (const auto& comp : mix.components) {
    trace += comp.weight * comp.vector.squaredNorm();
    for (int i = 0; i < 3; ++i) {
      space.apply_annihilate(i, comp.vector, ti);
      for (int j = 0; j < 3; ++j) {
        space.apply_annihilate(j, comp.vector, tj);
        g(i, j) += comp.weight * tj.dot(ti);  // ⟨a*_j a_i⟩
        Eigen::VectorXd tij;
        space.apply_annihilate(j, ti, tij);
        a(i, j) += comp.weight * comp.vector.dot(tij);  // ⟨a_j a_i⟩
      }
    }
  }
  CHECK(std::abs(trace - 1.0) < 1e-9);
  CHECK((g - p.gamma).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((a - p.alpha).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Wick energy structure") {
  std::mt19937_64 rng(5);
  const int n = 3;
  const auto W = random_tensor(n, rng);
  const Eigen::MatrixXd h = random_sym(n, rng, 1.0);
  const Eigen::VectorXd phi = random_unit(n, rng);
  const double N = 7.0;
  const auto vac = wick_energy(QuasiFreePair::vacuum(n), h, W, phi, N);
  double hartree = 0.0;
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) hartree += W(m, q, p, r) * phi(m) * phi(q) * phi(p) * phi(r);
  CHECK(vac.total == doctest::Approx(N * phi.dot(h * phi) + 0.5 * N * N * hartree).epsilon(1e-13));

  const auto pair = from_kernel({random_sym(n, rng, 0.3), N}, phi);
  const auto e = wick_energy(pair, h, W, phi, N);
  auto doubled = pair;
  doubled.alpha *= 2.0;
  CHECK(wick_energy(doubled, h, W, phi, N).pairing == doctest::Approx(2 * e.pairing).epsilon(1e-13));
  const auto corrected = wick_energy(pair, h, W, phi, N, {3.0});
  CHECK(corrected.interaction == doctest::Approx((1 + 3.0 / N) * e.interaction).epsilon(1e-13));

  // Common orthogonal change of basis.
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  const Eigen::MatrixXd O = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
  const auto rp = QuasiFreePair::make(O.transpose() * pair.gamma * O, O.transpose() * pair.alpha * O);
  const auto er = wick_energy(rp, O.transpose() * h * O, rotate(W, O), O.transpose() * phi, N);
  CHECK(std::abs(er.total - e.total) < 1e-10);

  InteractionTensor bad = W;
  bad(0, 1, 2, 0) += 1.0;
  CHECK_THROWS_AS(wick_energy(pair, h, bad, phi, N), ValidationError);
}

TEST_CASE("moment bounds") {
  const auto v = moment_bound_check(QuasiFreePair::vacuum(2), 2);
  CHECK(v.moment == 0.0);
  CHECK(v.holds);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_pair(4, rng, 1.0);
    CHECK(moment_bound_check(p, 2).holds);
    CHECK(moment_bound_check(p, 3).holds);
  }
  CHECK_THROWS_AS(moment_bound_check(QuasiFreePair::vacuum(1), 4), DomainError);
}

TEST_CASE("torus trial defect and Young ordering") {
  const auto sol =
      std::make_shared<const ScatteringSolution>(solve_scattering(RadialPotential::square_well(2.0, 1.0), 6.0, 3001));
  const auto trap = TrapPotential::torus(32);
  const GpState st = minimize_gp(trap, sol->a);
  const auto rep = trial_upper_bound(st, trap, sol, 0, {4, 8, 16});
  for (const auto& r : rep.rows) {
    CHECK(r.young_holds);
    CHECK(std::abs(r.young_rhs_a - r.young_rhs) < 1e-7 * r.young_rhs);
    CHECK(r.trace_defect < 0.05);
    CHECK(std::abs(r.defect) < 5.0);
  }
  CHECK(rep.slope_nonpositive);
  CHECK_THROWS_AS(trial_upper_bound(st, trap, sol, 0, {17}), ResolutionError);

  const auto zero =
      std::make_shared<const ScatteringSolution>(solve_scattering(RadialPotential::square_well(0.0, 1.0), 4.0, 400));
  const GpState free = minimize_gp(trap, 0.0);
  const auto r0 = trial_upper_bound(free, trap, zero, 0, {4, 8});
  for (const auto& r : r0.rows) CHECK(r.defect == 0.0);
}

TEST_CASE("trap trial on a coarse basis") {
  const auto sol =
      std::make_shared<const ScatteringSolution>(solve_scattering(RadialPotential::square_well(0.06, 1.0), 6.0, 3001));
  const auto trap = TrapPotential::harmonic(6.0, 32);
  const GpState st = minimize_gp(trap, sol->a);
  const auto rep = trial_upper_bound(st, trap, sol, 4, {1.0});
  REQUIRE(rep.rows.size() == 1);
  const auto& r = rep.rows[0];
  CHECK(r.young_holds);
  CHECK(std::isfinite(r.wick_energy));
  CHECK(std::abs(r.defect) < 0.5);
}
