#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gpbog/errors.hpp"
#include "gpbog/many_body.hpp"
#include "gpbog/numerics.hpp"
#include "oracles.hpp"

using namespace gpbog;
namespace {


// (φ·a*)^N/√N! |0⟩ in the occupation basis.
Eigen::VectorXd product_state(const FockSector& s, const Eigen::VectorXd& phi) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto occ = s.occupation(i);
    double lc = std::lgamma(s.particles() + 1.0), sign = 1.0;
    for (int m = 0; m < s.modes(); ++m) {
      lc -= std::lgamma(occ[m] + 1.0);
      if (occ[m] > 0) {
        if (phi(m) == 0.0) {
          sign = 0.0;
          break;
        }
        lc += 2.0 * occ[m] * std::log(std::abs(phi(m)));
        if (phi(m) < 0 && occ[m] % 2) sign = -sign;
      }
    }
    v(static_cast<Eigen::Index>(i)) = sign * std::exp(0.5 * lc);
  }
  return v;
}

Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v.normalized();
}

}  // namespace

TEST_CASE("Fock sector ranking") {
  const FockSector s(4, 5);
  CHECK(s.dim() == 56);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    CHECK(s.index(s.occupation(i)) == i);
    const auto o = s.occupation(i);
    CHECK(std::accumulate(o.begin(), o.end(), 0) == 5);
    if (i > 0) {
      const auto prev = s.occupation(i - 1);
      CHECK(std::lexicographical_compare(prev.begin(), prev.end(), o.begin(), o.end()));
    }
  }
  CHECK_THROWS_AS(FockSector::dimension(40, 40, 1'000'000), ResourceError);
}

TEST_CASE("ED agrees with the first-quantized oracle") {
  std::mt19937_64 rng(12);
  for (auto [M, N] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
    const auto p = testing::random_problem(M, N, rng);
    const auto r = exact_diagonalize(p);
    CHECK(std::abs(r.energy - testing::first_quantized_ground(p)) < 1e-10);
    CHECK(std::abs(r.gamma1.trace() - N) < 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.gamma1).eigenvalues()(0) > -1e-12);
  }
}

TEST_CASE("trivial spectra") {
  std::mt19937_64 rng(2);
  auto p = testing::random_problem(4, 1, rng);
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p.one_body).eigenvalues()(0);
  CHECK(exact_diagonalize(p).energy == doctest::Approx(lmin).epsilon(1e-12));
  p.N = 5;
  p.two_body = InteractionTensor(4);
  const auto r = exact_diagonalize(p);
  CHECK(r.energy == doctest::Approx(5 * lmin).epsilon(1e-11));
  const Eigen::VectorXd v = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p.one_body).eigenvectors().col(0);
  CHECK((r.gamma1 - 5.0 * v * v.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("matrix-free and assembled Hamiltonians agree") {
  std::mt19937_64 rng(4);
  const auto p = testing::random_problem(5, 4, rng);
  const HamiltonianOperator H(p);
  const Eigen::SparseMatrix<double> A = H.assemble();
  CHECK(Eigen::MatrixXd(A - Eigen::SparseMatrix<double>(A.transpose())).cwiseAbs().maxCoeff() < 1e-13);
  for (int t = 0; t < 3; ++t) {
    const Eigen::VectorXd x = random_unit(static_cast<Eigen::Index>(H.dim()), rng);
    Eigen::VectorXd y1, y2;
    H.apply(x, y1);
    H.apply(x, y2, 2);
    CHECK((y1 - A * x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
  }
  EdOptions free;
  free.assemble_below = 0;
  CHECK(exact_diagonalize(p, free).energy == doctest::Approx(exact_diagonalize(p).energy).epsilon(1e-10));
  CHECK(exact_diagonalize(p, free).matrix_free);
}

TEST_CASE("excitation map") {
  std::mt19937_64 rng(9);
  const auto p = testing::random_problem(4, 4, rng);
  const FockSector s(4, 4);
  const auto xi = excitation_map(p, product_state(s, p.condensate));
  CHECK(std::abs(xi.data(0) - 1.0) < 1e-12);
  CHECK(std::abs(xi.data.norm() - 1.0) < 1e-12);

  const Eigen::VectorXd a = random_unit(static_cast<Eigen::Index>(s.dim()), rng);
  const Eigen::VectorXd b = random_unit(static_cast<Eigen::Index>(s.dim()), rng);
  const auto xa = excitation_map(p, a), xb = excitation_map(p, b);
  CHECK(std::abs(a.dot(b) - xa.data.dot(xb.data)) < 1e-12);
  CHECK((excitation_map_inverse(p, xa) - a).cwiseAbs().maxCoeff() < 1e-12);
  double total = 0.0;
  for (double n : xa.layer_norms()) total += n * n;
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK_THROWS_AS(excitation_map(p, 2.0 * a), ValidationError);

  // Two modes, two particles, everything in the orthogonal mode.
  ManyBodyProblem q;
  q.one_body = Eigen::MatrixXd::Identity(2, 2);
  q.two_body = InteractionTensor(2);
  q.N = 2;
  const double th = 0.3;
  q.condensate = Eigen::Vector2d(std::cos(th), std::sin(th));
  const FockSector s2(2, 2);
  const auto perp = product_state(s2, Eigen::Vector2d(-std::sin(th), std::cos(th)));
  const auto x2 = excitation_map(q, perp);
  const auto norms = x2.layer_norms();
  CHECK(norms[0] < 1e-14);
  CHECK(norms[1] < 1e-14);
  CHECK(std::abs(norms[2] - 1.0) < 1e-14);
}

TEST_CASE("toy tensors against closed forms") {
  const double lam = 2.0, sigma = 0.1, L = 1.0;
  const int N = 4;
  const auto p = torus_1d_problem(5, N, lam, sigma, L);
  auto vhat = [&](double k) { return lam / N * std::exp(-0.5 * sigma * sigma * k * k); };
  CHECK(p.two_body(0, 0, 0, 0) == doctest::Approx(vhat(0) / L).epsilon(1e-12));
  for (int m = 1; m < 5; ++m) {
    const double k = 2 * std::numbers::pi * ((m + 1) / 2) / L;
    CHECK(p.one_body(m, m) == doctest::Approx(k * k).epsilon(1e-14));
    // Exchange with the constant mode: plane waves diagonalize the convolution.
    CHECK(p.two_body(m, 0, 0, m) == doctest::Approx(vhat(k) / L).epsilon(1e-12));
    CHECK(p.two_body(m, 0, m, 0) == doctest::Approx(vhat(0) / L).epsilon(1e-12));
  }
  const auto t3 = torus_3d_problem(7, 2, 1.0, 0.2);
  CHECK(t3.two_body(0, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  const auto osc = oscillator_problem(4, 3, 0.0);
  CHECK(osc.one_body(0, 0) == 3.0);
  CHECK(std::abs(std::abs(osc.condensate(0)) - 1.0) < 1e-12);
  // Single Gaussian mode: h₀² has variance ½, so ∫∫ h₀²(x) G_σ(x−y) h₀²(y) = (2π(1 + σ²))^{-1/2} per axis.
  const auto o1 = oscillator_problem(1, 1, 1.0, 0.5);
  CHECK(o1.two_body(0, 0, 0, 0) == doctest::Approx(std::pow(2.0 * std::numbers::pi * 1.25, -1.5)).epsilon(1e-10));
  CHECK_THROWS_AS(torus_3d_problem(20, 2, 1.0), ValidationError);
}

TEST_CASE("condensation report") {
  auto p = torus_1d_problem(5, 4, 0.0);
  const auto r0 = condensation_report(p, exact_diagonalize(p));
  CHECK(r0.depletion < 1e-12);

  // Depletion is second order in the coupling.
  std::vector<double> lam{0.2, 0.4, 0.8}, dep;
  for (double l : lam) {
    auto q = torus_1d_problem(5, 4, l);
    const auto r = condensation_report(q, exact_diagonalize(q));
    CHECK(r.depletion >= 0.0);
    dep.push_back(r.depletion);
  }
  CHECK(dep[0] < dep[1]);
  CHECK(dep[1] < dep[2]);
  const double slope = std::log(dep[1] / dep[0]) / std::log(2.0);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

  auto q = torus_1d_problem(5, 4, 0.8);
  EdOptions o;
  o.nev = 3;
  const auto r = exact_diagonalize(q, o);
  CHECK(r.energies(0) <= r.energies(1));
  for (int i = 0; i < 3; ++i) {
    const auto c = condensation_report(q, Eigen::VectorXd(r.states.col(i)), r.energy);
    CHECK(c.depletion >= 0.0);
    CHECK(c.excess_energy == doctest::Approx(r.energies(i) - r.energy).epsilon(1e-8));
  }
}

TEST_CASE("energy is monotone in a positive coupling") {
  double prev = -INFINITY;
  for (double l : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    // Fixed tensor shape: the builder scales V by λ/N at fixed N.
    const double e = exact_diagonalize(torus_1d_problem(5, 3, l)).energy;
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("Hartree analog") {
  const auto p = torus_1d_problem(5, 4, 1.5);
  const auto h = hartree_minimize(p);
  CHECK(std::abs(std::abs(h.phi(0)) - 1.0) < 1e-10);
  CHECK(h.energy_per_particle == doctest::Approx(hartree_energy(p)).epsilon(1e-12));
  const auto o = oscillator_problem(4, 3, 4.0);
  const auto ho = hartree_minimize(o);
  // Stationarity: (h + N J)φ = μφ.
  ManyBodyProblem probe = o;
  probe.condensate = ho.phi;
  CHECK(hartree_energy(probe) == doctest::Approx(ho.energy_per_particle).epsilon(1e-12));
  CHECK(ho.energy_per_particle >= 3.0);
}

TEST_CASE("sandwich without interaction") {
  auto p = torus_1d_problem(5, 4, 0.0);
  SandwichOptions opt;
  opt.c = 1.0;
  const auto r = sandwich(p, hartree_energy(p), QuasiFreePair::vacuum(5), opt);
  CHECK(r.E_N == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(r.trial_energy - r.E_N) < 1e-12);
  CHECK(std::abs(r.trace_defect) < 1e-14);
  CHECK(r.variational_holds);
  CHECK(r.supplied_holds);
  const double gap = 4 * std::numbers::pi * std::numbers::pi;
  CHECK(r.one_body_gap == doctest::Approx(gap).epsilon(1e-12));
  CHECK(r.c_best == doctest::Approx(gap).epsilon(1e-6));
}

TEST_CASE("sandwich on the weakly coupled toy torus") {
  const auto p = torus_1d_problem(5, 4, 1.0);
  const auto pair = from_kernel({toy_kernel(p), 4.0}, p.condensate);
  CHECK(admissible(pair).admissible);
  const double e = hartree_energy(p);
  SandwichOptions opt;
  opt.C = 1.0;
  const auto r = sandwich(p, e, pair, opt);
  MESSAGE("E_N " << r.E_N << " trial " << r.trial_energy << " wick " << r.wick_energy << " N e " << 4 * e
                 << " c_best " << r.c_best << " defect " << r.trace_defect);
  CHECK(r.variational_holds);
  CHECK(r.E_N <= r.trial_energy + 1e-8);
  CHECK(r.trial_energy < 4 * e);  // the pair correlations lower the energy below the product state
  CHECK(r.trace_defect >= 0.0);
  CHECK(r.trace_defect < 1e-3);
  CHECK(std::isfinite(r.c_best));
  CHECK(r.c_best > 0.0);
  // The bound at C is saturated at c_best.
  CHECK(shifted_ground_energy(p, r.c_best, {}) >= 4 * e - 1.0 - 1e-8);

  // A kernel that does not vanish on φ is rejected.
  CHECK_THROWS_AS(sandwich(p, e, QuasiFreePair::make(Eigen::MatrixXd::Identity(5, 5) * 0.1,
                                                     Eigen::MatrixXd::Zero(5, 5))),
                  ValidationError);
}

TEST_CASE("oscillator sandwich") {
  const auto p = oscillator_problem(4, 3, 3.0);
  const auto pair = from_kernel({toy_kernel(p), 3.0}, p.condensate);
  const auto r = sandwich(p, hartree_energy(p), pair);
  CHECK(r.variational_holds);
  CHECK(r.E_N <= 3 * hartree_energy(p) + 1e-10);
}

TEST_CASE("trace defect of the projected trial state decays fast") {
  std::vector<double> Ns, logd;
  for (int N : {2, 3, 4, 5, 6}) {
    const auto p = torus_1d_problem(3, N, 12.0);
    const auto pair = from_kernel({toy_kernel(p), static_cast<double>(N)}, p.condensate);
    const auto mix = project_to_sector(p, pair, {1e-16, 40});
    const double d = 1.0 - mix.mass;
    MESSAGE("N " << N << " defect " << d);
    REQUIRE(d > 0.0);
    Ns.push_back(std::log(N));
    logd.push_back(std::log(d));
  }
  const LineFit fit = fit_line(Ns, logd);
  CHECK(fit.slope < -3.0);
}
