// One PASS/FAIL line per acceptance criterion. Tolerances and runtime budgets are pinned below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gpbog/errors.hpp"
#include "gpbog/gaussian_state.hpp"
#include "gpbog/gp_solver.hpp"
#include "gpbog/homogeneous.hpp"
#include "gpbog/homogeneous_trial.hpp"
#include "gpbog/many_body.hpp"
#include "gpbog/quadratic.hpp"
#include "gpbog/quasifree.hpp"
#include "gpbog/scattering.hpp"
#include "oracles.hpp"

using namespace gpbog;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

std::shared_ptr<const ScatteringSolution> solve_shared(const RadialPotential& v, double r_max, std::size_t n) {
  return std::make_shared<const ScatteringSolution>(solve_scattering(v, r_max, n));
}

double square_well_a(double V0, double R0) {
  const double k = std::sqrt(V0 / 2.0);
  return R0 - std::tanh(k * R0) / k;
}

void scattering_exactness(Outcome& o) {
  constexpr double tol_a = 1e-8, tol_quad = 1e-7;
  const auto hs = solve_scattering(RadialPotential::hard_sphere(1.0), 6.0, 2001);
  const auto sw = solve_scattering(RadialPotential::square_well(10.0, 1.0), 6.0, 3001);
  const double ref = 1.0 - std::tanh(std::sqrt(5.0)) / std::sqrt(5.0);
  const double e_hs = std::abs(hs.a - 1.0), e_sw = std::abs(sw.a - ref);
  const double q_hs = std::abs(hs.a - hs.a_quadrature), q_sw = std::abs(sw.a - sw.a_quadrature);
  o.detail << "|a_hs-1|=" << e_hs << " |a_sw-ref|=" << e_sw << " quad gaps " << q_hs << ", " << q_sw;
  o.require(e_hs <= tol_a, "hard sphere");
  o.require(e_sw <= tol_a, "square well");
  o.require(std::abs(ref - square_well_a(10.0, 1.0)) < 1e-15, "closed form");
  o.require(q_hs <= tol_quad && q_sw <= tol_quad, "quadrature agreement");
}

void scaling_identity(Outcome& o) {
  constexpr double tol = 1e-7;
  const auto sol = solve_shared(RadialPotential::square_well(10.0, 1.0), 6.0, 3001);
  double worst = 0.0;
  for (double N : {1.0, 10.0, 100.0}) {
    const double lhs = N * scale(sol, N).integral_vf();
    worst = std::max(worst, std::abs(lhs - 8.0 * pi * sol->a) / (8.0 * pi * sol->a));
  }
  o.detail << "max rel err " << worst;
  o.require(worst <= tol, "N int V_N f_N = 8 pi a");
}

void gp_references(Outcome& o) {
  constexpr double tol_harm = 5e-4, tol_torus = 1e-8, tol_flat = 1e-10, tol_res = 1e-8;
  const auto harm = TrapPotential::harmonic(8.0, 64);
  const GpState h = minimize_gp(harm, 0.0, 1e-10);
  const auto torus = TrapPotential::torus(16);
  const double a = 0.1;
  const GpState t = minimize_gp(torus, a, 1e-10);
  const double flat = (t.phi.array() - 1.0).abs().maxCoeff();
  const double res = std::max(gp_residual(h, harm), gp_residual(t, torus));
  o.detail << "e_harm=" << h.e_gp << " |e_torus-4pi a|=" << std::abs(t.e_gp - 4 * pi * a) << " max|phi-1|=" << flat
           << " residual=" << res;
  o.require(std::abs(h.e_gp - 3.0) <= tol_harm, "harmonic e_gp");
  o.require(std::abs(t.e_gp - 4 * pi * a) <= tol_torus, "torus e_gp");
  o.require(flat <= tol_flat, "torus phi");
  o.require(res <= tol_res, "residual");
}

void gap_certification(Outcome& o) {
  constexpr double a = 1e-3, tol_mu = 50.0 * a, min_margin = 1.9, tol_boundary = 1e-6;
  const auto trap = TrapPotential::harmonic(6.0, 32);
  const GpState st = minimize_gp(trap, a);
  const GapReport g = gap_check(st, trap, a);
  const double b = torus_window_boundary(8, 1e-10);
  o.detail << "mu1=" << g.mu1 << " mu2=" << g.mu2 << " margin=" << g.margin << " boundary-pi/6=" << b - pi / 6;
  o.require(g.holds, "gap");
  o.require(std::abs(g.mu1 - 3.0) <= tol_mu && std::abs(g.mu2 - 5.0) <= tol_mu, "mu near 3 and 5");
  o.require(g.margin > min_margin, "margin");
  o.require(std::abs(b - pi / 6) <= tol_boundary, "torus boundary");
}

void quadratic_vs_fock(Outcome& o) {
  constexpr double tol_fock = 1e-6, tol_diag = 1e-10;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> eps(1.0, 2.0);  // ‖K‖/λ_min(H) = 1/(1+ε) ≤ 0.5
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto qh = random_instance(1000 + i, dim(rng), eps(rng));
    if (qh.k_op / qh.lambda_min_H > 0.5 + 1e-12) o.require(false, "instance ratio");
    worst = std::max(worst, std::abs(ground_energy_exact(qh) - fock_exact_diag(qh, 16)));
  }
  double worst_diag = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 5;
    Eigen::VectorXd h(n), k(n);
    double ref = 0.0;
    for (int j = 0; j < n; ++j) {
      h(j) = 0.5 + 2.0 * u(rng);
      k(j) = (2.0 * u(rng) - 1.0) * 0.9 * h(j);
      ref += 0.5 * (std::sqrt(h(j) * h(j) - k(j) * k(j)) - h(j));
    }
    const auto qh = QuadraticHamiltonian::make(h.asDiagonal(), k.asDiagonal(), 0.1);
    worst_diag = std::max(worst_diag, std::abs(ground_energy_exact(qh) - ref));
  }
  o.detail << "max |exact-fock|=" << worst << " max diag err=" << worst_diag;
  o.require(worst <= tol_fock, "fock oracle");
  o.require(worst_diag <= tol_diag, "commuting closed form");
}

void lower_bound_fuzz(Outcome& o) {
  SweepOptions opt;
  opt.seed = 42;
  opt.n_instances = 1000;
  const SweepReport r = verify_theorem(opt);
  o.detail << "instances=" << r.rows.size() << " violations half/quarter=" << r.violations_half << "/"
           << r.violations_quarter << " fitted c_eps=" << r.fitted_c_eps << " buckets:";
  for (const auto& b : r.buckets) o.detail << " [" << b.lo << "," << b.hi << ") n=" << b.count << " c=" << b.max_c_eps;
  o.require(r.rows.size() == 1000, "instance count");
  o.require(r.violations_half == 0, "half bound");
  o.require(r.violations_quarter == 0, "quarter bound");
  o.require(std::isfinite(r.fitted_c_eps), "finite c_eps");
}

void sharpness(Outcome& o) {
  constexpr double lo = 0.99, hi = 1.01;
  Eigen::VectorXd h(4), k0(4);
  h << 1.0, 1.7, 2.5, 4.0;
  k0 << 1.0, -0.6, 0.8, 0.3;
  const double lambda = 0.05 * h.minCoeff() / k0.cwiseAbs().maxCoeff();
  const Eigen::MatrixXd K = lambda * Eigen::MatrixXd(k0.asDiagonal());
  const auto qh = QuadraticHamiltonian::make(h.asDiagonal(), K, 1.0 / 0.05 - 1.0);
  double trace = 0.0;
  for (int i = 0; i < 4; ++i) trace += k0(i) * k0(i) / h(i);
  const double ratio = ground_energy_exact(qh) / (-0.25 * lambda * lambda * trace);
  o.detail << "ratio=" << ratio;
  o.require(ratio >= lo && ratio <= hi, "ratio window");
}

void plancherel_defect(Outcome& o) {
  const auto sol = solve_shared(RadialPotential::square_well(2.0, 1.0), 6.0, 3001);
  const DefectReport r = plancherel_defect_sweep(sol, {50, 100, 200, 400, 800});
  o.detail << "a=" << sol->a << " slope=" << r.slope << "±" << r.slope_stderr << " defects:";
  for (const auto& row : r.rows) o.detail << " " << row.defect;
  o.require(sol->a < pi / 6, "a < pi/6");
  o.require(std::abs(r.slope) <= 2.0 * r.slope_stderr, "slope");
  o.require(r.max_abs_defect < 10.0 * std::abs(r.rows.front().defect), "bounded");
}

void quasifree_admissibility(Outcome& o) {
  constexpr double tol_det = 1e-10;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 5;
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd phi(n);
    for (int r = 0; r < n; ++r) {
      phi(r) = g(rng);
      for (int c = 0; c < n; ++c) A(r, c) = g(rng);
    }
    const Eigen::MatrixXd k = 0.3 * (A + A.transpose());
    ok += admissible(from_kernel({k, 10.0}, phi.normalized())).admissible ? 1 : 0;
  }
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2), alpha(2, 2);
  alpha << 0.0, 0.3, 0.3, 0.0;
  const auto bad = admissible(QuasiFreePair::make(zero, alpha));
  double worst_det = 0.0;
  for (double s : {0.1, 0.7, 2.0}) {
    const double gm = s * s, al = s * std::sqrt(1 + s * s);
    worst_det = std::max(worst_det, std::abs(gm * (1 + gm) - al * al));
  }
  o.detail << "admissible " << ok << "/100, gamma=0 rejected=" << !bad.admissible << " max |det|=" << worst_det;
  o.require(ok == 100, "from_kernel draws");
  o.require(!bad.admissible && bad.witness.size() > 0, "gamma=0 alpha!=0");
  o.require(worst_det <= tol_det, "saturation");
}

void wick_vs_fock(Outcome& o) {
  constexpr double tol = 1e-8;
  double worst = 0.0;
  for (double s : {0.2, 0.5, 1.0}) {
    const Eigen::VectorXd c = single_mode_squeezed(s, 60);
    double n2 = 0.0;
    for (int m = 0; m <= 60; ++m) n2 += c(m) * c(m) * 4.0 * m * m;
    Eigen::MatrixXd gm(1, 1), al(1, 1);
    gm << s * s;
    al << s * std::sqrt(1 + s * s);
    worst = std::max(worst, std::abs(number_moment(QuasiFreePair::make(gm, al), 2) - n2));
  }
  o.detail << "max |wick-fock|=" << worst;
  o.require(worst <= tol, "second moment");
}

void trial_trend(Outcome& o) {
  constexpr double tol_young = 1e-10;
  const auto sol = solve_shared(RadialPotential::square_well(2.0, 1.0), 6.0, 3001);
  const auto trap = TrapPotential::torus(64);
  const GpState st = minimize_gp(trap, sol->a);
  const TrialReport r = trial_upper_bound(st, trap, sol, 0, {8, 16, 32});
  bool young = true;
  o.detail << "slope=" << r.slope << "±" << r.slope_stderr << " defects:";
  for (const auto& row : r.rows) {
    o.detail << " " << row.defect;
    young = young && row.young_lhs <= row.young_rhs_a * (1.0 + tol_young);
  }
  o.require(r.slope_nonpositive, "slope");
  o.require(r.defect_max - r.defect_min <= std::abs(r.rows.front().defect), "range");
  o.require(young, "young ordering");
}

void ed_correctness(Outcome& o) {
  constexpr double tol_ed = 1e-10, tol_round = 1e-12, tol_trace = 1e-10, slack = 1e-8;
  std::mt19937_64 rng(99);
  const auto p = testing::random_problem(2, 2, rng);
  const auto r = exact_diagonalize(p);
  const double e_ed = std::abs(r.energy - testing::first_quantized_ground(p));
  const double e_trace = std::abs(r.gamma1.trace() - 2.0);

  // Generic condensate, so every Givens rotation in U_N is nontrivial.
  const auto generic = testing::random_problem(5, 4, rng);
  const FockSector sector(5, 4);
  std::normal_distribution<double> g;
  Eigen::VectorXd psi(static_cast<Eigen::Index>(sector.dim()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = g(rng);
  psi.normalize();
  const ExcitationVector xi = excitation_map(generic, psi);
  const double e_round = std::max((excitation_map_inverse(generic, xi) - psi).norm(), std::abs(xi.data.norm() - 1.0));

  const auto toy = torus_1d_problem(5, 4, 1.0);

  const auto pair = from_kernel({toy_kernel(toy), 4.0}, toy.condensate);
  const auto s = sandwich(toy, hartree_energy(toy), pair);
  o.detail << "|E-dense|=" << e_ed << " round trip=" << e_round << " |tr-N|=" << e_trace << " E_N=" << s.E_N
           << " trial=" << s.trial_energy;
  o.require(e_ed <= tol_ed, "dense oracle");
  o.require(e_round <= tol_round, "U_N round trip");
  o.require(e_trace <= tol_trace, "gamma trace");
  o.require(s.E_N <= s.trial_energy + slack, "variational sandwich");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "scattering exactness", 1.0, scattering_exactness},
      {2, "scaling identity", 1.0, scaling_identity},
      {3, "GP references", 120.0, gp_references},
      {4, "gap certification", 120.0, gap_certification},
      {5, "quadratic engine vs Fock oracle", 300.0, quadratic_vs_fock},
      {6, "lower bound fuzz", 120.0, lower_bound_fuzz},
      {7, "sharpness of -1/4", 1.0, sharpness},
      {8, "homogeneous Plancherel defect", 600.0, plancherel_defect},
      {9, "quasi-free admissibility", 10.0, quasifree_admissibility},
      {10, "Wick vs brute force", 5.0, wick_vs_fock},
      {11, "trial-state trend", 180.0, trial_trend},
      {12, "ED correctness", 120.0, ed_correctness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, "runtime budget");
    std::printf("criterion %2d %-34s %s (%.2f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
