#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpbog/errors.hpp"
#include "gpbog/gp_solver.hpp"
#include "gpbog/numerics.hpp"

using namespace gpbog;
namespace {
constexpr double kPi = std::numbers::pi;

Eigen::VectorXd oscillator_ground(const TrapPotential& t) {
  const int M = t.M;
  const double h = t.box_length() / M, o = t.box_origin();
  Eigen::VectorXd v(static_cast<Eigen::Index>(M) * M * M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) {
        const double x = o + h * i, y = o + h * j, z = o + h * k;
        v((static_cast<Eigen::Index>(i) * M + j) * M + k) = std::pow(kPi, -0.75) * std::exp(-0.5 * (x * x + y * y + z * z));
      }
  return v;
}
}  // namespace

TEST_CASE("harmonic oscillator ground state at a = 0") {
  const auto trap = TrapPotential::harmonic(6.0, 32);
  const GpState s = minimize_gp(trap, 0.0);
  CHECK(std::abs(s.e_gp - 3.0) < 1e-8);
  CHECK(std::abs(s.mu - 3.0) < 1e-8);
  CHECK(s.residual <= 1e-8);
  CHECK((s.phi - oscillator_ground(trap)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(s.phi.minCoeff() >= 0.0);
  CHECK(std::abs(s.phi.squaredNorm() * s.dV() - 1.0) < 1e-12);
}

TEST_CASE("gp_residual is an independent re-evaluation") {
  const auto trap = TrapPotential::harmonic(8.0, 64);
  GpState s;
  s.M = trap.M;
  s.box_length = trap.box_length();
  s.box_origin = trap.box_origin();
  s.phi = oscillator_ground(trap);
  s.mu = 3.0;
  CHECK(gp_residual(s, trap) < 1e-9);
  s.mu = 3.1;
  CHECK(gp_residual(s, trap) == doctest::Approx(0.1).epsilon(1e-8));

  const auto torus = TrapPotential::torus(8);
  GpState t;
  t.boundary = Boundary::periodic_torus;
  t.trap_kind = TrapKind::zero_on_torus;
  t.M = 8;
  t.box_length = 1.0;
  t.phi = Eigen::VectorXd::Ones(512);
  t.a = 0.2;
  t.mu = 8 * kPi * 0.2;
  CHECK(gp_residual(t, torus) < 1e-14);
  CHECK_THROWS_AS(gp_residual(t, trap), ValidationError);
}

TEST_CASE("torus condensate is constant with e_gp = 4πa") {
  for (double a : {0.01, 0.3}) {
    const auto trap = TrapPotential::torus(16);
    const GpState s = minimize_gp(trap, a);
    CHECK(std::abs(s.e_gp - 4 * kPi * a) < 1e-8);
    CHECK((s.phi.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(std::abs(s.mu - (s.e_gp + 4 * kPi * a * s.integral_phi4())) < 1e-10);
  }
}

TEST_CASE("first-order perturbation in a") {
  const auto trap = TrapPotential::harmonic(6.0, 32);
  const double slope_exact = 4 * kPi * std::pow(2 * kPi, -1.5);  // 4π∫φ₀⁴
  std::vector<double> as{1e-3, 2e-3, 4e-3}, es;
  for (double a : as) {
    const GpState s = minimize_gp(trap, a);
    CHECK(s.residual <= 1e-8);
    CHECK(std::abs(s.mu - (s.e_gp + 4 * kPi * a * s.integral_phi4())) < 1e-8);
    es.push_back(s.e_gp);
  }
  const auto fit = fit_line(as, es);
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(fit.slope == doctest::Approx(slope_exact).epsilon(1e-2));
}

TEST_CASE("energy history is monotone and e_gp(a) is concave non-decreasing") {
  const auto trap = TrapPotential::harmonic(6.0, 32);
  std::vector<double> es;
  for (double a : {0.0, 0.1, 0.2, 0.3}) {
    const GpState s = minimize_gp(trap, a);
    for (std::size_t i = 1; i < s.energy_history.size(); ++i)
      CHECK(s.energy_history[i] <= s.energy_history[i - 1] + 1e-12);
    es.push_back(s.e_gp);
  }
  for (std::size_t i = 1; i < es.size(); ++i) CHECK(es[i] >= es[i - 1]);
  for (std::size_t i = 1; i + 1 < es.size(); ++i) CHECK(es[i] - es[i - 1] >= es[i + 1] - es[i] - 1e-10);
}

TEST_CASE("anisotropic and quartic traps converge") {
  const GpState s = minimize_gp(TrapPotential::harmonic(8.0, 64, {1.0, 2.0, 0.5}), 0.5);
  CHECK(s.residual <= 1e-8);
  const GpState q = minimize_gp(TrapPotential::quartic(4.0, 32, 1.0, 0.0), 0.2);
  CHECK(q.residual <= 1e-8);
  CHECK(q.phi.minCoeff() >= 0.0);
}

TEST_CASE("grid refinement") {
  const GpState s32 = minimize_gp(TrapPotential::harmonic(6.0, 32), 0.2);
  const GpState s64 = minimize_gp(TrapPotential::harmonic(6.0, 64), 0.2);
  CHECK(std::abs(s32.e_gp - s64.e_gp) < 1e-6);
}

TEST_CASE("gap certification for the oscillator") {
  const auto trap = TrapPotential::harmonic(6.0, 32);
  const double a = 1e-3;
  const GpState s = minimize_gp(trap, a);
  const GapReport g = gap_check(s, trap, a);
  CHECK(g.lambda_perp == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(std::abs(g.mu1 - 3.0) < 0.1);
  CHECK(std::abs(g.mu2 - 5.0) < 0.1);
  CHECK(g.margin > 1.9);
  CHECK(g.holds);

  const GpState big = minimize_gp(trap, 1.0);
  const GapReport gb = gap_check(big, trap, 1.0);
  // Both sides of the smallness condition evaluated directly.
  const double lhs = gb.one_body_energy + 40 * kPi * 1.0 * big.phi_max() * big.phi_max();
  CHECK(lhs >= gb.lambda_perp);
  CHECK_FALSE(gb.holds);
}

TEST_CASE("torus window closes at a = π/6") {
  CHECK(std::abs(torus_window_boundary(8, 1e-10) - kPi / 6.0) < 1e-6);
  const auto trap = TrapPotential::torus(8);
  const double a = kPi / 8.0;
  const GpState s = minimize_gp(trap, a);
  const GapReport g = gap_check(s, trap, a);
  CHECK(g.window_lo == doctest::Approx(2 * kPi * kPi));
  CHECK(g.window_hi == doctest::Approx(3 * kPi * kPi));
}

TEST_CASE("trap admissibility") {
  const auto h = trap_admissibility(TrapPotential::harmonic(8.0, 64));
  const double t = std::sqrt(2.0 / 3.0);
  const double exact = 4 * t - 2 * t * t * t;
  CHECK(h.satisfied);
  CHECK(h.C_fit <= exact + 1e-12);
  CHECK(h.C_fit > exact - 0.05);
  CHECK(trap_admissibility(TrapPotential::torus(8)).C_fit == 0.0);
  CHECK(trap_admissibility(TrapPotential::quartic(4.0, 32)).satisfied);
  // Finite differences on a tabulated copy of the oscillator.
  const auto ht = TrapPotential::harmonic(6.0, 32);
  const Eigen::VectorXd hv = ht.sample();
  const auto tab = TrapPotential::tabulated(6.0, 32, std::vector<double>(hv.data(), hv.data() + hv.size()));
  CHECK(trap_admissibility(tab).C_fit == doctest::Approx(trap_admissibility(ht).C_fit).epsilon(0.2));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(minimize_gp(TrapPotential::harmonic(6.0, 32), -0.1), DomainError);
  CHECK_THROWS_AS(minimize_gp(TrapPotential::harmonic(8.0, 24), 0.1), ValidationError);
  auto flat = TrapPotential::tabulated(4.0, 8, std::vector<double>(512, 1.0));
  CHECK_THROWS_AS(flat.validate(), ValidationError);
}
