#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "gpbog/errors.hpp"
#include "gpbog/homogeneous.hpp"
#include "gpbog/numerics.hpp"

using namespace gpbog;
namespace {
constexpr double kPi = std::numbers::pi;

std::shared_ptr<const ScatteringSolution> well(double V0) {
  return std::make_shared<const ScatteringSolution>(solve_scattering(RadialPotential::square_well(V0, 1.0), 6.0, 3001));
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "gpbog_test_shells";
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}
}  // namespace

TEST_CASE("shell counts match brute-force enumeration") {
  const int R = 20;  // p_cut = 40π
  const auto t = ShellTable::build(R * R);
  std::vector<std::uint32_t> brute(R * R + 1, 0);
  for (int x = -R; x <= R; ++x)
    for (int y = -R; y <= R; ++y)
      for (int z = -R; z <= R; ++z) {
        const int n = x * x + y * y + z * z;
        if (n <= R * R) ++brute[n];
      }
  for (int n = 0; n <= R * R; ++n) CHECK(t.count(n) == brute[n]);
  CHECK(t.count(1) == 6);
  CHECK(t.count(2) == 12);
  CHECK(t.count(3) == 8);
  CHECK(t.count(7) == 0);
  std::uint64_t ball = 0;
  for (int n = 1; n <= R * R; ++n) ball += brute[n];
  CHECK(t.points_up_to(R * R) == ball);
}

TEST_CASE("shell table cache round trip and corruption") {
  const auto dir = scratch_dir();
  const auto a = ShellTable::cached(500, dir);
  const auto file = dir / "shells_v1_500.bin";
  REQUIRE(std::filesystem::exists(file));
  const auto b = ShellTable::load(file);
  CHECK(a.counts() == b.counts());
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(ShellTable::load(file), ValidationError);
  CHECK(ShellTable::cached(500, dir).counts() == a.counts());  // rebuilt
  std::filesystem::remove_all(dir);
}

TEST_CASE("vanishing potential gives a vanishing sum") {
  const auto spec = TorusSumSpec::make(well(0.0), 10);
  const auto ls = bogoliubov_lattice_sum(spec);
  CHECK(ls.sum == 0.0);
  CHECK(plancherel_reference(spec).radial == doctest::Approx(0.0));
}

TEST_CASE("lattice sum input validation") {
  const auto sol = well(2.0);
  CHECK_THROWS_AS(TorusSumSpec::make(sol, 10, torus_mu_upper(sol->a) + 0.1), DomainError);
  CHECK_THROWS_AS(TorusSumSpec::make(sol, 10, -1.0), DomainError);
  CHECK_THROWS_AS(TorusSumSpec::make(sol, 10, std::nullopt, 8 * kPi * 5), DomainError);
  const auto s = TorusSumSpec::make(sol, 10);
  CHECK(s.mu == doctest::Approx(0.5 * (4 * kPi * kPi - 8 * kPi * sol->a)));
  CHECK(s.n_cut() == 1600);
}

TEST_CASE("sum tracks its quadratic-in-K expansion") {
  const auto sol = well(2.0);
  double prev_gap = 1.0;
  for (double N : {50.0, 100.0}) {
    const auto spec = TorusSumSpec::make(sol, N);
    const auto ls = bogoliubov_lattice_sum(spec);
    const auto& table = ShellTable::cached(spec.n_cut());
    // Independent term-by-term evaluation with direct transforms and no μ.
    CompensatedSum lead;
    for (std::uint64_t n = 1; n <= spec.n_cut(); ++n) {
      if (!table.count(n)) continue;
      const double p = 2 * kPi * std::sqrt(static_cast<double>(n));
      const double B = sol->vf_hat(p / N);
      lead.add(-static_cast<double>(table.count(n)) * B * B / (4 * p * p));
    }
    const double gap = std::abs(ls.shell_part / lead.value() - 1.0);
    CHECK(gap < 3.0 / N);  // O(1/N) correction from μ and the quartic terms
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("cutoff stability and mu dependence") {
  const auto sol = well(2.0);
  const auto s1 = TorusSumSpec::make(sol, 20);
  const auto s2 = TorusSumSpec::make(sol, 20, std::nullopt, 2 * s1.p_cut);
  const auto l1 = bogoliubov_lattice_sum(s1), l2 = bogoliubov_lattice_sum(s2);
  CHECK(std::abs(l1.shell_part - l2.shell_part) <= std::abs(l1.tail_estimate));
  CHECK(std::abs(l1.sum - l2.sum) < 0.05 * std::abs(l1.tail_estimate));

  const double hi = torus_mu_upper(sol->a);
  std::vector<double> spread;
  for (double N : {20.0, 40.0}) {
    const double lo_mu = bogoliubov_lattice_sum(TorusSumSpec::make(sol, N, 0.1 * hi)).sum;
    const double hi_mu = bogoliubov_lattice_sum(TorusSumSpec::make(sol, N, 0.9 * hi)).sum;
    spread.push_back(std::abs(hi_mu - lo_mu));
  }
  CHECK(spread[1] < 1.5 * spread[0] + 1e-3);
}

TEST_CASE("Plancherel forms agree") {
  const auto spec = TorusSumSpec::make(well(2.0), 100);
  const auto r = plancherel_reference(spec);
  CHECK(r.rel_diff < 1e-6);
  CHECK(r.radial == doctest::Approx(-0.5 * 100 * spec.scattering->integral_vf_omega()));
  // Linear in N.
  const auto r2 = plancherel_reference(TorusSumSpec::make(well(2.0), 200));
  CHECK(std::log(r2.radial / r.radial) / std::log(2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("defect stays bounded over a short sweep") {
  const auto rep = plancherel_defect_sweep(well(2.0), {25, 50, 100});
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.max_abs_defect < 1.0);
  for (const auto& r : rep.rows) CHECK(r.defect == doctest::Approx(r.sum - r.reference));
}

TEST_CASE("energy bound window") {
  // Square well tuned to a = π/8 through the closed form a = 1 − tanh(κ)/κ, κ = √(V0/2).
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi), k = std::sqrt(mid / 2);
    (1.0 - std::tanh(k) / k < kPi / 8 ? lo : hi) = mid;
  }
  const auto s8 = TorusSumSpec::make(well(0.5 * (lo + hi)), 4, 2.5 * kPi * kPi);
  REQUIRE(std::abs(s8.a() - kPi / 8) < 1e-7);
  const auto b = homogeneous_energy_bound(s8, bogoliubov_lattice_sum(s8));
  CHECK(b.n_plus_coeff == doctest::Approx(0.5 * kPi * kPi).epsilon(1e-6));
  CHECK(b.lower_const == doctest::Approx(4 * kPi * s8.a() * 4).epsilon(0.2));
  // V0 = 10 has a ≈ 0.563 > π/6.
  const auto big = TorusSumSpec::make(well(10.0), 4);
  CHECK_THROWS_AS(homogeneous_energy_bound(big, LatticeSum{}), DomainError);
  const auto tiny = TorusSumSpec::make(well(1e-6), 10, 1.0);
  const auto bt = homogeneous_energy_bound(tiny, bogoliubov_lattice_sum(tiny));
  CHECK(bt.lower_const == doctest::Approx(4 * kPi * tiny.a() * 10).epsilon(1e-4));
  CHECK(bt.n_plus_coeff == doctest::Approx(1.0).epsilon(1e-4));
}
