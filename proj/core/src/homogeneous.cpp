#include "gpbog/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpbog/errors.hpp"
#include "gpbog/numerics.hpp"
#include "gpbog/thread_pool.hpp"

namespace gpbog {

namespace {
constexpr double kPi = std::numbers::pi;

// Panel Gauss-Legendre quadrature of g over [lo, hi].
template <class F>
double panels(F&& g, double lo, double hi, double width) {
  std::vector<double> x, w;
  gauss_legendre(8, -1.0, 1.0, x, w);
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  const double h = (hi - lo) / n;
  CompensatedSum s;
  for (int i = 0; i < n; ++i) {
    const double c = lo + (i + 0.5) * h;
    for (std::size_t k = 0; k < x.size(); ++k) s.add(0.5 * h * w[k] * g(c + 0.5 * h * x[k]));
  }
  return s.value();
}
}  // namespace

double torus_mu_upper(double a) { return 4 * kPi * kPi - 8 * kPi * a; }

std::uint64_t TorusSumSpec::n_cut() const {
  const double r = p_cut / (2 * kPi);
  auto n = static_cast<std::uint64_t>(std::floor(r * r * (1 + 1e-15)));
  return n;
}

void TorusSumSpec::validate() const {
  if (!scattering) throw ValidationError("missing scattering solution");
  if (!(N > 0.0) || !std::isfinite(N)) throw ValidationError("N must be positive");
  const double hi = torus_mu_upper(a());
  if (!(mu > 0.0 && mu < hi))
    throw DomainError("mu = " + std::to_string(mu) + " outside (0, 4π² − 8πa) = (0, " + std::to_string(hi) + ")");
  if (p_cut < 8 * kPi * N * (1 - 1e-12)) throw DomainError("p_cut below 4·N·2π");
}

TorusSumSpec TorusSumSpec::make(std::shared_ptr<const ScatteringSolution> scattering, double N, std::optional<double> mu,
                                std::optional<double> p_cut) {
  TorusSumSpec s;
  s.scattering = std::move(scattering);
  s.N = N;
  if (!s.scattering) throw ValidationError("missing scattering solution");
  s.mu = mu ? *mu : 0.5 * torus_mu_upper(s.scattering->a);
  s.p_cut = p_cut ? *p_cut : 8 * kPi * N;
  s.validate();
  return s;
}

double vf_hat_square_integral(const ScatteringSolution& sol, double q_lo) {
  const double R0 = sol.potential.R0 > 0 ? sol.potential.R0 : 1.0;
  const double period = 2 * kPi / R0;
  const double Q = std::max(q_lo, 0.0) + 400.0 / R0;
  auto g = [&](double q) {
    const double b = sol.vf_hat(q);
    return b * b;
  };
  const double width = std::min(0.25, period / 8);
  const double body = panels(g, q_lo, Q, width);
  // Envelope decays like q^{-s}; estimate s from two late windows one octave apart.
  const double late = panels(g, Q - period, Q, width);
  const double early = panels(g, Q / 2 - period, Q / 2, width);
  double tail = 0.0;
  if (late > 0.0 && early > late) {
    const double s = std::log2(early / late);
    if (s > 1.0) tail = late / period * Q / (s - 1.0);
  }
  return body + tail;
}

LatticeSum bogoliubov_lattice_sum(const TorusSumSpec& spec, const ShellTable* table, unsigned threads) {
  spec.validate();
  const std::uint64_t n_cut = spec.n_cut();
  ShellTable local;
  if (!table || table->n_max() < n_cut) {
    local = ShellTable::cached(n_cut);
    table = &local;
  }
  const ScatteringSolution& sol = *spec.scattering;
  const double N = spec.N, mu = spec.mu;
  LatticeSum out;
  if (sol.a == 0.0 && sol.potential.integral() == 0.0) return out;

  // N (f_N V_N)^(p) = (Vf)^(p/N); the table spans q ≤ p_cut/N.
  const FourierTable ft(sol, spec.p_cut / N * 1.001 + 0.02, 0.01);
  const auto& counts = table->counts();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(n_cut / 4096 + 1, 256));
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::uint64_t> bad(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * n_cut / chunks, hi = (c + 1) * n_cut / chunks;
    CompensatedSum s;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const std::uint32_t r = counts[n];
      if (r == 0) continue;
      const double p = 2 * kPi * std::sqrt(static_cast<double>(n));
      const double A = p * p - mu;
      const double B = ft.vf_hat(p / N);
      const double rad = A * A - B * B;
      if (rad < 0.0 || A <= 0.0) {
        bad[c] = n;
        return;
      }
      // A − √(A²−B²) without cancellation.
      s.add(-0.5 * r * (B * B) / (A + std::sqrt(rad)));
    }
    partial[c] = s.value();
  });
  for (std::size_t c = 0; c < chunks; ++c)
    if (bad[c])
      throw DomainError("negative radicand at shell |p/2π|² = " + std::to_string(bad[c]) + "; mu outside the valid window");
  CompensatedSum total;
  for (double v : partial) total.add(v);
  out.shell_part = total.value();
  for (std::uint64_t n = 1; n <= n_cut; ++n)
    if (counts[n]) {
      ++out.shells;
      out.points += counts[n];
    }
  // Beyond p_cut: −∫ B²/(4p²) d³p/(2π)³ = −(N/8π²) ∫_{p_cut/N}^∞ (Vf)^(q)² dq.
  out.tail_estimate = -N / (8 * kPi * kPi) * vf_hat_square_integral(sol, spec.p_cut / N);
  out.sum = out.shell_part + out.tail_estimate;
  return out;
}

PlancherelReference plancherel_reference(const TorusSumSpec& spec) {
  PlancherelReference r;
  const ScatteringSolution& sol = *spec.scattering;
  // ∫ V_N f_N ω_N = N⁻³ ∫ V f ω.
  r.radial = -0.5 * spec.N * sol.integral_vf_omega();
  r.continuum = -spec.N / (8 * kPi * kPi) * vf_hat_square_integral(sol, 0.0);
  const double scale = std::max(std::abs(r.radial), std::abs(r.continuum));
  r.rel_diff = scale > 0.0 ? std::abs(r.radial - r.continuum) / scale : 0.0;
  return r;
}

HomogeneousBound homogeneous_energy_bound(const TorusSumSpec& spec, const LatticeSum& sum) {
  const double a = spec.a();
  if (!(a < kPi / 6)) throw DomainError("a >= π/6: the window (16πa, 4π² − 8πa) is empty");
  if (!(spec.mu > 16 * kPi * a && spec.mu < torus_mu_upper(a)))
    throw DomainError("mu outside (16πa, 4π² − 8πa)");
  HomogeneousBound b;
  b.lower_const = 4 * kPi * a * spec.N + sum.sum - plancherel_reference(spec).radial;
  b.n_plus_coeff = spec.mu - 16 * kPi * a;
  return b;
}

DefectReport plancherel_defect_sweep(std::shared_ptr<const ScatteringSolution> scattering, const std::vector<double>& Ns,
                                     std::optional<double> mu, unsigned threads) {
  if (Ns.empty()) throw ValidationError("empty N sweep");
  DefectReport rep;
  const double N_max = *std::max_element(Ns.begin(), Ns.end());
  const TorusSumSpec big = TorusSumSpec::make(scattering, N_max, mu);
  const ShellTable table = ShellTable::cached(big.n_cut());
  for (double N : Ns) {
    const TorusSumSpec spec = TorusSumSpec::make(scattering, N, mu);
    const LatticeSum ls = bogoliubov_lattice_sum(spec, &table, threads);
    DefectRow row;
    row.N = N;
    row.sum = ls.sum;
    row.reference = plancherel_reference(spec).radial;
    row.defect = ls.sum - row.reference;
    row.tail_estimate = ls.tail_estimate;
    row.mu = spec.mu;
    rep.rows.push_back(row);
    rep.max_abs_defect = std::max(rep.max_abs_defect, std::abs(row.defect));
  }
  if (rep.rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& r : rep.rows) {
      x.push_back(r.N);
      y.push_back(r.defect);
    }
    const LineFit fit = fit_line(x, y);
    rep.slope = fit.slope;
    rep.slope_stderr = fit.slope_stderr;
    rep.slope_consistent_with_zero = std::abs(fit.slope) <= 2.0 * fit.slope_stderr;
  } else {
    rep.slope_consistent_with_zero = true;
  }
  rep.bounded = rep.max_abs_defect <= 10.0 * std::abs(rep.rows.front().defect);
  return rep;
}

}  // namespace gpbog
