#include "gpbog/homogeneous_trial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpbog/errors.hpp"
#include "gpbog/numerics.hpp"
#include "gpbog/quadratic.hpp"
#include "gpbog/shell_table.hpp"
#include "gpbog/spectral_grid.hpp"

namespace gpbog {

namespace {
constexpr double kPi = std::numbers::pi;

// (4π/N)∫₀^{R0} V(s) F(s/N) s² ds = ∫ V_N(r) F(r) d³r.
struct RadialRule {
  std::vector<double> s, w;  // w includes 4π s² V(s)
};

RadialRule radial_rule(const ScatteringSolution& sol, int nodes) {
  RadialRule rr;
  const double R0 = sol.potential.R0;
  // Panels split at the tabulated kinks keep the rule exact enough for piecewise-linear V.
  std::vector<double> cuts{0.0, R0};
  if (sol.potential.kind == PotentialKind::tabulated)
    for (const auto& [r, v] : sol.potential.samples)
      if (r > 0.0 && r < R0) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  const int per = std::max(8, nodes / static_cast<int>(cuts.size() - 1));
  std::vector<double> x, w;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    gauss_legendre(per, cuts[c], cuts[c + 1], x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      rr.s.push_back(x[i]);
      rr.w.push_back(w[i] * 4 * kPi * x[i] * x[i] * sol.potential(x[i]));
    }
  }
  return rr;
}
}  // namespace

TorusTrial torus_trial(std::shared_ptr<const ScatteringSolution> scattering, double N, const TorusTrialOptions& opt) {
  if (!scattering) throw ValidationError("missing scattering solution");
  if (!(N > 0.0)) throw ValidationError("N must be positive");
  const ScatteringSolution& sol = *scattering;
  if (sol.potential.kind == PotentialKind::hard_sphere)
    throw DomainError("the trial energy needs a finite potential");
  TorusTrial out;
  if (sol.potential.integral() == 0.0) return out;

  const double q_cut = 2 * kPi * opt.cut_factor;  // cutoff in q = p/N
  const auto n_cut = static_cast<std::uint64_t>(std::floor(std::pow(opt.cut_factor * N, 2) * (1 + 1e-15)));
  const ShellTable table = ShellTable::cached(n_cut);
  const FourierTable ft(sol, q_cut * 1.001 + 0.02, 0.01);
  const RadialRule rr = radial_rule(sol, opt.radial_nodes);
  const std::size_t nr = rr.s.size();

  // k̂(p) = −N ω̂_N(p) = −(Vf)^(p/N)/(2p²); V̂_N(p) = V̂(p/N)/N.
  CompensatedSum t3, t4, tr_g, tr_g2, tr_a2;
  std::vector<CompensatedSum> gam(nr), alp(nr);
  for (std::uint64_t n = 1; n <= n_cut; ++n) {
    const std::uint32_t c = table.count(n);
    if (!c) continue;
    const double p = 2 * kPi * std::sqrt(static_cast<double>(n)), q = p / N;
    const double k = -ft.vf_hat(q) / (2 * p * p);
    const double g = k * k;
    t3.add(c * p * p * g);
    t4.add(c * k * ft.v_hat(q) / N);
    tr_g.add(c * g);
    tr_g2.add(c * g * g);
    tr_a2.add(c * k * k);
    for (std::size_t i = 0; i < nr; ++i) {
      const double sc = sinc(p * rr.s[i] / N);
      gam[i].add(c * g * sc);
      alp[i].add(c * k * sc);
    }
  }
  // Continuum tails beyond the cutoff, in q: ∫_{|p|>p_c} F(p) d³p/(2π)³ = N³/(2π²) ∫ F(Nq) q² dq.
  std::vector<double> gx, gw;
  gauss_legendre(8, -1.0, 1.0, gx, gw);
  const double q_end = q_cut + 400.0 / sol.potential.R0;
  const int panels = static_cast<int>(std::ceil((q_end - q_cut) / 0.1));
  const double hq = (q_end - q_cut) / panels;
  double tail_t3 = 0.0, tail_t4 = 0.0, tail_g = 0.0, tail_a2 = 0.0;
  std::vector<double> tail_gam(nr, 0.0), tail_alp(nr, 0.0);
  for (int pnl = 0; pnl < panels; ++pnl)
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const double q = q_cut + (pnl + 0.5 + 0.5 * gx[j]) * hq;
      const double wq = 0.5 * hq * gw[j] * N * N * N / (2 * kPi * kPi) * q * q;
      const double p = N * q;
      const double k = -sol.vf_hat(q) / (2 * p * p);
      tail_t3 += wq * p * p * k * k;
      tail_t4 += wq * k * sol.v_hat(q) / N;
      tail_g += wq * k * k;
      tail_a2 += wq * k * k;
      for (std::size_t i = 0; i < nr; ++i) {
        const double sc = sinc(q * rr.s[i]);
        tail_gam[i] += wq * k * k * sc;
        tail_alp[i] += wq * k * sc;
      }
    }

  const double int_v = sol.potential.integral();
  WickTerms& t = out.terms;
  t.condensate = 0.0;
  t.hartree = 0.5 * N * int_v;  // (N²/2)∫V_N
  t.one_body = t3.value() + tail_t3;
  t.pairing = N * (t4.value() + tail_t4);
  const double rho = tr_g.value() + tail_g;
  t.direct = rho * rho * int_v / N;
  CompensatedSum ex, ps;
  for (std::size_t i = 0; i < nr; ++i) {
    const double g = gam[i].value() + tail_gam[i], a = alp[i].value() + tail_alp[i];
    ex.add(rr.w[i] * g * g / N);
    ps.add(rr.w[i] * a * a / N);
  }
  t.exchange = ex.value();
  t.pair_square = ps.value();
  t.interaction = 0.5 * (t.direct + t.exchange + t.pair_square);
  t.total = t.condensate + t.hartree + t.one_body + t.pairing + t.interaction;
  out.trace_gamma = rho;
  out.number_second_moment = rho * rho + rho + tr_g2.value() + tr_a2.value() + tail_a2;
  return out;
}

namespace {

TrialRow trap_row(const GpState& state, const TrapPotential& trap, std::shared_ptr<const ScatteringSolution> scattering,
                  int M, double N) {
  const ScatteringSolution& sol = *scattering;
  const ScaledScattering sc(scattering, N);
  SpectralGrid g(trap.M, trap.box_length(), trap.box_origin());
  const double h = g.h();
  if (h > 1.0 / (2.0 * N))
    throw ResolutionError("grid spacing " + std::to_string(h) + " exceeds 1/(2N) = " + std::to_string(0.5 / N));
  if (M < 2 || M > 12) throw DomainError("trap trial basis size must be in [2, 12]");
  const Eigen::VectorXd phi = state.phi / g.norm(state.phi);
  const AssembledBasis ex = excitation_basis(state, trap, M - 1);
  Eigen::MatrixXd B(g.size(), M);
  B.col(0) = phi;
  B.rightCols(M - 1) = ex.vectors;
  const Eigen::VectorXd V = trap.sample();
  Eigen::MatrixXd AB(g.size(), M);
  Eigen::VectorXd tmp;
  for (int c = 0; c < M; ++c) {
    g.neg_laplacian(B.col(c), tmp);
    AB.col(c) = tmp + V.cwiseProduct(B.col(c));
  }
  Eigen::MatrixXd hmat = B.transpose() * AB * g.dV();
  hmat = 0.5 * (hmat + hmat.transpose()).eval();

  // ω_N truncated at half the box: ω̂_N(k) minus the analytic a/r tail beyond Rc.
  const double Rc = 0.5 * g.length();
  const double a = sol.a, R0 = sol.potential.R0;
  double inner0 = 0.0;  // ∫₀^{R0} ω(s) s² ds
  {
    std::vector<double> x, w;
    gauss_legendre(64, 0.0, R0, x, w);
    for (std::size_t i = 0; i < x.size(); ++i) inner0 += w[i] * sol.omega(x[i]) * x[i] * x[i];
  }
  const auto omega_mult = g.radial_multiplier([&](double k2) {
    if (k2 == 0.0) return 4 * kPi * (inner0 / (N * N * N) + a / N * (Rc * Rc - std::pow(R0 / N, 2)) / 2);
    const double q = std::sqrt(k2) / N;
    return (sol.omega_hat(q) - 4 * kPi * a / (q * q) * std::cos(q * N * Rc)) / (N * N * N);
  });
  const auto v_mult = g.radial_multiplier([&](double k2) { return sol.v_hat(std::sqrt(k2) / N) / N; });
  const auto vf_mult = g.radial_multiplier([&](double k2) { return sc.fourier_profile(std::sqrt(k2)); });

  const Eigen::MatrixXd PB = phi.asDiagonal() * B;
  Eigen::MatrixXd kmat(M, M);
  for (int j = 0; j < M; ++j) {
    g.fourier_multiply(PB.col(j), tmp, omega_mult);
    kmat.col(j) = -N * PB.transpose() * tmp * g.dV();
  }
  kmat = 0.5 * (kmat + kmat.transpose()).eval();
  InteractionTensor W(M);
  for (int n = 0; n < M; ++n)
    for (int q = n; q < M; ++q) {
      const Eigen::VectorXd pair_nq = B.col(n).cwiseProduct(B.col(q));
      g.fourier_multiply(pair_nq, tmp, v_mult);
      for (int m = 0; m < M; ++m)
        for (int p = 0; p < M; ++p) {
          const double w = B.col(m).cwiseProduct(B.col(p)).dot(tmp) * g.dV();
          W(m, n, p, q) = w;
          W(m, q, p, n) = w;
        }
    }
  // Restore exact index symmetry lost to rounding.
  InteractionTensor Ws(M);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < M; ++n)
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q)
          Ws(m, n, p, q) = 0.25 * (W(m, n, p, q) + W(n, m, q, p) + W(p, q, m, n) + W(q, p, n, m));

  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(M);
  e0(0) = 1.0;
  const QuasiFreePair pair = from_kernel({kmat, N}, e0);
  TrialRow row;
  row.N = N;
  row.terms = wick_energy(pair, hmat, Ws, e0, N);
  row.wick_energy = row.terms.total;
  row.trace_defect = number_moment(pair, 2) / (N * N);
  const Eigen::VectorXd rho = phi.cwiseAbs2();
  g.fourier_multiply(rho, tmp, vf_mult);
  row.young_lhs = 0.5 * N * N * rho.dot(tmp) * g.dV();
  const double int_phi4 = rho.squaredNorm() * g.dV();
  row.young_rhs = 0.5 * N * N * sc.integral_vf() * int_phi4;
  row.young_rhs_a = 4 * kPi * a * N * int_phi4;
  return row;
}

}  // namespace

TrialReport trial_upper_bound(const GpState& state, const TrapPotential& trap,
                              std::shared_ptr<const ScatteringSolution> scattering, int M,
                              const std::vector<double>& N_sweep, const TorusTrialOptions& opt) {
  if (!scattering) throw ValidationError("missing scattering solution");
  if (N_sweep.empty()) throw ValidationError("empty N sweep");
  if (std::abs(state.a - scattering->a) > 1e-6 * std::max(1.0, scattering->a))
    throw ValidationError("GP state and scattering solution have different scattering lengths");
  TrialReport rep;
  for (double N : N_sweep) {
    TrialRow row;
    if (state.a == 0.0) {
      row.N = N;
    } else if (trap.boundary == Boundary::periodic_torus) {
      const double h = trap.box_length() / trap.M;
      if (h > 1.0 / (2.0 * N))
        throw ResolutionError("grid spacing " + std::to_string(h) + " exceeds 1/(2N) = " + std::to_string(0.5 / N));
      const TorusTrial tt = torus_trial(scattering, N, opt);
      row.N = N;
      row.terms = tt.terms;
      row.wick_energy = tt.terms.total;
      row.trace_defect = tt.number_second_moment / (N * N);
      // φ ≡ 1: both Young sides reduce to (N/2)∫Vf.
      const double ivf = scattering->integrate_vf([](double) { return 1.0; });
      row.young_lhs = 0.5 * N * ivf;
      row.young_rhs = 0.5 * N * ivf;
      row.young_rhs_a = 4 * kPi * scattering->a * N;
    } else {
      row = trap_row(state, trap, scattering, M, N);
    }
    if (state.a == 0.0) {
      // The trial state is the bare condensate: its energy is N e_GP.
      row.wick_energy = N * state.e_gp;
    }
    row.n_e_gp = N * state.e_gp;
    row.defect = row.wick_energy - row.n_e_gp;
    row.young_holds = row.young_lhs <= row.young_rhs + 1e-10 * std::max(1.0, std::abs(row.young_rhs));
    rep.rows.push_back(row);
  }
  std::vector<double> x, y;
  for (const auto& r : rep.rows) {
    x.push_back(r.N);
    y.push_back(r.defect);
  }
  rep.defect_min = *std::min_element(y.begin(), y.end());
  rep.defect_max = *std::max_element(y.begin(), y.end());
  if (x.size() >= 2) {
    const LineFit fit = fit_line(x, y);
    rep.slope = fit.slope;
    rep.slope_stderr = fit.slope_stderr;
    rep.slope_nonpositive = fit.slope <= 2.0 * fit.slope_stderr;
  } else {
    rep.slope_nonpositive = true;
  }
  rep.young_all = std::all_of(rep.rows.begin(), rep.rows.end(), [](const TrialRow& r) { return r.young_holds; });
  return rep;
}

}  // namespace gpbog
