#include "gpbog/gp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpbog/errors.hpp"
#include "gpbog/lanczos.hpp"

namespace gpbog {

namespace {
constexpr double kPi = std::numbers::pi;

bool power_of_two(int m) { return m >= 4 && (m & (m - 1)) == 0; }

std::unique_ptr<SpectralGrid> make_grid(const TrapPotential& trap) {
  return std::make_unique<SpectralGrid>(trap.M, trap.box_length(), trap.box_origin());
}

Eigen::VectorXd initial_guess(const TrapPotential& trap, const SpectralGrid& g) {
  Eigen::VectorXd phi(g.size());
  if (trap.boundary == Boundary::periodic_torus) {
    phi.setOnes();
  } else {
    double w[3] = {1.0, 1.0, 1.0};
    if (trap.kind == TrapKind::harmonic)
      for (int d = 0; d < 3; ++d) w[d] = std::sqrt(std::max(trap.coefficients[d], 1e-6));
    for (int i = 0; i < g.M(); ++i)
      for (int j = 0; j < g.M(); ++j)
        for (int k = 0; k < g.M(); ++k) {
          const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
          phi(g.index(i, j, k)) = std::exp(-0.5 * (w[0] * x * x + w[1] * y * y + w[2] * z * z));
        }
  }
  return phi / g.norm(phi);
}

double energy_on(SpectralGrid& g, const Eigen::VectorXd& V, const Eigen::VectorXd& u, double a) {
  const double kin = g.kinetic(u);
  const Eigen::ArrayXd u2 = u.array().square();
  return kin + (V.array() * u2).sum() * g.dV() + 4.0 * kPi * a * (u2 * u2).sum() * g.dV();
}

void check_same_grid(const GpState& s, const TrapPotential& trap) {
  if (s.M != trap.M || std::abs(s.box_length - trap.box_length()) > 1e-12 ||
      std::abs(s.box_origin - trap.box_origin()) > 1e-12 || s.boundary != trap.boundary ||
      s.phi.size() != static_cast<Eigen::Index>(trap.M) * trap.M * trap.M)
    throw ValidationError("GP state and trap live on different grids");
}

// Flip to a non-negative representative; residual noise of either sign is removed.
void make_nonnegative(Eigen::VectorXd& phi) {
  if (phi.sum() < 0.0) phi = -phi;
  phi = phi.cwiseAbs();
}
}  // namespace

std::string to_string(TrapKind kind) {
  switch (kind) {
    case TrapKind::harmonic: return "harmonic";
    case TrapKind::quartic: return "quartic";
    case TrapKind::tabulated_grid: return "tabulated_grid";
    case TrapKind::zero_on_torus: return "zero_on_torus";
  }
  return "unknown";
}

std::string to_string(Boundary b) { return b == Boundary::periodic_torus ? "periodic_torus" : "decaying_trap"; }

TrapKind trap_kind_from_string(const std::string& name) {
  if (name == "harmonic") return TrapKind::harmonic;
  if (name == "quartic") return TrapKind::quartic;
  if (name == "tabulated_grid") return TrapKind::tabulated_grid;
  if (name == "zero_on_torus" || name == "torus") return TrapKind::zero_on_torus;
  throw ValidationError("unknown trap kind '" + name + "'");
}

TrapPotential TrapPotential::harmonic(double L, int M, std::vector<double> c) {
  TrapPotential t;
  t.kind = TrapKind::harmonic;
  t.coefficients = std::move(c);
  t.L = L;
  t.M = M;
  t.boundary = Boundary::decaying_trap;
  return t;
}

TrapPotential TrapPotential::quartic(double L, int M, double c4, double c2) {
  TrapPotential t = harmonic(L, M);
  t.kind = TrapKind::quartic;
  t.coefficients = {c4, c2};
  return t;
}

TrapPotential TrapPotential::torus(int M) {
  TrapPotential t;
  t.kind = TrapKind::zero_on_torus;
  t.coefficients.clear();
  t.L = 0.5;
  t.M = M;
  t.boundary = Boundary::periodic_torus;
  return t;
}

TrapPotential TrapPotential::tabulated(double L, int M, std::vector<double> values) {
  TrapPotential t = harmonic(L, M);
  t.kind = TrapKind::tabulated_grid;
  t.coefficients.clear();
  t.grid_values = std::move(values);
  return t;
}

void TrapPotential::validate() const {
  if (!power_of_two(M)) throw ValidationError("grid points per axis M must be a power of two >= 4");
  if (kind == TrapKind::zero_on_torus) {
    if (boundary != Boundary::periodic_torus) throw ValidationError("zero_on_torus requires periodic_torus boundary");
    return;
  }
  if (boundary != Boundary::decaying_trap) throw ValidationError("only zero_on_torus lives on the periodic torus");
  if (!(L > 0.0)) throw ValidationError("box half-width L must be positive");
  if (kind == TrapKind::harmonic && coefficients.size() != 3)
    throw ValidationError("harmonic trap needs three coefficients");
  if (kind == TrapKind::quartic && coefficients.size() != 2) throw ValidationError("quartic trap needs (c4, c2)");
  if (kind == TrapKind::tabulated_grid &&
      grid_values.size() != static_cast<std::size_t>(M) * static_cast<std::size_t>(M) * static_cast<std::size_t>(M))
    throw ValidationError("tabulated trap needs M³ values");
  const Eigen::VectorXd v = sample();
  if (!v.allFinite()) throw ValidationError("trap potential has non-finite samples");
  if (v.minCoeff() < 0.0) throw ValidationError("trap potential must be non-negative on the grid");
  // Grows toward the box boundary: boundary faces above the central value.
  const Eigen::Index center = (static_cast<Eigen::Index>(M / 2) * M + M / 2) * M + M / 2;
  double face_min = INFINITY;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) face_min = std::min(face_min, v((static_cast<Eigen::Index>(0) * M + i) * M + j));
  if (!(face_min > v(center))) throw ValidationError("decaying trap must grow toward the box boundary");
}

Eigen::VectorXd TrapPotential::sample() const {
  const Eigen::Index n = static_cast<Eigen::Index>(M) * M * M;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  if (kind == TrapKind::zero_on_torus) return v;
  if (kind == TrapKind::tabulated_grid) {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = grid_values[static_cast<std::size_t>(i)];
    return v;
  }
  const double h = box_length() / M, o = box_origin();
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) {
        const double x = o + h * i, y = o + h * j, z = o + h * k;
        double val;
        if (kind == TrapKind::harmonic) {
          val = coefficients[0] * x * x + coefficients[1] * y * y + coefficients[2] * z * z;
        } else {
          const double r2 = x * x + y * y + z * z;
          val = coefficients[0] * r2 * r2 + coefficients[1] * r2;
        }
        v((static_cast<Eigen::Index>(i) * M + j) * M + k) = val;
      }
  return v;
}

Eigen::VectorXd TrapPotential::gradient_norm2() const {
  const Eigen::Index n = static_cast<Eigen::Index>(M) * M * M;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  if (kind == TrapKind::zero_on_torus) return g;
  const double h = box_length() / M, o = box_origin();
  auto idx = [this](int i, int j, int k) { return (static_cast<Eigen::Index>(i) * M + j) * M + k; };
  if (kind == TrapKind::tabulated_grid) {
    const Eigen::VectorXd v = sample();
    auto d = [&](int i, int j, int k, int axis) {
      int lo[3] = {i, j, k}, hi[3] = {i, j, k};
      double span = 2.0 * h;
      lo[axis] -= 1;
      hi[axis] += 1;
      if (lo[axis] < 0) {
        lo[axis] = 0;
        span = h;
      }
      if (hi[axis] >= M) {
        hi[axis] = M - 1;
        span = h;
      }
      return (v(idx(hi[0], hi[1], hi[2])) - v(idx(lo[0], lo[1], lo[2]))) / span;
    };
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) {
          const double gx = d(i, j, k, 0), gy = d(i, j, k, 1), gz = d(i, j, k, 2);
          g(idx(i, j, k)) = gx * gx + gy * gy + gz * gz;
        }
    return g;
  }
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) {
        const double x = o + h * i, y = o + h * j, z = o + h * k;
        double val;
        if (kind == TrapKind::harmonic) {
          const double gx = 2 * coefficients[0] * x, gy = 2 * coefficients[1] * y, gz = 2 * coefficients[2] * z;
          val = gx * gx + gy * gy + gz * gz;
        } else {
          const double r2 = x * x + y * y + z * z;
          const double radial = 4 * coefficients[0] * r2 + 2 * coefficients[1];
          val = radial * radial * r2;
        }
        g(idx(i, j, k)) = val;
      }
  return g;
}

double TrapPotential::max_value() const { return sample().maxCoeff(); }

double gp_energy(const TrapPotential& trap, const Eigen::VectorXd& u, double a) {
  auto g = make_grid(trap);
  return energy_on(*g, trap.sample(), u, a);
}

GpState minimize_gp(const TrapPotential& trap, double a, double tol, const GpOptions& opt) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("scattering length must be non-negative");
  trap.validate();
  auto gp = make_grid(trap);
  SpectralGrid& g = *gp;
  const Eigen::VectorXd V = trap.sample();
  const double dV = g.dV();

  GpState s;
  s.trap_kind = trap.kind;
  s.boundary = trap.boundary;
  s.M = trap.M;
  s.box_length = trap.box_length();
  s.box_origin = trap.box_origin();
  s.a = a;

  Eigen::VectorXd phi = initial_guess(trap, g);
  const Eigen::Index n = g.size();
  // Far-field noise of the iterate scales with its residual and turns into
  // kinks when the sign is fixed at the end, so iterate well below tol.
  const double inner_tol = std::max(1e-3 * tol, 1e-13);

  if (a == 0.0) {
    // Linear problem: lowest eigenvector of −Δ + V.
    LinearOperator op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      g.neg_laplacian(x, y);
      y.array() += V.array() * x.array();
    };
    LanczosOptions lo;
    lo.tol = inner_tol;
    lo.krylov_dim = 60;
    lo.max_restarts = 2000;
    Eigen::VectorXd start = phi;
    auto res = lanczos_lowest(op, n, lo, &start);
    phi = res.vectors.col(0) / std::sqrt(dV);
    s.iterations = static_cast<int>(res.matvecs);
  } else {
    // Preconditioned Ritz iteration on the linearized operator with a monotone energy safeguard.
    Eigen::VectorXd Hphi(n), r(n), w(n), p, Hw(n), Hp(n), psi(n);
    double E = energy_on(g, V, phi, a);
    s.energy_history.push_back(E);
    int failures = 0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
      const Eigen::ArrayXd dens = V.array() + 8.0 * kPi * a * phi.array().square();
      auto applyH = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        g.neg_laplacian(x, y);
        y.array() += dens * x.array();
      };
      applyH(phi, Hphi);
      const double mu = g.inner(phi, Hphi);
      r = Hphi - mu * phi;
      if (g.norm(r) <= inner_tol) break;

      const double sigma = std::max(1.0, std::abs(mu));
      const auto prec = g.radial_multiplier([sigma](double k2) { return 1.0 / (k2 + sigma); });
      g.fourier_multiply(r, w, prec);

      std::vector<Eigen::VectorXd> basis{phi};
      std::vector<Eigen::VectorXd> hbasis{Hphi};
      auto add_direction = [&](Eigen::VectorXd d) {
        for (const auto& b : basis) d -= g.inner(b, d) * b;
        for (const auto& b : basis) d -= g.inner(b, d) * b;
        const double nd = g.norm(d);
        if (nd < 1e-13) return;
        d /= nd;
        Eigen::VectorXd hd(n);
        applyH(d, hd);
        basis.push_back(std::move(d));
        hbasis.push_back(std::move(hd));
      };
      add_direction(w);
      if (p.size() == n) add_direction(p);

      const int m = static_cast<int>(basis.size());
      Eigen::MatrixXd A(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = 0.5 * (g.inner(basis[i], hbasis[j]) + g.inner(basis[j], hbasis[i]));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      Eigen::VectorXd c = es.eigenvectors().col(0);
      if (c(0) < 0.0) c = -c;
      psi.setZero();
      for (int i = 0; i < m; ++i) psi += c(i) * basis[i];
      psi /= g.norm(psi);

      double Enew = energy_on(g, V, psi, a);
      const double slack = 1e-13 * std::max(1.0, std::abs(E));
      double t = 1.0;
      while (Enew > E + slack && t > 1e-6) {
        t *= 0.5;
        Eigen::VectorXd trial = phi + t * (psi - phi);
        trial /= g.norm(trial);
        Enew = energy_on(g, V, trial, a);
        if (Enew <= E + slack) psi = trial;
      }
      if (Enew > E + slack) {
        // Momentum made the step worse; retry without it, then give up.
        p.resize(0);
        if (++failures > 2) break;
        continue;
      }
      failures = 0;
      p = psi - phi;
      phi = psi;
      E = Enew;
      s.energy_history.push_back(E);
    }
    s.iterations = it;
  }

  const double lobe = std::min(0.0, (phi.sum() < 0.0 ? -phi : phi).minCoeff());
  make_nonnegative(phi);
  phi /= g.norm(phi);
  s.phi = phi;
  s.e_gp = energy_on(g, V, phi, a);
  {
    Eigen::VectorXd lap(n);
    g.neg_laplacian(phi, lap);
    const Eigen::ArrayXd p2 = phi.array().square();
    s.mu = g.inner(phi, lap) + (V.array() * p2).sum() * dV + 8.0 * kPi * a * (p2 * p2).sum() * dV;
  }
  if (s.energy_history.empty()) s.energy_history.push_back(s.e_gp);
  s.residual = gp_residual(s, trap);
  if (!(s.residual <= tol)) {
    std::string msg = "GP minimization did not reach the residual tolerance";
    if (lobe < -1e-12)
      msg += "; negative lobes of size " + std::to_string(-lobe) + " suggest the grid under-resolves the condensate";
    throw ConvergenceError(msg, s.residual);
  }
  if (opt.compute_gap) s.gap_report = gap_check(s, trap, a);
  return s;
}

double gp_residual(const GpState& state, const TrapPotential& trap) {
  check_same_grid(state, trap);
  auto gp = make_grid(trap);
  const Eigen::VectorXd V = trap.sample();
  Eigen::VectorXd out(state.phi.size());
  gp->neg_laplacian(state.phi, out);
  out.array() += (V.array() + 8.0 * kPi * state.a * state.phi.array().square() - state.mu) * state.phi.array();
  return gp->norm(out);
}

double perpendicular_ground_energy(const GpState& state, const TrapPotential& trap, double tol) {
  check_same_grid(state, trap);
  auto gp = make_grid(trap);
  SpectralGrid& g = *gp;
  const Eigen::VectorXd V = trap.sample();
  const Eigen::VectorXd phi = state.phi / g.norm(state.phi);
  const double dV = g.dV();
  const double kmax = *std::max_element(g.k2().begin(), g.k2().end());
  // Pushes φ itself to the top of the spectrum so the lowest Ritz value lives in Q's range.
  const double shift = kmax + V.maxCoeff() + 1.0;
  auto project = [&](Eigen::VectorXd& x) { x -= (phi.dot(x) * dV) * phi; };
  LinearOperator op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::VectorXd qx = x;
    project(qx);
    g.neg_laplacian(qx, y);
    y.array() += V.array() * qx.array();
    project(y);
    y += shift * (phi.dot(x) * dV) * phi;
  };
  Eigen::VectorXd start = default_start_vector(g.size());
  project(start);
  LanczosOptions lo;
  lo.tol = tol;
  lo.krylov_dim = 60;
  lo.max_restarts = 3000;
  auto res = lanczos_lowest(op, g.size(), lo, &start);
  return res.values(0);
}

GapReport gap_report_from(const GpState& state, const TrapPotential& trap, double a, double lambda_perp) {
  check_same_grid(state, trap);
  auto gp = make_grid(trap);
  const Eigen::VectorXd V = trap.sample();
  GapReport r;
  r.one_body_energy = gp->kinetic(state.phi) + (V.array() * state.phi.array().square()).sum() * gp->dV();
  const double pm = state.phi_max();
  r.phi_inf2 = pm * pm;
  r.lambda_perp = lambda_perp;
  r.mu1 = r.one_body_energy + 32.0 * kPi * a * r.phi_inf2;
  r.mu2 = lambda_perp - 8.0 * kPi * a * r.phi_inf2;
  r.margin = r.mu2 - r.mu1;
  r.smallness_condition = r.one_body_energy + 40.0 * kPi * a * r.phi_inf2 < lambda_perp;
  r.holds = r.mu1 < r.mu2 && r.smallness_condition;
  r.window_lo = 16.0 * kPi * a * r.phi_inf2;
  r.window_hi = r.mu2;
  return r;
}

GapReport gap_check(const GpState& state, const TrapPotential& trap, double a) {
  return gap_report_from(state, trap, a, perpendicular_ground_energy(state, trap));
}

TrapAdmissibility trap_admissibility(const TrapPotential& trap) {
  const Eigen::VectorXd v = trap.sample();
  const Eigen::VectorXd g2 = trap.gradient_norm2();
  TrapAdmissibility r;
  r.C_fit = (g2.array() - 2.0 * v.array().cube()).maxCoeff();
  r.satisfied = std::isfinite(r.C_fit);
  return r;
}

double torus_window_boundary(int M, double tol) {
  const TrapPotential trap = TrapPotential::torus(M);
  const GpState s0 = minimize_gp(trap, 0.0);
  const double lambda = perpendicular_ground_energy(s0, trap);
  auto nonempty = [&](double a) {
    const GpState s = minimize_gp(trap, a);
    const GapReport r = gap_report_from(s, trap, a, lambda);
    return r.window_lo < r.window_hi;
  };
  double lo = 0.0, hi = 1.0;
  if (nonempty(hi)) throw DomainError("torus window does not close below a = 1");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (nonempty(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OneBodySpectrum one_body_spectrum(const TrapPotential& trap, int count, double tol) {
  trap.validate();
  auto gp = make_grid(trap);
  SpectralGrid& g = *gp;
  const Eigen::VectorXd V = trap.sample();
  LinearOperator op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    g.neg_laplacian(x, y);
    y.array() += V.array() * x.array();
  };
  LanczosOptions lo;
  lo.nev = count;
  lo.krylov_dim = std::max(80, 2 * count + 40);
  lo.max_restarts = 4000;
  lo.tol = tol;
  auto res = lanczos_lowest(op, g.size(), lo);
  OneBodySpectrum out;
  out.values = res.values;
  out.vectors = res.vectors / std::sqrt(g.dV());
  return out;
}

}  // namespace gpbog
