#include "gpbog/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gpbog/errors.hpp"
#include "gpbog/numerics.hpp"

namespace gpbog {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kGaussPerInterval = 3;

double gaussian_width(double R0) { return R0 / 3.0; }

// d/dx sinc(x)
double sinc_prime(double x) {
  if (std::abs(x) < 1e-3) return -x / 3.0 + x * x * x / 30.0;
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}
}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::gaussian_truncated: return "gaussian_truncated";
    case PotentialKind::tabulated: return "tabulated";
    case PotentialKind::hard_sphere: return "hard_sphere";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "square_well") return PotentialKind::square_well;
  if (name == "gaussian_truncated") return PotentialKind::gaussian_truncated;
  if (name == "tabulated") return PotentialKind::tabulated;
  if (name == "hard_sphere") return PotentialKind::hard_sphere;
  throw ValidationError("unknown potential kind '" + name + "'");
}

RadialPotential RadialPotential::square_well(double V0, double R0) {
  RadialPotential p;
  p.kind = PotentialKind::square_well;
  p.V0 = V0;
  p.R0 = R0;
  return p;
}

RadialPotential RadialPotential::gaussian_truncated(double V0, double R0) {
  RadialPotential p = square_well(V0, R0);
  p.kind = PotentialKind::gaussian_truncated;
  return p;
}

RadialPotential RadialPotential::hard_sphere(double R0) {
  RadialPotential p;
  p.kind = PotentialKind::hard_sphere;
  p.R0 = R0;
  return p;
}

RadialPotential RadialPotential::tabulated(std::vector<std::pair<double, double>> samples) {
  RadialPotential p;
  p.kind = PotentialKind::tabulated;
  p.samples = std::move(samples);
  p.R0 = p.samples.empty() ? 0.0 : p.samples.back().first;
  p.V0 = 0.0;
  for (const auto& s : p.samples) p.V0 = std::max(p.V0, s.second);
  return p;
}

RadialPotential RadialPotential::read_table(std::istream& in) {
  std::vector<std::pair<double, double>> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double r, v;
    if (!(ls >> r)) continue;
    if (!(ls >> v)) throw ValidationError("potential table line " + std::to_string(lineno) + ": expected two columns");
    samples.emplace_back(r, v);
  }
  auto p = tabulated(std::move(samples));
  p.validate();
  return p;
}

RadialPotential RadialPotential::read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential table '" + path + "'");
  return read_table(in);
}

void RadialPotential::validate() const {
  if (!(R0 > 0.0) || !std::isfinite(R0)) throw ValidationError("potential range R0 must be positive and finite");
  switch (kind) {
    case PotentialKind::square_well:
    case PotentialKind::gaussian_truncated:
      if (V0 < 0.0 || !std::isfinite(V0)) throw ValidationError("negative or non-finite potential strength");
      break;
    case PotentialKind::hard_sphere:
      break;
    case PotentialKind::tabulated: {
      if (samples.size() < 2) throw ValidationError("tabulated potential needs at least two samples");
      if (samples.front().first != 0.0) throw ValidationError("tabulated potential must start at r = 0");
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].second < 0.0 || !std::isfinite(samples[i].second))
          throw ValidationError("negative potential sample at r = " + std::to_string(samples[i].first));
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
          throw ValidationError("tabulated radii must be strictly increasing");
      }
      break;
    }
  }
}

double RadialPotential::operator()(double r) const {
  if (r > R0) return 0.0;
  switch (kind) {
    case PotentialKind::square_well: return V0;
    case PotentialKind::gaussian_truncated: {
      const double s = r / gaussian_width(R0);
      return V0 * std::exp(-s * s);
    }
    case PotentialKind::tabulated: {
      auto it = std::upper_bound(samples.begin(), samples.end(), r,
                                 [](double x, const std::pair<double, double>& s) { return x < s.first; });
      if (it == samples.begin()) return samples.front().second;
      if (it == samples.end()) return samples.back().second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (r - lo.first) / (hi.first - lo.first);
      return lo.second + t * (hi.second - lo.second);
    }
    case PotentialKind::hard_sphere:
      throw DomainError("hard-sphere potential has no pointwise value");
  }
  return 0.0;
}

RadialPotential RadialPotential::scaled_strength(double lambda) const {
  RadialPotential p = *this;
  p.V0 *= lambda;
  for (auto& s : p.samples) s.second *= lambda;
  return p;
}

RadialPotential RadialPotential::scaled_range(double N) const {
  RadialPotential p = *this;
  p.R0 = R0 / N;
  p.V0 = V0 * N * N;
  for (auto& s : p.samples) {
    s.first /= N;
    s.second *= N * N;
  }
  return p;
}

double RadialPotential::integral() const {
  switch (kind) {
    case PotentialKind::square_well: return 4.0 / 3.0 * kPi * V0 * R0 * R0 * R0;
    case PotentialKind::gaussian_truncated: {
      const double w = gaussian_width(R0);
      const double x = R0 / w;  // = 3
      // 4π V0 w³ ∫₀^x s² e^{-s²} ds
      const double inner = 0.25 * std::sqrt(kPi) * std::erf(x) - 0.5 * x * std::exp(-x * x);
      return 4.0 * kPi * V0 * w * w * w * inner;
    }
    case PotentialKind::tabulated: {
      // piecewise-linear V times r², exact per segment
      double s = 0.0;
      for (std::size_t i = 1; i < samples.size(); ++i) {
        const double r0 = samples[i - 1].first, r1 = samples[i].first;
        const double v0 = samples[i - 1].second, v1 = samples[i].second;
        const double slope = (v1 - v0) / (r1 - r0);
        auto F = [&](double r) {
          const double c = v0 - slope * r0;
          return c * r * r * r / 3.0 + slope * r * r * r * r / 4.0;
        };
        s += F(r1) - F(r0);
      }
      return 4.0 * kPi * s;
    }
    case PotentialKind::hard_sphere:
      throw DomainError("hard-sphere potential is not integrable");
  }
  return 0.0;
}

double ScatteringSolution::f(double r) const {
  r = std::abs(r);
  if (r >= match_radius) return 1.0 - a / r;
  if (potential.kind == PotentialKind::hard_sphere) return 0.0;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(r / step), r_grid.size() - 2);
  const double ui = hermite(r, r_grid[i], r_grid[i + 1], u[i], u[i + 1], du[i], du[i + 1]);
  if (r < 1e-3 * step) return du[0];
  return ui / r;
}

double ScatteringSolution::vf_hat(double q) const {
  if (potential.kind == PotentialKind::hard_sphere) return 8.0 * kPi * a * sinc(q * potential.R0);
  return integrate_vf([q](double r) { return sinc(q * r); });
}

double ScatteringSolution::vf_hat_derivative(double q) const {
  if (potential.kind == PotentialKind::hard_sphere) {
    const double R = potential.R0;
    return 8.0 * kPi * a * R * sinc_prime(q * R);
  }
  return integrate_vf([q](double r) { return r * sinc_prime(q * r); });
}

double ScatteringSolution::v_hat(double q) const {
  if (potential.kind == PotentialKind::hard_sphere) throw DomainError("V^ undefined for hard spheres");
  double s = 0.0;
  for (std::size_t i = 0; i < node_r.size(); ++i) s += node_w[i] * node_v[i] * sinc(q * node_r[i]);
  return s;
}

double ScatteringSolution::vf_omega_hat(double q) const {
  if (potential.kind == PotentialKind::hard_sphere) throw DomainError("(Vfω)^ undefined for hard spheres");
  double s = 0.0;
  for (std::size_t i = 0; i < node_r.size(); ++i)
    s += node_w[i] * node_v[i] * node_f[i] * (1.0 - node_f[i]) * sinc(q * node_r[i]);
  return s;
}

double ScatteringSolution::omega_hat(double q) const {
  if (!(q > 0.0)) throw DomainError("omega_hat needs q > 0 (ω is not integrable)");
  // 4π/q [∫₀^R ω r sin(qr) dr + a cos(qR)/q], the tail taken in the Abel sense.
  const double R = match_radius;
  if (potential.kind == PotentialKind::hard_sphere) {
    const double inner = (std::sin(q * R) - q * R * std::cos(q * R)) / (q * q);
    return 4.0 * kPi / q * (inner + a * std::cos(q * R) / q);
  }
  double s = 0.0;
  const std::size_t m = support_index;
  std::vector<double> x, w;
  gauss_legendre(kGaussPerInterval + 2, 0.0, 1.0, x, w);
  for (std::size_t i = 0; i < m; ++i) {
    const double r0 = r_grid[i], r1 = r_grid[i + 1];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = r0 + (r1 - r0) * x[k];
      s += (r1 - r0) * w[k] * omega(r) * r * std::sin(q * r);
    }
  }
  return 4.0 * kPi / q * (s + a * std::cos(q * R) / q);
}

double ScatteringSolution::integral_vf_omega() const {
  if (potential.kind == PotentialKind::hard_sphere) throw DomainError("∫Vfω undefined for hard spheres");
  double s = 0.0;
  for (std::size_t i = 0; i < node_r.size(); ++i) s += node_w[i] * node_v[i] * node_f[i] * (1.0 - node_f[i]);
  return s;
}

double ScatteringSolution::integral_v_omega2() const {
  if (potential.kind == PotentialKind::hard_sphere) throw DomainError("∫Vω² undefined for hard spheres");
  double s = 0.0;
  for (std::size_t i = 0; i < node_r.size(); ++i) {
    const double w = 1.0 - node_f[i];
    s += node_w[i] * node_v[i] * w * w;
  }
  return s;
}

ScatteringSolution solve_scattering(const RadialPotential& potential, double r_max, std::size_t n_points) {
  potential.validate();
  if (n_points < 100) throw ValidationError("solve_scattering needs n_points >= 100");
  if (!(r_max > potential.R0))
    throw DomainError("potential support R0 = " + std::to_string(potential.R0) + " not inside r_max = " +
                      std::to_string(r_max));

  ScatteringSolution sol;
  sol.potential = potential;
  const double R0 = potential.R0;
  // R0 sits exactly on a node so the discontinuity at the support edge is resolved.
  const std::size_t m = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::llround(static_cast<double>(n_points - 1) * R0 / r_max)));
  const double h = R0 / static_cast<double>(m);
  const std::size_t total = std::max<std::size_t>(m + 4, static_cast<std::size_t>(std::ceil(r_max / h - 1e-9)));
  sol.step = h;
  sol.support_index = m;
  sol.r_grid.resize(total + 1);
  for (std::size_t i = 0; i <= total; ++i) sol.r_grid[i] = h * static_cast<double>(i);
  sol.r_grid[m] = R0;
  sol.u.assign(total + 1, 0.0);
  sol.du.assign(total + 1, 0.0);
  sol.match_radius = R0;

  if (potential.kind == PotentialKind::hard_sphere) {
    for (std::size_t i = m; i <= total; ++i) {
      sol.u[i] = sol.r_grid[i] - R0;
      sol.du[i] = 1.0;
    }
    sol.a = R0;
    // Kinetic form of 8πa: 2·4π∫|f'|²r² dr, grid part plus the exact tail R0²/r_end.
    std::vector<double> g(total - m + 1);
    for (std::size_t i = m; i <= total; ++i) {
      const double r = sol.r_grid[i];
      const double fp = (sol.du[i] * r - sol.u[i]) / (r * r);
      g[i - m] = fp * fp * r * r;
    }
    const double r_end = sol.r_grid[total];
    const double kinetic = simpson(g, h) + R0 * R0 / r_end;
    sol.a_quadrature = 2.0 * 4.0 * kPi * kinetic / (8.0 * kPi);
    sol.fitted_C = 0.0;
    for (std::size_t i = 0; i <= total; ++i)
      sol.fitted_C = std::max(sol.fitted_C, sol.omega(sol.r_grid[i]) * (sol.r_grid[i] + 1.0));
    return sol;
  }

  // RK4 for (u, u') with u'' = V u / 2; steps at or beyond R0 see V = 0.
  auto Vl = [&](double r, std::size_t step_index) { return step_index < m ? potential(std::min(r, R0)) : 0.0; };
  double uu = 0.0, vv = 1.0;
  sol.u[0] = 0.0;
  sol.du[0] = 1.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double r = sol.r_grid[i];
    const double v0 = Vl(r, i), vh = Vl(r + 0.5 * h, i), v1 = Vl(r + h, i);
    const double k1u = vv, k1v = 0.5 * v0 * uu;
    const double k2u = vv + 0.5 * h * k1v, k2v = 0.5 * vh * (uu + 0.5 * h * k1u);
    const double k3u = vv + 0.5 * h * k2v, k3v = 0.5 * vh * (uu + 0.5 * h * k2u);
    const double k4u = vv + h * k3v, k4v = 0.5 * v1 * (uu + h * k3u);
    uu += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    vv += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    sol.u[i + 1] = uu;
    sol.du[i + 1] = vv;
  }

  // Affine fit u = A (r - a) on [R0, r_end].
  std::vector<double> xs(sol.r_grid.begin() + static_cast<long>(m), sol.r_grid.end());
  std::vector<double> ys(sol.u.begin() + static_cast<long>(m), sol.u.end());
  const LineFit fit = fit_line(xs, ys);
  const double A = fit.slope;
  sol.a = -fit.intercept / A;
  for (std::size_t i = 0; i <= total; ++i) {
    sol.u[i] /= A;
    sol.du[i] /= A;
  }
  for (std::size_t i = m; i <= total; ++i) {
    sol.u[i] = sol.r_grid[i] - sol.a;
    sol.du[i] = 1.0;
  }

  // a_quadrature = (8π)⁻¹ 4π∫ V f r² dr = ½∫ V u r dr on the same grid.
  std::vector<double> g(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const double r = sol.r_grid[i];
    g[i] = (i == m ? potential(R0) : potential(r)) * sol.u[i] * r;
  }
  sol.a_quadrature = 0.5 * simpson(g, h);

  // Gauss nodes per grid interval inside the support, used by transforms.
  std::vector<double> gx, gw;
  gauss_legendre(kGaussPerInterval, 0.0, 1.0, gx, gw);
  sol.node_r.reserve(m * gx.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < gx.size(); ++k) {
      const double r = sol.r_grid[i] + h * gx[k];
      sol.node_r.push_back(r);
      sol.node_w.push_back(4.0 * kPi * h * gw[k] * r * r);
      sol.node_v.push_back(potential(r));
      const double ur = hermite(r, sol.r_grid[i], sol.r_grid[i + 1], sol.u[i], sol.u[i + 1], sol.du[i], sol.du[i + 1]);
      sol.node_f.push_back(ur / r);
    }
  }

  sol.fitted_C = 0.0;
  for (std::size_t i = 0; i <= total; ++i)
    sol.fitted_C = std::max(sol.fitted_C, sol.omega(sol.r_grid[i]) * (sol.r_grid[i] + 1.0));
  return sol;
}

ScaledScattering::ScaledScattering(std::shared_ptr<const ScatteringSolution> base, double N)
    : base_(std::move(base)), N_(N) {
  if (!base_) throw ValidationError("scale: null scattering solution");
  if (!(N >= 1.0)) throw DomainError("scale: N must be >= 1");
}

double ScaledScattering::V_N(double r) const { return N_ * N_ * base_->potential(N_ * r); }

double ScaledScattering::integral_vf() const {
  if (base_->potential.kind == PotentialKind::hard_sphere) return 8.0 * kPi * base_->a / N_;
  // Nodes of the scaled grid are r_k/N with weights scaled by N⁻³; V_N = N²V.
  double s = 0.0;
  const double w = N_ * N_ / (N_ * N_ * N_);
  for (std::size_t i = 0; i < base_->node_r.size(); ++i) s += w * base_->node_w[i] * base_->node_v[i] * base_->node_f[i];
  return s;
}

double ScaledScattering::fourier_profile(double p) const { return base_->vf_hat(p / N_) / N_; }

double ScaledScattering::omega_hat(double p) const { return base_->omega_hat(p / N_) / (N_ * N_ * N_); }

double ScaledScattering::integral_vf_omega() const { return base_->integral_vf_omega() / N_; }

double ScaledScattering::vf_omega_hat(double p) const { return base_->vf_omega_hat(p / N_) / N_; }

ScaledScattering scale(std::shared_ptr<const ScatteringSolution> solution, double N) {
  return ScaledScattering(std::move(solution), N);
}

FourierTable::FourierTable(const ScatteringSolution& sol, double q_max, double dq)
    : sol_(&sol), q_max_(q_max), dq_(dq) {
  const std::size_t n = static_cast<std::size_t>(std::ceil(q_max / dq)) + 2;
  vf_.resize(n);
  dvf_.resize(n);
  v_.resize(n);
  dv_.resize(n);
  const bool hard = sol.potential.kind == PotentialKind::hard_sphere;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = dq * static_cast<double>(i);
    vf_[i] = sol.vf_hat(q);
    dvf_[i] = sol.vf_hat_derivative(q);
    if (!hard) {
      double v = 0.0, dv = 0.0;
      for (std::size_t k = 0; k < sol.node_r.size(); ++k) {
        const double r = sol.node_r[k];
        v += sol.node_w[k] * sol.node_v[k] * sinc(q * r);
        dv += sol.node_w[k] * sol.node_v[k] * r * sinc_prime(q * r);
      }
      v_[i] = v;
      dv_[i] = dv;
    }
  }
}

double FourierTable::eval(const std::vector<double>& y, const std::vector<double>& dy, double q) const {
  if (q < 0.0) q = -q;
  const double t = q / dq_;
  std::size_t i = static_cast<std::size_t>(t);
  if (i + 1 >= y.size()) throw DomainError("FourierTable: q = " + std::to_string(q) + " beyond table range");
  const double q0 = dq_ * static_cast<double>(i);
  return hermite(q, q0, q0 + dq_, y[i], y[i + 1], dy[i], dy[i + 1]);
}

double FourierTable::vf_hat(double q) const { return eval(vf_, dvf_, q); }
double FourierTable::v_hat(double q) const {
  if (sol_->potential.kind == PotentialKind::hard_sphere) throw DomainError("V^ undefined for hard spheres");
  return eval(v_, dv_, q);
}

}  // namespace gpbog
