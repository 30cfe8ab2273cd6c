#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gpbog {

enum class PotentialKind { square_well, gaussian_truncated, tabulated, hard_sphere };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Compactly supported, radial, non-negative two-body interaction V(r).
struct RadialPotential {
  PotentialKind kind = PotentialKind::square_well;
  double V0 = 0.0;  // strength (square well height, Gaussian peak)
  double R0 = 1.0;  // support radius
  std::vector<std::pair<double, double>> samples;  // (r, V) for tabulated

  static RadialPotential square_well(double V0, double R0);
  static RadialPotential gaussian_truncated(double V0, double R0);
  static RadialPotential hard_sphere(double R0);
  /// Piecewise-linear table; support ends at the last sample.
  static RadialPotential tabulated(std::vector<std::pair<double, double>> samples);
  /// Two-column text (r V), '#' starts a comment.
  static RadialPotential read_table(std::istream& in);
  static RadialPotential read_table_file(const std::string& path);

  /// Throws ValidationError / DomainError on malformed input.
  void validate() const;
  /// V(r); for r == R0 the interior value, zero for r > R0. Not defined for hard spheres.
  double operator()(double r) const;
  /// λ·V as a new potential (tables are rescaled sample-wise).
  RadialPotential scaled_strength(double lambda) const;
  /// N²V(N r) with support R0/N.
  RadialPotential scaled_range(double N) const;
  /// 4π∫V r² dr computed analytically where possible.
  double integral() const;
};

/// Zero-energy scattering solution u(r) = r f(r).
class ScatteringSolution {
 public:
  RadialPotential potential;
  std::vector<double> r_grid;
  std::vector<double> u;
  std::vector<double> du;  // u'(r) on r_grid
  double a = 0.0;
  double a_quadrature = 0.0;
  double match_radius = 0.0;
  double step = 0.0;         // uniform grid spacing
  std::size_t support_index = 0;  // r_grid[support_index] == R0
  double fitted_C = 0.0;     // max over the grid of ω(r)(r+1)

  double f(double r) const;
  double omega(double r) const { return 1.0 - f(r); }

  /// 4π∫₀^R0 g(r) r² dr with g = V·f·kernel; `kernel(r)` may be any smooth weight.
  template <class Kernel>
  double integrate_vf(Kernel&& kernel) const;

  /// (Vf)^(q) = 4π∫V f sin(qr)/(qr) r² dr and its q-derivative.
  double vf_hat(double q) const;
  double vf_hat_derivative(double q) const;
  /// V^(q), the bare potential.
  double v_hat(double q) const;
  /// (V f ω)^(q).
  double vf_omega_hat(double q) const;
  /// ω^(q) including the analytic a/r tail.
  double omega_hat(double q) const;
  /// 4π∫V f ω r² dr.
  double integral_vf_omega() const;
  /// 4π∫V ω² r² dr.
  double integral_v_omega2() const;

  // Gauss nodes over [0, R0] aligned with the radial grid; filled by the solver.
  std::vector<double> node_r, node_w, node_v, node_f;
};

/// Solves u'' = V u / 2 with u(0) = 0 and normalizes to u = r - a beyond R0.
ScatteringSolution solve_scattering(const RadialPotential& potential, double r_max, std::size_t n_points);

/// f_N(x) = f(N|x|), ω_N = 1 - f_N, V_N(x) = N²V(N|x|).
class ScaledScattering {
 public:
  ScaledScattering(std::shared_ptr<const ScatteringSolution> base, double N);

  double N() const { return N_; }
  const ScatteringSolution& base() const { return *base_; }
  std::shared_ptr<const ScatteringSolution> base_ptr() const { return base_; }
  double a() const { return base_->a; }

  double f_N(double r) const { return base_->f(N_ * r); }
  double omega_N(double r) const { return base_->omega(N_ * r); }
  double V_N(double r) const;
  double support() const { return base_->potential.R0 / N_; }

  /// ∫_{R³} V_N f_N by Gauss quadrature on the scaled grid.
  double integral_vf() const;
  /// (V_N f_N)^(p).
  double fourier_profile(double p) const;
  /// (ω_N)^(p) for p > 0.
  double omega_hat(double p) const;
  /// ∫_{R³} V_N f_N ω_N.
  double integral_vf_omega() const;
  /// (V_N f_N ω_N)^(p).
  double vf_omega_hat(double p) const;

 private:
  std::shared_ptr<const ScatteringSolution> base_;
  double N_;
};

ScaledScattering scale(std::shared_ptr<const ScatteringSolution> solution, double N);

/// Tabulated q ↦ (Vf)^(q) and V^(q) on [0, q_max] with cubic Hermite interpolation.
class FourierTable {
 public:
  FourierTable(const ScatteringSolution& sol, double q_max, double dq);
  double vf_hat(double q) const;
  double v_hat(double q) const;
  double q_max() const { return q_max_; }

 private:
  double eval(const std::vector<double>& y, const std::vector<double>& dy, double q) const;
  const ScatteringSolution* sol_;
  double q_max_, dq_;
  std::vector<double> vf_, dvf_, v_, dv_;
};

template <class Kernel>
double ScatteringSolution::integrate_vf(Kernel&& kernel) const {
  double s = 0.0;
  for (std::size_t i = 0; i < node_r.size(); ++i) s += node_w[i] * node_v[i] * node_f[i] * kernel(node_r[i]);
  return s;
}

}  // namespace gpbog
