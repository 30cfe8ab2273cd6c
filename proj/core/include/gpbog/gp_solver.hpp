#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "gpbog/spectral_grid.hpp"

namespace gpbog {

enum class TrapKind { harmonic, quartic, tabulated_grid, zero_on_torus };
enum class Boundary { decaying_trap, periodic_torus };

std::string to_string(TrapKind kind);
std::string to_string(Boundary b);
TrapKind trap_kind_from_string(const std::string& name);

/// External potential on a periodic computational box.
///
/// harmonic: V = Σ c_i x_i² with coefficients (c_x, c_y, c_z).
/// quartic:  V = c4 |x|⁴ + c2 |x|² with coefficients (c4, c2).
/// tabulated_grid: M³ samples, row-major with x slowest.
/// zero_on_torus: V = 0 on the unit torus [0, 1)³.
struct TrapPotential {
  TrapKind kind = TrapKind::harmonic;
  std::vector<double> coefficients{1.0, 1.0, 1.0};
  double L = 8.0;  // box half-width; the torus ignores it
  int M = 64;
  Boundary boundary = Boundary::decaying_trap;
  std::vector<double> grid_values;

  static TrapPotential harmonic(double L = 8.0, int M = 64, std::vector<double> c = {1.0, 1.0, 1.0});
  static TrapPotential quartic(double L, int M, double c4 = 1.0, double c2 = 0.0);
  static TrapPotential torus(int M);
  static TrapPotential tabulated(double L, int M, std::vector<double> values);

  void validate() const;
  double box_length() const { return boundary == Boundary::periodic_torus ? 1.0 : 2.0 * L; }
  double box_origin() const { return boundary == Boundary::periodic_torus ? 0.0 : -L; }
  /// V sampled on the grid.
  Eigen::VectorXd sample() const;
  /// |∇V|² sampled on the grid (analytic where available, central differences otherwise).
  Eigen::VectorXd gradient_norm2() const;
  /// Upper bound on V over the box (for shifts in deflated eigensolves).
  double max_value() const;
};

struct GapReport {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double margin = 0.0;
  bool holds = false;
  double one_body_energy = 0.0;   // ∫|∇φ|² + V φ²
  double phi_inf2 = 0.0;          // ‖φ‖²_∞
  double lambda_perp = 0.0;       // inf over u ⊥ φ of ⟨u, (−Δ+V)u⟩
  bool smallness_condition = false;     // one_body_energy + 40πa‖φ‖²_∞ < lambda_perp
  double window_lo = 0.0;         // 16πa‖φ‖²_∞
  double window_hi = 0.0;         // mu2
};

struct GpState {
  TrapKind trap_kind = TrapKind::harmonic;
  Boundary boundary = Boundary::decaying_trap;
  int M = 0;
  double box_length = 0.0;
  double box_origin = 0.0;
  Eigen::VectorXd phi;
  double e_gp = 0.0;
  double mu = 0.0;
  double a = 0.0;
  double residual = 0.0;
  std::optional<GapReport> gap_report;
  std::vector<double> energy_history;
  int iterations = 0;

  double dV() const {
    const double h = box_length / M;
    return h * h * h;
  }
  double phi_max() const { return phi.size() ? phi.maxCoeff() : 0.0; }
  double integral_phi4() const { return phi.array().pow(4).sum() * dV(); }
};

struct GpOptions {
  int max_iterations = 2000;
  bool compute_gap = false;
};

/// Minimizes ∫|∇u|² + V|u|² + 4πa|u|⁴ over ‖u‖ = 1 on the trap's grid.
GpState minimize_gp(const TrapPotential& trap, double a, double tol = 1e-8, const GpOptions& opt = {});

/// GP energy functional on the trap's grid.
double gp_energy(const TrapPotential& trap, const Eigen::VectorXd& u, double a);

/// ‖(−Δ + V + 8πaφ² − μ)φ‖, recomputed from scratch.
double gp_residual(const GpState& state, const TrapPotential& trap);

/// inf over u ⊥ φ of ⟨u, (−Δ+V)u⟩ by a deflated Lanczos solve.
double perpendicular_ground_energy(const GpState& state, const TrapPotential& trap, double tol = 1e-9);

GapReport gap_check(const GpState& state, const TrapPotential& trap, double a);
/// Same, with a precomputed inf over the complement of φ.
GapReport gap_report_from(const GpState& state, const TrapPotential& trap, double a, double lambda_perp);

struct TrapAdmissibility {
  double C_fit = 0.0;
  bool satisfied = false;
};
TrapAdmissibility trap_admissibility(const TrapPotential& trap);

/// Largest a with a nonempty torus window 16πa‖φ‖²_∞ < μ < μ₂, by bisection.
double torus_window_boundary(int M = 16, double tol = 1e-9);

/// Eigenpairs of −Δ + V on the grid, lowest first (columns normalized in L²).
struct OneBodySpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
OneBodySpectrum one_body_spectrum(const TrapPotential& trap, int count, double tol = 1e-9);

}  // namespace gpbog
