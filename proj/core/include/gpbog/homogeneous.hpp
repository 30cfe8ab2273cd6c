#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gpbog/scattering.hpp"
#include "gpbog/shell_table.hpp"

namespace gpbog {

/// Upper end 4π² − 8πa of the admissible μ range on the unit torus.
double torus_mu_upper(double a);

struct TorusSumSpec {
  double N = 0.0;
  std::shared_ptr<const ScatteringSolution> scattering;
  double mu = 0.0;
  double p_cut = 0.0;  // lattice cutoff radius in |p|, p ∈ 2πZ³

  double a() const { return scattering->a; }
  /// Integer shell cutoff ⌊(p_cut/2π)²⌋.
  std::uint64_t n_cut() const;
  void validate() const;

  /// Defaults: μ at the middle of (0, 4π² − 8πa), p_cut = 8πN.
  static TorusSumSpec make(std::shared_ptr<const ScatteringSolution> scattering, double N,
                           std::optional<double> mu = std::nullopt, std::optional<double> p_cut = std::nullopt);
};

struct LatticeSum {
  double sum = 0.0;            // shell part + tail
  double shell_part = 0.0;     // 0 < |p| ≤ p_cut
  double tail_estimate = 0.0;  // continuum estimate beyond p_cut
  std::uint64_t shells = 0;
  std::uint64_t points = 0;
};

/// −½ Σ_{p≠0} (|p|²−μ − √((|p|²−μ)² − |N(f_N V_N)^(p)|²)), grouped by shells.
/// Uses `table` when given (must reach n_cut), else the on-disk cache.
LatticeSum bogoliubov_lattice_sum(const TorusSumSpec& spec, const ShellTable* table = nullptr, unsigned threads = 1);

/// ∫_{q_lo}^∞ ((Vf)^(q))² dq for the unscaled solution, with a power-law tail beyond the panel range.
double vf_hat_square_integral(const ScatteringSolution& sol, double q_lo);

struct PlancherelReference {
  double radial = 0.0;     // −(N²/2)∫ V_N f_N ω_N by radial quadrature
  double continuum = 0.0;  // −N² ∫ |(f_N V_N)^(p)|²/(4|p|²) dp/(2π)³
  double rel_diff = 0.0;
};

PlancherelReference plancherel_reference(const TorusSumSpec& spec);

struct HomogeneousBound {
  double lower_const = 0.0;   // 4πaN + lattice sum + (N²/2)∫V_N f_N ω_N
  double n_plus_coeff = 0.0;  // μ − 16πa
};

/// Requires a < π/6 and 16πa < μ < 4π² − 8πa.
HomogeneousBound homogeneous_energy_bound(const TorusSumSpec& spec, const LatticeSum& sum);

struct DefectRow {
  double N = 0.0;
  double sum = 0.0;
  double reference = 0.0;
  double defect = 0.0;
  double tail_estimate = 0.0;
  double mu = 0.0;
};

struct DefectReport {
  std::vector<DefectRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double max_abs_defect = 0.0;
  bool slope_consistent_with_zero = false;
  bool bounded = false;  // max |defect| below 10× the first row's |defect|
};

/// Defect d(N) = lattice sum − radial reference over an N sweep at fixed μ.
DefectReport plancherel_defect_sweep(std::shared_ptr<const ScatteringSolution> scattering, const std::vector<double>& Ns,
                                     std::optional<double> mu = std::nullopt, unsigned threads = 1);

}  // namespace gpbog
