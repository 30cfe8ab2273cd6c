#pragma once

#include <memory>
#include <vector>

#include "gpbog/gp_solver.hpp"
#include "gpbog/quasifree.hpp"
#include "gpbog/scattering.hpp"

namespace gpbog {

struct TorusTrialOptions {
  double cut_factor = 16.0;  // lattice cutoff |p| ≤ 2π·cut_factor·N
  int radial_nodes = 48;     // Gauss nodes on [0, R0] for the V_N-weighted integrals
};

/// Trial energy on the unit torus with φ ≡ 1 and k = −N ω_N, evaluated in momentum space.
/// The kernel is diagonal in p, so γ_p = k̂(p)² and α_p = k̂(p) for p ≠ 0. The V_N-weighted
/// quartic terms use the radial averages of γ(r) and α(r) inside the range of V_N.
struct TorusTrial {
  WickTerms terms;
  double trace_gamma = 0.0;
  double number_second_moment = 0.0;  // ⟨𝒩²⟩ = (Tr γ)² + Tr γ + Tr γ² + Tr α²
};

TorusTrial torus_trial(std::shared_ptr<const ScatteringSolution> scattering, double N,
                       const TorusTrialOptions& opt = {});

struct TrialRow {
  double N = 0.0;
  double wick_energy = 0.0;
  double n_e_gp = 0.0;
  double defect = 0.0;
  double trace_defect = 0.0;  // Markov bound ⟨𝒩²⟩/N² on 1 − Tr Γ_N
  double young_lhs = 0.0;     // (N²/2)∫((V_N f_N) ∗ φ²) φ²
  double young_rhs = 0.0;     // (N²/2)‖V_N f_N‖₁ ∫φ⁴
  double young_rhs_a = 0.0;   // 4πaN∫φ⁴ with the fitted scattering length
  bool young_holds = false;
  WickTerms terms;
};

struct TrialReport {
  std::vector<TrialRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double defect_min = 0.0;
  double defect_max = 0.0;
  bool slope_nonpositive = false;  // slope ≤ 2 standard errors
  bool young_all = false;
};

/// On the torus uses torus_trial; on traps builds the pair from k = −φ N ω_N φ on a basis of
/// φ plus M−1 excitation modes and evaluates the dense Wick energy.
TrialReport trial_upper_bound(const GpState& state, const TrapPotential& trap,
                              std::shared_ptr<const ScatteringSolution> scattering, int M,
                              const std::vector<double>& N_sweep, const TorusTrialOptions& opt = {});

}  // namespace gpbog
