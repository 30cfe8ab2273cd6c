#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpbog/fock.hpp"
#include "gpbog/quasifree.hpp"

namespace gpbog {

/// Williamson form of a quasi-free pair: modes b = U a + V a* in which the state is a product of
/// thermal states with mean occupations `occupation`.
struct GaussianRealization {
  Eigen::MatrixXd U, V;
  Eigen::VectorXd occupation;
  Eigen::MatrixXd Z;  // −U⁻¹V: the vacuum of b is exp(½ a*ᵀ Z a*)|0⟩ up to normalization
};

GaussianRealization realize(const QuasiFreePair& pair);

/// Projection onto levels ≤ L of the normalized b-vacuum.
Eigen::VectorXd squeezed_vacuum(const GaussianRealization& g, const TruncatedFock& space);

struct MixtureComponent {
  double weight = 0.0;
  Eigen::VectorXd vector;  // projected onto levels ≤ L, not renormalized
};

struct MixtureOptions {
  double mass_tol = 1e-14;
  int max_thermal = 12;  // cap on total thermal excitations enumerated
};

struct Mixture {
  std::vector<MixtureComponent> components;
  double thermal_mass = 0.0;  // Σ weights kept
  int level = 0;
};

/// Γ restricted to levels ≤ L as a weighted sum of pure states.
Mixture truncated_mixture(const QuasiFreePair& pair, int L, const MixtureOptions& opt = {});

/// Single-mode squeezed vacuum with γ = s², α = s√(1+s²), coefficients of |0⟩, |2⟩, …, |2·n_pairs⟩.
Eigen::VectorXd single_mode_squeezed(double s, int n_pairs);

}  // namespace gpbog
