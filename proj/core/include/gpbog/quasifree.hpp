#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "gpbog/tensor.hpp"

namespace gpbog {

/// One-body density matrices of a quasi-free state in a real basis:
/// γ_ij = ⟨a*_j a_i⟩, α_ij = ⟨a_i a_j⟩.
struct QuasiFreePair {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd alpha;
  double trace_gamma = 0.0;

  Eigen::Index dim() const { return gamma.rows(); }
  static QuasiFreePair make(Eigen::MatrixXd gamma, Eigen::MatrixXd alpha);
  static QuasiFreePair vacuum(int n);
};

struct Admissibility {
  bool admissible = false;
  double min_eig_gamma = 0.0;
  double min_eig_block = 0.0;  // of [[γ, α], [α, 1+γ]]
  Eigen::VectorXd witness;     // violating eigenvector (empty when admissible)
};

Admissibility admissible(const QuasiFreePair& pair, double rel_tol = 1e-10);

/// Kernel k on the basis with the particle number it was built for.
struct TrialStateSpec {
  Eigen::MatrixXd k;
  double N = 0.0;
};

/// γ = Q kᵀk Q, α = Q k Q with Q = 1 − |φ⟩⟨φ|.
QuasiFreePair from_kernel(const TrialStateSpec& spec, const Eigen::VectorXd& phi);

struct WickTerms {
  double condensate = 0.0;   // N⟨φ, h φ⟩
  double hartree = 0.0;      // (N²/2) Σ W φφφφ
  double one_body = 0.0;     // Tr(h γ)
  double pairing = 0.0;      // N Σ W φφ α
  double direct = 0.0;       // Σ W γ γ (densities)
  double exchange = 0.0;     // Σ W γ γ (exchange)
  double pair_square = 0.0;  // Σ W α α
  double interaction = 0.0;  // (1 + C/N)/2 · (direct + exchange + pair_square)
  double total = 0.0;
};

struct WickOptions {
  double correction_C = 0.0;  // prefactor (1 + C/N) on the quartic term; 0 gives the plain Wick value
};

/// Expectation of the Hamiltonian in the state built from a condensate φ with N particles and the pair
/// (γ, α) of excitations; h is the one-body matrix of −Δ+V.
WickTerms wick_energy(const QuasiFreePair& pair, const Eigen::MatrixXd& one_body, const InteractionTensor& W,
                      const Eigen::VectorXd& phi, double N, const WickOptions& opt = {});

/// Operator a*_mode (create = true) or a_mode.
struct LadderOp {
  bool create;
  int mode;
};

/// ⟨ops[0] ops[1] ⋯⟩ by summing over all pairings; the index-level oracle for the trace formulas.
double wick_expectation(const QuasiFreePair& pair, const std::vector<LadderOp>& ops);

/// ⟨𝒩^ℓ⟩ for ℓ ∈ [0, 4], by Wick pairings evaluated as traces over cycles.
double number_moment(const QuasiFreePair& pair, int ell);

struct MomentCheck {
  double moment = 0.0;
  double bound = 0.0;  // C_ℓ (1 + Tr γ)^ℓ
  bool holds = false;
};

MomentCheck moment_bound_check(const QuasiFreePair& pair, int ell, double C2 = 10.0, double C3 = 100.0);

}  // namespace gpbog
