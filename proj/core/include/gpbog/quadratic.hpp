#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gpbog/gp_solver.hpp"
#include "gpbog/scattering.hpp"

namespace gpbog {

enum class Provenance { random, assembled_from_gp, manual };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// dΓ(H) + ½ Σ K_ij (a*_i a*_j + a_i a_j) on a finite real one-body space.
struct QuadraticHamiltonian {
  Eigen::MatrixXd H;
  Eigen::MatrixXd K;
  double epsilon = 0.0;
  Provenance provenance = Provenance::manual;
  double lambda_min_H = 0.0;
  double k_op = 0.0;
  bool admissible = false;
  double k_bound = 0.0;  // a-priori ‖K‖ bound when assembled from a GP state (0 otherwise)

  Eigen::Index dim() const { return H.rows(); }

  /// Validates shapes and symmetry, caches spectra, sets the admissible flag.
  static QuadraticHamiltonian make(Eigen::MatrixXd H, Eigen::MatrixXd K, double epsilon,
                                   Provenance provenance = Provenance::manual);
};

struct EnergyReport {
  double exact = 0.0;
  double bound_quarter = 0.0;
  double bound_half = 0.0;
  double c_eps_used = 0.0;
  bool satisfied_quarter = false;
  bool satisfied_half = false;
};

constexpr double kDefaultCEps = 10.0;

/// ½Tr(E − H), E = (D^{1/2}(D + 2K)D^{1/2})^{1/2}, D = H − K.
double ground_energy_exact(const QuadraticHamiltonian& qh);
/// −¼Tr(H⁻¹K²) − c_eps‖K‖Tr(H⁻²K²).
double lower_bound_quarter(const QuadraticHamiltonian& qh, double c_eps);
/// −½Tr(H⁻¹K²).
double lower_bound_half(const QuadraticHamiltonian& qh);
/// Smallest c ≥ 0 with exact ≥ lower_bound_quarter(c).
double minimal_c_eps(const QuadraticHamiltonian& qh, double exact);
EnergyReport energy_report(const QuadraticHamiltonian& qh, double c_eps = kDefaultCEps);

/// Lowest eigenvalue on the even-parity occupation basis with total occupation ≤ n_max.
double fock_exact_diag(const QuadraticHamiltonian& qh, int n_max, std::size_t max_dim = 200000);

/// Random admissible instance with λ_min(H) = (1+ε)‖K‖ exactly.
QuadraticHamiltonian random_instance(std::uint64_t seed, int dim, double eps);

struct SweepRow {
  std::uint64_t seed = 0;
  int dim = 0;
  double eps = 0.0;
  double exact = 0.0;
  double bound_half = 0.0;
  double bound_quarter = 0.0;  // evaluated with the run's fitted c_eps
  double min_c_eps = 0.0;
};

struct EpsBucket {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  double max_c_eps = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<EpsBucket> buckets;
  double fitted_c_eps = 0.0;
  int violations_half = 0;
  int violations_quarter = 0;
};

struct SweepOptions {
  std::uint64_t seed = 42;
  int n_instances = 1000;
  int dim_min = 1, dim_max = 8;
  double eps_min = 0.05, eps_max = 2.0;
  unsigned threads = 1;
};

SweepReport verify_theorem(const SweepOptions& opt);

/// Real orthonormal one-body basis on the GP grid with its −Δ+V matrix.
struct AssembledBasis {
  Eigen::MatrixXd vectors;  // grid values, columns orthonormal in L², all ⊥ φ
  Eigen::MatrixXd one_body; // ⟨b_i, (−Δ+V) b_j⟩
  std::vector<std::array<int, 3>> momenta;  // torus only: integer momentum of each plane wave
  std::vector<int> parity;                  // torus only: 0 = cos, 1 = sin
};

/// Lowest M (+1) eigenvectors of −Δ+V, projected onto Q = 1 − |φ⟩⟨φ| and orthonormalized.
/// On the torus the basis is analytic real plane waves sorted by |p|.
AssembledBasis excitation_basis(const GpState& state, const TrapPotential& trap, int M);

/// H = Q(−Δ+V−μ)Q, K = Q⊗Q φ(x)φ(y) N V_N f_N(x−y) on the excitation basis.
QuadraticHamiltonian assemble_from_gp(const GpState& state, const TrapPotential& trap, const ScaledScattering& scattering,
                                      double mu, int M);

struct BogoliubovBoundRow {
  double N = 0.0;
  double exact = 0.0;
  double reference = 0.0;
  double defect = 0.0;
  double k_op = 0.0;
  double k_bound = 0.0;
};

struct BogoliubovBoundReport {
  std::vector<BogoliubovBoundRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double min_defect = 0.0;
  bool bounded_below = false;
};

/// −(N²/2)∫((V_N f_N ω_N) ∗ φ²) φ².
double bogoliubov_reference(const GpState& state, const TrapPotential& trap, const ScaledScattering& scattering);

BogoliubovBoundReport verify_bogoliubov_bound(const GpState& state, const TrapPotential& trap,
                             std::shared_ptr<const ScatteringSolution> scattering, double mu, int M,
                             const std::vector<double>& N_sweep);

}  // namespace gpbog
