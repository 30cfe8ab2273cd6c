#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <limits>
#include <string>
#include <vector>

#include "gpbog/fock.hpp"
#include "gpbog/gaussian_state.hpp"
#include "gpbog/quasifree.hpp"
#include "gpbog/tensor.hpp"

namespace gpbog {

enum class BasisKind { torus_1d, torus_3d, oscillator_modes, custom };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

/// H_N = Σ h_mp a*_m a_p + ½ Σ W(m,q,p,r) a*_m a*_q a_r a_p on the N-particle sector.
struct ManyBodyProblem {
  Eigen::MatrixXd one_body;
  InteractionTensor two_body;
  BasisKind basis = BasisKind::custom;
  int N = 0;
  Eigen::VectorXd condensate;  // φ in the basis; empty until set
  double coupling = 0.0;       // informational, set by the toy builders

  int modes() const { return static_cast<int>(one_body.rows()); }
  /// Shapes, finiteness, symmetry of h and W, and ‖φ‖ = 1 when φ is set.
  void validate() const;
};

class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(const ManyBodyProblem& problem, std::size_t max_dim = 200'000);

  const FockSector& sector() const { return sector_; }
  std::size_t dim() const { return sector_.dim(); }
  /// y = H x, computed row by row from the occupation basis; rows are split across `threads`.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, unsigned threads = 1) const;
  Eigen::SparseMatrix<double> assemble() const;
  double expectation(const Eigen::VectorXd& x) const;

 private:
  template <class Emit>
  void row(std::size_t idx, std::vector<int>& work, Emit&& emit) const;
  const ManyBodyProblem& p_;
  FockSector sector_;
};

/// ⟨a*_n a_m⟩ stored at (m, n).
Eigen::MatrixXd one_body_density(const FockSector& sector, const Eigen::VectorXd& psi);

struct EdOptions {
  int nev = 1;
  double tol = 1e-10;
  unsigned threads = 1;
  std::size_t max_dim = 200'000;
  std::size_t assemble_below = 10'000;  // explicit sparse matrix up to this dimension, matrix-free above
};

struct EdResult {
  double energy = 0.0;
  Eigen::VectorXd energies;  // ascending, nev entries
  Eigen::MatrixXd states;    // columns
  Eigen::VectorXd ground;
  Eigen::MatrixXd gamma1;    // one-body density of the ground state
  std::size_t dim = 0;
  bool matrix_free = false;
  long matvecs = 0;
};

EdResult exact_diagonalize(const ManyBodyProblem& problem, const EdOptions& opt = {});

struct CondensationReport {
  double depletion = 0.0;           // N − ⟨φ, γ φ⟩
  double condensate_fraction = 0.0; // ⟨φ, γ φ⟩ / N
  double excess_energy = 0.0;       // ⟨H⟩ − E_N
  double ratio = 0.0;               // depletion / (excess_energy + 1)
};

CondensationReport condensation_report(const ManyBodyProblem& problem, const EdResult& result);
/// For an arbitrary normalized state of the sector, e.g. an excited eigenvector.
CondensationReport condensation_report(const ManyBodyProblem& problem, const Eigen::VectorXd& state, double E_N);

/// Orthogonal O with O e₀ = φ, as a product of Givens rotations in neighbouring planes.
class AdaptedBasis {
 public:
  explicit AdaptedBasis(const Eigen::VectorXd& phi);
  const Eigen::MatrixXd& matrix() const { return O_; }
  /// Coefficients in the occupation basis of the original modes → of the adapted modes.
  Eigen::VectorXd to_adapted(const FockSector& sector, const Eigen::VectorXd& psi) const;
  Eigen::VectorXd from_adapted(const FockSector& sector, const Eigen::VectorXd& psi) const;

 private:
  struct Rotation {
    int i, j;
    double c, s;
  };
  std::vector<Rotation> rot_;
  Eigen::MatrixXd O_;
};

/// ⊕ξ_k over the M−1 modes orthogonal to φ, laid out as a TruncatedFock(M−1, N) vector.
struct ExcitationVector {
  int excited_modes = 0;
  int N = 0;
  Eigen::VectorXd data;

  Eigen::VectorXd layer(int k) const;
  std::vector<double> layer_norms() const;
};

ExcitationVector excitation_map(const ManyBodyProblem& problem, const Eigen::VectorXd& psi);
Eigen::VectorXd excitation_map_inverse(const ManyBodyProblem& problem, const ExcitationVector& xi);

struct HartreeResult {
  Eigen::VectorXd phi;
  double energy_per_particle = 0.0;  // ⟨φ,hφ⟩ + (N/2) Σ W φφφφ
  double mu = 0.0;
  int iterations = 0;
};

/// Minimizer of the discrete Hartree functional by damped self-consistent iteration from the lowest
/// one-body mode; the basis analog of the GP minimizer.
HartreeResult hartree_minimize(const ManyBodyProblem& problem, double tol = 1e-12, int max_iter = 2000);

/// Hartree energy per particle at the problem's condensate.
double hartree_energy(const ManyBodyProblem& problem);

/// k_ij = −N W'(i,j,0,0) / (h'_ii + h'_jj − 2h'_00) in the φ-adapted basis, zero on φ, rotated back.
Eigen::MatrixXd toy_kernel(const ManyBodyProblem& problem);

/// Interaction V = (λ/N) G_σ with G_σ the unit-mass Gaussian, so N·W stays fixed along N sweeps.
/// 1D torus of length `length`, real plane waves 1, √2cos, √2sin ordered by |n|.
ManyBodyProblem torus_1d_problem(int M, int N, double coupling, double width = 0.1, double length = 1.0);
/// Unit 3D torus, constant mode and √2cos/√2sin waves with |n|² ≤ 2 (M ≤ 19).
ManyBodyProblem torus_3d_problem(int M, int N, double coupling, double width = 0.1);
/// Isotropic 3D oscillator −Δ + |x|², Hermite products up to two quanta (M ≤ 10), Hartree condensate.
ManyBodyProblem oscillator_problem(int M, int N, double coupling, double width = 0.5);

struct SandwichOptions {
  double C = 0.0;                                            // user constant C
  double c = std::numeric_limits<double>::quiet_NaN();       // user constant c; NaN skips the direct check
  double slack = 1e-8;
  double bisection_tol = 1e-8;
  MixtureOptions mixture;
  EdOptions ed;
};

struct SandwichReport {
  double E_N = 0.0;
  double trial_energy = 0.0;   // exact N-sector expectation of the projected quasi-free state
  double wick_energy = 0.0;    // Wick value of the same pair with a c-number condensate
  double trial_mass = 0.0;     // Tr of the projected state before renormalization
  double trace_defect = 0.0;   // 1 − trial_mass
  bool variational_holds = false;

  double gp_energy_analog = 0.0;
  double C = 0.0;
  double c_supplied = std::numeric_limits<double>::quiet_NaN();
  double lambda_at_c = std::numeric_limits<double>::quiet_NaN();  // λ_min(H_N − c𝒩₊)
  bool supplied_holds = false;
  double c_best = std::numeric_limits<double>::quiet_NaN();       // largest c with the bound at C; NaN if none
  double one_body_gap = 0.0;   // inf over u ⊥ φ of ⟨u,hu⟩ − ⟨φ,hφ⟩
};

/// `trial` lives on the problem's basis with φ in the kernel of γ and α.
SandwichReport sandwich(const ManyBodyProblem& problem, double gp_energy_analog, const QuasiFreePair& trial,
                        const SandwichOptions& opt = {});

/// λ_min(H_N − c𝒩₊) with 𝒩₊ = dΓ(1 − |φ⟩⟨φ|).
double shifted_ground_energy(const ManyBodyProblem& problem, double c, const EdOptions& opt = {});

/// Weighted mixture of excitation vectors mapped into the N-sector: ρ = Σ w |Ψ⟩⟨Ψ|.
struct SectorMixture {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> vectors;
  double mass = 0.0;  // Σ w ‖Ψ‖²
};

/// Quasi-free state of the excitations (pair on the complement of φ) restricted to levels ≤ N and sent
/// through U_N^{-1}.
SectorMixture project_to_sector(const ManyBodyProblem& problem, const QuasiFreePair& trial,
                                const MixtureOptions& opt = {});

}  // namespace gpbog
