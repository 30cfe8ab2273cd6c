#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace gpbog {

/// Periodic cubic box [origin, origin + length)³ with M points per axis and
/// FFT-based spectral operators. Index order is row-major with x slowest.
///
/// Holds scratch buffers, so one instance must not be used from two threads
/// at once. Plans use FFTW_ESTIMATE so results are bit-reproducible.
class SpectralGrid {
 public:
  SpectralGrid(int M, double length, double origin);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int M() const { return M_; }
  double length() const { return length_; }
  double origin() const { return origin_; }
  double h() const { return length_ / M_; }
  double dV() const { return h() * h() * h(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(M_) * M_ * M_; }
  Eigen::Index spectrum_size() const { return static_cast<Eigen::Index>(M_) * M_ * (M_ / 2 + 1); }
  double coord(int i) const { return origin_ + h() * i; }
  Eigen::Index index(int i, int j, int k) const { return (static_cast<Eigen::Index>(i) * M_ + j) * M_ + k; }

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(b) * dV(); }
  double norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }

  /// |k|² per half-spectrum entry.
  const std::vector<double>& k2() const { return k2_; }
  double wavenumber(int i) const;

  /// Multiply by a real multiplier given per half-spectrum entry.
  void fourier_multiply(const Eigen::VectorXd& in, Eigen::VectorXd& out, const std::vector<double>& multiplier);
  /// Multiplier m(|k|²) tabulated on the half spectrum.
  std::vector<double> radial_multiplier(const std::function<double(double)>& m) const;

  /// Spectral −Δ.
  void neg_laplacian(const Eigen::VectorXd& in, Eigen::VectorXd& out);
  /// ⟨u, −Δu⟩ = Σ|k|²|û|² with the grid measure.
  double kinetic(const Eigen::VectorXd& u);
  /// Periodic convolution (g ∗ u)(x) = ∫ g(x − y) u(y) dy, g sampled with g(0) at index 0.
  void convolve(const Eigen::VectorXd& kernel, const Eigen::VectorXd& u, Eigen::VectorXd& out);

 private:
  int M_;
  double length_, origin_;
  struct Fft;
  std::unique_ptr<Fft> fft_;
  std::vector<double> k2_;
};

}  // namespace gpbog
