#include "gpbog/spectral_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "gpbog/errors.hpp"

namespace gpbog {

namespace {
// FFTW planning is not thread safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SpectralGrid::Fft {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_complex* spec2 = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
    fftw_free(spec2);
  }
};

SpectralGrid::SpectralGrid(int M, double length, double origin)
    : M_(M), length_(length), origin_(origin), fft_(std::make_unique<Fft>()) {
  if (M < 4 || (M & (M - 1)) != 0) throw ValidationError("grid points per axis must be a power of two >= 4");
  if (!(length > 0.0)) throw ValidationError("box length must be positive");
  const std::size_t n = static_cast<std::size_t>(size());
  const std::size_t ns = static_cast<std::size_t>(spectrum_size());
  fft_->real = fftw_alloc_real(n);
  fft_->spec = fftw_alloc_complex(ns);
  fft_->spec2 = fftw_alloc_complex(ns);
  if (!fft_->real || !fft_->spec || !fft_->spec2) throw ResourceError("fftw allocation failed", n * sizeof(double));
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fft_->r2c = fftw_plan_dft_r2c_3d(M, M, M, fft_->real, fft_->spec, FFTW_ESTIMATE);
    fft_->c2r = fftw_plan_dft_c2r_3d(M, M, M, fft_->spec, fft_->real, FFTW_ESTIMATE);
  }
  const int mh = M / 2 + 1;
  k2_.resize(ns);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < mh; ++k) {
        const double kx = wavenumber(i), ky = wavenumber(j), kz = wavenumber(k);
        k2_[(static_cast<std::size_t>(i) * M + j) * mh + k] = kx * kx + ky * ky + kz * kz;
      }
}

SpectralGrid::~SpectralGrid() = default;

double SpectralGrid::wavenumber(int i) const {
  const int s = i <= M_ / 2 ? i : i - M_;
  return 2.0 * std::numbers::pi / length_ * s;
}

std::vector<double> SpectralGrid::radial_multiplier(const std::function<double(double)>& m) const {
  std::vector<double> out(k2_.size());
  for (std::size_t i = 0; i < k2_.size(); ++i) out[i] = m(k2_[i]);
  return out;
}

void SpectralGrid::fourier_multiply(const Eigen::VectorXd& in, Eigen::VectorXd& out,
                                    const std::vector<double>& multiplier) {
  const Eigen::Index n = size();
  if (in.size() != n) throw ValidationError("fourier_multiply: size mismatch");
  std::copy(in.data(), in.data() + n, fft_->real);
  fftw_execute(fft_->r2c);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < multiplier.size(); ++i) {
    fft_->spec[i][0] *= multiplier[i] * scale;
    fft_->spec[i][1] *= multiplier[i] * scale;
  }
  fftw_execute(fft_->c2r);
  out.resize(n);
  std::copy(fft_->real, fft_->real + n, out.data());
}

void SpectralGrid::neg_laplacian(const Eigen::VectorXd& in, Eigen::VectorXd& out) { fourier_multiply(in, out, k2_); }

double SpectralGrid::kinetic(const Eigen::VectorXd& u) {
  const Eigen::Index n = size();
  std::copy(u.data(), u.data() + n, fft_->real);
  fftw_execute(fft_->r2c);
  // Half spectrum: interior kz planes count twice.
  const int mh = M_ / 2 + 1;
  double s = 0.0;
  for (int i = 0; i < M_; ++i)
    for (int j = 0; j < M_; ++j)
      for (int k = 0; k < mh; ++k) {
        const std::size_t idx = (static_cast<std::size_t>(i) * M_ + j) * mh + k;
        const double w = (k == 0 || k == M_ / 2) ? 1.0 : 2.0;
        const double re = fft_->spec[idx][0], im = fft_->spec[idx][1];
        s += w * k2_[idx] * (re * re + im * im);
      }
  return s * dV() / static_cast<double>(n);
}

void SpectralGrid::convolve(const Eigen::VectorXd& kernel, const Eigen::VectorXd& u, Eigen::VectorXd& out) {
  const Eigen::Index n = size();
  const std::size_t ns = static_cast<std::size_t>(spectrum_size());
  std::copy(kernel.data(), kernel.data() + n, fft_->real);
  fftw_execute(fft_->r2c);
  std::copy(fft_->spec[0], fft_->spec[0] + 2 * ns, fft_->spec2[0]);
  std::copy(u.data(), u.data() + n, fft_->real);
  fftw_execute(fft_->r2c);
  const double scale = dV() / static_cast<double>(n);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::complex<double> a(fft_->spec[i][0], fft_->spec[i][1]);
    const std::complex<double> b(fft_->spec2[i][0], fft_->spec2[i][1]);
    const std::complex<double> c = a * b * scale;
    fft_->spec[i][0] = c.real();
    fft_->spec[i][1] = c.imag();
  }
  fftw_execute(fft_->c2r);
  out.resize(n);
  std::copy(fft_->real, fft_->real + n, out.data());
}

}  // namespace gpbog
