#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace gpbog {

/// Composite Simpson rule on uniform samples. An odd number of intervals is
/// handled by closing with Simpson's 3/8 rule on the last three intervals.
double simpson(std::span<const double> y, double h);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // 0 when fewer than three points
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Cubic Hermite interpolation on [x0, x1] from values and derivatives.
double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1);

/// sin(x)/x with a series near the origin.
double sinc(double x);

/// Symmetric eigendecomposition with eigenvalues clamped at zero below
/// `rel_floor * max|eigenvalue|`; returns V sqrt(Λ) Vᵀ.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a, double rel_floor = 1e-12);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& a);

/// Operator norm of a symmetric matrix.
double sym_op_norm(const Eigen::MatrixXd& a);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace gpbog
