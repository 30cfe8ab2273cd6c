#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gpbog/errors.hpp"
#include "gpbog/lanczos.hpp"
#include "gpbog/numerics.hpp"

using namespace gpbog;

TEST_CASE("simpson integrates cubics exactly for even and odd interval counts") {
  for (int n : {5, 6, 11, 12}) {
    const double h = 1.0 / (n - 1);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      const double x = i * h;
      y[i] = 2 * x * x * x - x + 1;
    }
    CHECK(simpson(y, h) == doctest::Approx(0.5 - 0.5 + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("fit_line recovers an exact line and a zero standard error") {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  auto fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_stderr == doctest::Approx(0.0));
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("gauss_legendre integrates degree 2n-1 exactly") {
  std::vector<double> x, w;
  gauss_legendre(4, 0.0, 2.0, x, w);
  double s = 0;
  for (int i = 0; i < 4; ++i) s += w[i] * std::pow(x[i], 7);
  CHECK(s == doctest::Approx(std::pow(2.0, 8) / 8.0).epsilon(1e-13));
}

TEST_CASE("psd_sqrt squares back") {
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(5, 5);
  Eigen::MatrixXd a = b * b.transpose();
  Eigen::MatrixXd r = psd_sqrt(a);
  CHECK((r * r - a).norm() < 1e-10);
}

TEST_CASE("lanczos finds the lowest eigenvalues of a 1D Laplacian") {
  const int n = 400;
  LinearOperator op = [n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(n);
    for (int i = 0; i < n; ++i) {
      y(i) = 2 * x(i);
      if (i > 0) y(i) -= x(i - 1);
      if (i + 1 < n) y(i) -= x(i + 1);
    }
  };
  LanczosOptions opt;
  opt.nev = 3;
  opt.krylov_dim = 60;
  opt.max_restarts = 2000;
  opt.tol = 1e-9;
  auto res = lanczos_lowest(op, n, opt);
  for (int k = 0; k < 3; ++k) {
    const double exact = 2 - 2 * std::cos(std::numbers::pi * (k + 1) / (n + 1));
    CHECK(res.values(k) == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK(res.residuals.maxCoeff() < 1e-8);
}

TEST_CASE("lanczos dense path agrees with a direct eigensolver") {
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(20, 20);
  Eigen::MatrixXd a = b + b.transpose();
  LinearOperator op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; };
  auto res = lanczos_lowest(op, 20, LanczosOptions{});
  CHECK(res.values(0) == doctest::Approx(min_eigenvalue(a)).epsilon(1e-12));
}

TEST_CASE("lanczos reports stagnation as a convergence error") {
  const int n = 400;
  LinearOperator op = [n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(n);
    for (int i = 0; i < n; ++i) y(i) = (1.0 + 1e-6 * i) * x(i);
  };
  LanczosOptions opt;
  opt.max_restarts = 1;
  opt.krylov_dim = 10;
  opt.tol = 1e-15;
  CHECK_THROWS_AS(lanczos_lowest(op, n, opt), ConvergenceError);
}
