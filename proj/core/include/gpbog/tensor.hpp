#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gpbog/errors.hpp"

namespace gpbog {

/// W(m,n,p,q) = ⟨u_m ⊗ u_n, V u_p ⊗ u_q⟩ for a real orthonormal basis; m,p act on the first particle.
class InteractionTensor {
 public:
  InteractionTensor() = default;
  explicit InteractionTensor(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int m, int n, int p, int q) { return data_[index(m, n, p, q)]; }
  double operator()(int m, int n, int p, int q) const { return data_[index(m, n, p, q)]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Throws unless W is invariant under particle exchange (m,p)↔(n,q) and under (mn)↔(pq).
  void validate(double rel_tol = 1e-10) const {
    double scale = 0.0;
    for (double v : data_) {
      if (!std::isfinite(v)) throw ValidationError("non-finite interaction tensor entry");
      scale = std::max(scale, std::abs(v));
    }
    const double tol = rel_tol * std::max(1.0, scale);
    for (int m = 0; m < n_; ++m)
      for (int n = 0; n < n_; ++n)
        for (int p = 0; p < n_; ++p)
          for (int q = 0; q < n_; ++q) {
            const double w = (*this)(m, n, p, q);
            if (std::abs(w - (*this)(n, m, q, p)) > tol || std::abs(w - (*this)(p, q, m, n)) > tol)
              throw ValidationError("interaction tensor violates index symmetry at (" + std::to_string(m) + "," +
                                    std::to_string(n) + "," + std::to_string(p) + "," + std::to_string(q) + ")");
          }
  }

 private:
  std::size_t index(int m, int n, int p, int q) const {
    return ((static_cast<std::size_t>(m) * n_ + n) * n_ + p) * n_ + q;
  }
  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace gpbog
