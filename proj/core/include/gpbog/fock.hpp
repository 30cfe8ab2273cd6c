#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace gpbog {

/// Occupation vectors (n_1 … n_M) with Σ n_i = N in ascending lexicographic order.
class FockSector {
 public:
  FockSector(int M, int N);

  int modes() const { return M_; }
  int particles() const { return N_; }
  std::size_t dim() const { return dim_; }
  std::span<const int> occupation(std::size_t idx) const {
    return {occ_.data() + idx * static_cast<std::size_t>(M_), static_cast<std::size_t>(M_)};
  }
  /// Inverse of occupation(); the vector must sum to N.
  std::size_t index(std::span<const int> occ) const;

  /// C(N+M−1, N); throws ResourceError above `limit`.
  static std::size_t dimension(int M, int N, std::size_t limit = 50'000'000);

 private:
  std::size_t count(int modes, int total) const;
  int M_, N_;
  std::size_t dim_;
  std::vector<int> occ_;
  std::vector<std::size_t> binom_;  // count(m, t) table, (M+1)×(N+1)
};

/// All occupation vectors with Σ n_i ≤ L, ordered by total then lexicographically.
class TruncatedFock {
 public:
  TruncatedFock(int M, int L);

  int modes() const { return M_; }
  int max_total() const { return L_; }
  std::size_t dim() const { return offsets_.back(); }
  std::size_t sector_offset(int total) const { return offsets_[static_cast<std::size_t>(total)]; }
  const FockSector& sector(int total) const { return sectors_[static_cast<std::size_t>(total)]; }
  std::span<const int> occupation(std::size_t idx) const;
  std::size_t index(std::span<const int> occ) const;

  /// out = a*_i in, dropping components above L.
  void apply_create(int i, const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  /// out = a_i in.
  void apply_annihilate(int i, const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  /// Copy of `in` with every level above `level` set to zero.
  Eigen::VectorXd truncate(const Eigen::VectorXd& in, int level) const;

 private:
  int M_, L_;
  std::vector<FockSector> sectors_;
  std::vector<std::size_t> offsets_;
};

}  // namespace gpbog
