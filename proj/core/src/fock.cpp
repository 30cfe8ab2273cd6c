#include "gpbog/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gpbog/errors.hpp"

namespace gpbog {

std::size_t FockSector::dimension(int M, int N, std::size_t limit) {
  if (M < 1 || N < 0) throw ValidationError("Fock sector needs M >= 1 and N >= 0");
  double c = 1.0;
  for (int k = 1; k < M; ++k) c = c * (N + k) / k;
  const auto d = static_cast<std::size_t>(std::llround(c));
  if (c > static_cast<double>(limit)) throw ResourceError("Fock sector dimension too large", d);
  return d;
}

FockSector::FockSector(int M, int N) : M_(M), N_(N), dim_(dimension(M, N)) {
  binom_.assign(static_cast<std::size_t>(M + 1) * (N + 1), 0);
  for (int t = 0; t <= N; ++t) binom_[t] = t == 0 ? 1 : 0;
  for (int m = 1; m <= M; ++m)
    for (int t = 0; t <= N; ++t) {
      // Ways to spread t over m modes = Σ_{v ≤ t} ways over m−1 modes.
      std::size_t s = 0;
      for (int v = 0; v <= t; ++v) s += binom_[static_cast<std::size_t>(m - 1) * (N + 1) + (t - v)];
      binom_[static_cast<std::size_t>(m) * (N + 1) + t] = s;
    }
  occ_.resize(dim_ * static_cast<std::size_t>(M));
  std::vector<int> cur(M, 0);
  std::size_t idx = 0;
  std::function<void(int, int)> rec = [&](int mode, int remaining) {
    if (mode == M - 1) {
      cur[mode] = remaining;
      std::copy(cur.begin(), cur.end(), occ_.begin() + static_cast<std::ptrdiff_t>(idx * M));
      ++idx;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[mode] = v;
      rec(mode + 1, remaining - v);
    }
  };
  rec(0, N);
}

std::size_t FockSector::count(int modes, int total) const {
  return binom_[static_cast<std::size_t>(modes) * (N_ + 1) + total];
}

std::size_t FockSector::index(std::span<const int> occ) const {
  std::size_t r = 0;
  int remaining = N_;
  for (int i = 0; i + 1 < M_; ++i) {
    // States with a smaller value at position i come first: Σ_{v<n_i} count(k, t−v) = count(k+1, t) − count(k+1, t−n_i).
    r += count(M_ - i, remaining) - count(M_ - i, remaining - occ[i]);
    remaining -= occ[i];
  }
  return r;
}

TruncatedFock::TruncatedFock(int M, int L) : M_(M), L_(L) {
  if (L < 0) throw ValidationError("truncation level must be non-negative");
  offsets_.push_back(0);
  for (int t = 0; t <= L; ++t) {
    sectors_.emplace_back(M, t);
    offsets_.push_back(offsets_.back() + sectors_.back().dim());
  }
}

std::span<const int> TruncatedFock::occupation(std::size_t idx) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
  const auto t = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return sectors_[t].occupation(idx - offsets_[t]);
}

std::size_t TruncatedFock::index(std::span<const int> occ) const {
  int t = 0;
  for (int v : occ) t += v;
  if (t > L_) throw DomainError("occupation above truncation level");
  return offsets_[static_cast<std::size_t>(t)] + sectors_[static_cast<std::size_t>(t)].index(occ);
}

void TruncatedFock::apply_create(int i, const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  std::vector<int> occ(M_);
  for (int t = 0; t < L_; ++t) {
    const auto& s = sectors_[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const double c = in(static_cast<Eigen::Index>(offsets_[t] + k));
      if (c == 0.0) continue;
      const auto o = s.occupation(k);
      std::copy(o.begin(), o.end(), occ.begin());
      occ[i] += 1;
      out(static_cast<Eigen::Index>(offsets_[t + 1] + sectors_[t + 1].index(occ))) += std::sqrt(occ[i]) * c;
    }
  }
}

void TruncatedFock::apply_annihilate(int i, const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  std::vector<int> occ(M_);
  for (int t = 1; t <= L_; ++t) {
    const auto& s = sectors_[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const double c = in(static_cast<Eigen::Index>(offsets_[t] + k));
      if (c == 0.0) continue;
      const auto o = s.occupation(k);
      if (o[i] == 0) continue;
      std::copy(o.begin(), o.end(), occ.begin());
      const double amp = std::sqrt(occ[i]);
      occ[i] -= 1;
      out(static_cast<Eigen::Index>(offsets_[t - 1] + sectors_[t - 1].index(occ))) += amp * c;
    }
  }
}

Eigen::VectorXd TruncatedFock::truncate(const Eigen::VectorXd& in, int level) const {
  Eigen::VectorXd out = in;
  if (level < L_) out.tail(static_cast<Eigen::Index>(dim() - offsets_[static_cast<std::size_t>(level) + 1])).setZero();
  return out;
}

}  // namespace gpbog
