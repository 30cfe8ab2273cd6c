#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "gpbog/many_body.hpp"

namespace gpbog::testing {

inline Eigen::MatrixXd random_sym(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  return 0.5 * (A + A.transpose());
}

// Symmetric under particle exchange and (mq)↔(pr), not under m↔p alone.
inline InteractionTensor random_tensor(int M, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  InteractionTensor W(M);
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < M; ++q)
      for (int p = 0; p < M; ++p)
        for (int r = 0; r < M; ++r) W(m, q, p, r) = g(rng);
  InteractionTensor S(M);
  for (int m = 0; m < M; ++m)
    for (int q = 0; q < M; ++q)
      for (int p = 0; p < M; ++p)
        for (int r = 0; r < M; ++r) S(m, q, p, r) = 0.25 * (W(m, q, p, r) + W(q, m, r, p) + W(p, r, m, q) + W(r, p, q, m));
  return S;
}

inline ManyBodyProblem random_problem(int M, int N, std::mt19937_64& rng) {
  ManyBodyProblem p;
  p.one_body = random_sym(M, rng);
  p.two_body = random_tensor(M, rng);
  p.N = N;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(M);
  std::normal_distribution<double> g;
  for (int i = 0; i < M; ++i) phi(i) = g(rng);
  p.condensate = phi.normalized();
  return p;
}

// First-quantized H on (C^M)^{⊗N}, restricted to the symmetric subspace.
inline double first_quantized_ground(const ManyBodyProblem& p) {
  const int M = p.modes(), N = p.N;
  int D = 1;
  for (int i = 0; i < N; ++i) D *= M;
  auto digits = [&](int s) {
    std::vector<int> d(N);
    for (int i = N - 1; i >= 0; --i) {
      d[i] = s % M;
      s /= M;
    }
    return d;
  };
  auto number = [&](const std::vector<int>& d) {
    int s = 0;
    for (int v : d) s = s * M + v;
    return s;
  };
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
  for (int col = 0; col < D; ++col) {
    const auto in = digits(col);
    for (int i = 0; i < N; ++i)
      for (int m = 0; m < M; ++m) {
        auto out = in;
        out[i] = m;
        H(number(out), col) += p.one_body(m, in[i]);
      }
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        for (int m = 0; m < M; ++m)
          for (int q = 0; q < M; ++q) {
            auto out = in;
            out[i] = m;
            out[j] = q;
            H(number(out), col) += p.two_body(m, q, in[i], in[j]);
          }
  }
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(D, D);
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  int nperm = 0;
  do {
    ++nperm;
    for (int col = 0; col < D; ++col) {
      const auto in = digits(col);
      std::vector<int> out(N);
      for (int i = 0; i < N; ++i) out[perm[i]] = in[i];
      P(number(out), col) += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  P /= nperm;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(P);
  std::vector<int> keep;
  for (int i = 0; i < D; ++i)
    if (ps.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXd S(D, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) S.col(static_cast<Eigen::Index>(k)) = ps.eigenvectors().col(keep[k]);
  const Eigen::MatrixXd Hs = S.transpose() * H * S;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (Hs + Hs.transpose())).eigenvalues()(0);
}

}  // namespace gpbog::testing
