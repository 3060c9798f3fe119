#pragma once

// Finite truncations of the operator (Tu)_h = sum_k u_k (C(k, 2h) - C(k, 2h - 1)),
// h = 1..N, k = 2, 4, ..., 2N. All arithmetic is exact.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/profiles.hpp"
#include "zoll/rational.hpp"

namespace zoll {

inline constexpr int kMaxRigidityOrder = 256;

inline BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

struct RigidityMatrix {
  int N = 0;
  std::vector<std::vector<BigInt>> m;  ///< m[h-1][j-1] is the entry at row h, column k = 2j

  const BigInt& at(int h, int k) const { return m.at(std::size_t(h - 1)).at(std::size_t(k / 2 - 1)); }
  BigInt& at(int h, int k) { return m.at(std::size_t(h - 1)).at(std::size_t(k / 2 - 1)); }
};

inline RigidityMatrix rigidity_matrix(int N) {
  if (N < 1 || N > kMaxRigidityOrder) {
    throw InvalidInput("truncation order must be in [1, " + std::to_string(kMaxRigidityOrder) + "], got " +
                       std::to_string(N));
  }
  RigidityMatrix M;
  M.N = N;
  M.m.assign(std::size_t(N), std::vector<BigInt>(std::size_t(N)));
  for (int h = 1; h <= N; ++h) {
    for (int j = 1; j <= N; ++j) {
      int k = 2 * j;
      M.at(h, k) = binomial(k, 2 * h) - binomial(k, 2 * h - 1);
    }
  }
  return M;
}

/// Rank by fraction-free (Bareiss) elimination.
inline int exact_rank(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t cc = c + 1; cc < cols; ++cc) {
        a[r][cc] = (a[rank][c] * a[r][cc] - a[r][c] * a[rank][cc]) / prev;
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return int(rank);
}

struct StructureReport {
  int N = 0;
  bool upper_triangular = true;
  bool diagonal_ok = true;
  bool kernel_trivial = true;
  int rank = 0;
  std::vector<std::string> failures;

  bool pass() const { return upper_triangular && diagonal_ok && kernel_trivial; }
};

/// Checks M[h][k] = 0 for k < 2h, M[h][2h] = 1 - 2h, and full rank.
inline StructureReport check_structure(const RigidityMatrix& M) {
  StructureReport r;
  r.N = M.N;
  for (int h = 1; h <= M.N; ++h) {
    for (int k = 2; k < 2 * h; k += 2) {
      if (M.at(h, k) != 0) {
        r.upper_triangular = false;
        r.failures.push_back("M[" + std::to_string(h) + "][" + std::to_string(k) + "] = " + M.at(h, k).str() +
                             " below the diagonal");
      }
    }
    if (M.at(h, 2 * h) != 1 - 2 * h) {
      r.diagonal_ok = false;
      r.failures.push_back("M[" + std::to_string(h) + "][" + std::to_string(2 * h) + "] = " +
                           M.at(h, 2 * h).str() + ", expected " + std::to_string(1 - 2 * h));
    }
  }
  r.rank = exact_rank(M.m);
  r.kernel_trivial = r.rank == M.N;
  if (!r.kernel_trivial) r.failures.push_back("rank " + std::to_string(r.rank) + " < " + std::to_string(M.N));
  return r;
}

inline std::vector<BigRational> apply(const RigidityMatrix& M, const std::vector<BigRational>& u) {
  if (int(u.size()) != M.N) throw InvalidInput("vector length does not match the truncation order");
  std::vector<BigRational> out(std::size_t(M.N));
  for (std::size_t h = 0; h < out.size(); ++h) {
    for (std::size_t j = 0; j < u.size(); ++j) out[h] += BigRational(M.m[h][j]) * u[j];
  }
  return out;
}

/// a_k = f^(k)(1)/(2 k!) for k = 2, 4, ..., 2N, limited by the jet order.
inline std::vector<double> endpoint_coefficients(const DeformationProfile& f, int N) {
  if (N < 1 || 2 * N > kMaxJetOrder) throw DomainError("endpoint coefficients need 2N <= " + std::to_string(kMaxJetOrder));
  Jet j = eval_jet(f.fn, 1.0, 2 * N);
  std::vector<double> a;
  for (int k = 2; k <= 2 * N; k += 2) a.push_back(j[k] / (2 * std::tgamma(k + 1.0)));
  return a;
}

}  // namespace zoll
