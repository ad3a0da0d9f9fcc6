#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace aggtree {

template <typename Scalar>
struct Assignment {
  /// row_to_col[r] is the column matched to row r, or -1 if r is unmatched.
  std::vector<int> row_to_col;
  Scalar total{0};
};

/// Maximum-weight partial assignment of rows to columns: every row and every
/// column is used at most once and unmatched rows score zero. Weights must be
/// non-negative. Shortest augmenting path Hungarian method, O(n^2 m) with
/// n = min(rows, cols).
///
/// Zero-weight matches are reported as unmatched.
template <typename Derived>
Assignment<typename Derived::Scalar> max_weight_assignment(const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  const int rows = static_cast<int>(weights.rows());
  const int cols = static_cast<int>(weights.cols());

  Assignment<Scalar> result;
  result.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return result;

  // Orient so the smaller side is the one that must be fully matched, and
  // give each of its entries a private zero-weight dummy partner.
  const bool transposed = rows > cols;
  const int n = transposed ? cols : rows;
  const int m_real = transposed ? rows : cols;
  const int m = m_real + n;
  auto weight = [&](int a, int b) -> Scalar {
    if (b >= m_real) return Scalar(0);
    return transposed ? weights(b, a) : weights(a, b);
  };

  // 1-indexed potentials as in the classical formulation; cost = -weight.
  const Scalar inf = std::numeric_limits<Scalar>::max() / 4;
  std::vector<Scalar> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  std::vector<Scalar> minv(m + 1);
  std::vector<char> used(m + 1);
  for (int a = 1; a <= n; ++a) {
    match[0] = a;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int a0 = match[j0];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Scalar cur = -weight(a0 - 1, j - 1) - u[a0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= m_real; ++j) {
    if (match[j] == 0) continue;
    const int a = match[j] - 1;
    const int b = j - 1;
    const Scalar w = weight(a, b);
    if (w == Scalar(0)) continue;
    const int row = transposed ? b : a;
    const int col = transposed ? a : b;
    result.row_to_col[row] = col;
    result.total += w;
  }
  return result;
}

}  // namespace aggtree
