#pragma once

#include "heatbloch/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace testing_support {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// det by the Leibniz permutation sum, in long double.
inline long double leibniz_det(const heatbloch::Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long double total = 0.0L;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    long double prod = inversions % 2 ? -1.0L : 1.0L;
    for (int i = 0; i < n; ++i) prod *= static_cast<long double>(a(i, perm[i]));
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Coefficients c_0..c_n of det(mu I - B) = sum c_k mu^{n-k}, by Faddeev-LeVerrier.
inline std::vector<long double> char_poly(const LMatrix& b) {
  const int n = static_cast<int>(b.rows());
  std::vector<long double> c(n + 1, 0.0L);
  c[0] = 1.0L;
  LMatrix m = LMatrix::Zero(n, n);
  const LMatrix id = LMatrix::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    m = b * m + c[k - 1] * id;
    c[k] = -(b * m).trace() / k;
  }
  return c;
}

inline long double poly_eval(const std::vector<long double>& c, long double x, long double* deriv) {
  long double p = 0.0L, dp = 0.0L;
  for (long double ck : c) {
    dp = dp * x + p;
    p = p * x + ck;
  }
  if (deriv) *deriv = dp;
  return p;
}

/// Newton from a point outside the real root set converges monotonically to the nearest extreme root.
inline long double extreme_root(const std::vector<long double>& c, long double start) {
  long double x = start;
  for (int it = 0; it < 2000; ++it) {
    long double dp = 0.0L;
    const long double p = poly_eval(c, x, &dp);
    if (dp == 0.0L) break;
    const long double next = x - p / dp;
    if (next == x) break;
    x = next;
  }
  return x;
}

struct SpectralOracle {
  long double lambda_min;
  long double lambda_max;
  long double det;
};

/// Extreme singular values from the roots of the characteristic polynomial of A^T A.
inline SpectralOracle brute_force_spectrum(const heatbloch::Matrix& a) {
  const LMatrix al = a.cast<long double>();
  const LMatrix b = al.transpose() * al;
  const std::vector<long double> c = char_poly(b);
  // all eigenvalues lie in [0, trace]
  const long double hi = extreme_root(c, b.trace() + 1.0L);
  const long double lo = extreme_root(c, -1e-3L);
  return {std::sqrt(std::max(lo, 0.0L)), std::sqrt(hi), leibniz_det(a)};
}

}  // namespace testing_support
