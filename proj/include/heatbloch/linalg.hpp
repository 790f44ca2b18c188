#pragma once

#include "heatbloch/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heatbloch {

/// lambda(A), Lambda(A): extreme singular values (square roots of the extreme
/// eigenvalues of A^T A). `frobenius` is ||A|| = sqrt(sum a_ij^2); `operator_norm` is |A|.
struct SpectralSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double det = 0.0;
  double frobenius = 0.0;
  double operator_norm = 0.0;
};

/// Threshold on |det A| below which `invert` refuses.
inline constexpr double kSingularDetThreshold = 1e-14;

/// Singular values by cyclic one-sided Jacobi rotations, which diagonalise A^T A
/// implicitly without forming it. Returned in descending order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> singular_values(
    const Eigen::MatrixBase<Derived>& a, int max_sweeps = 60) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u = a;
  const Eigen::Index n = u.cols();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar alpha = u.col(p).squaredNorm();
        const Scalar beta = u.col(q).squaredNorm();
        const Scalar gamma = u.col(p).dot(u.col(q));
        if (gamma == Scalar(0) || abs(gamma) <= eps * sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (abs(zeta) + sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
          const Scalar up = u(i, p);
          const Scalar uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sv = u.colwise().norm().transpose();
  std::sort(sv.data(), sv.data() + sv.size(), [](Scalar x, Scalar y) { return x > y; });
  return sv;
}

SpectralSummary spectral_summary(const Eigen::Ref<const Matrix>& a);

/// Raised by `invert` for |det A| <= 1e-14; carries the computed lambda(A).
class SingularMatrix : public NumericalFailure {
 public:
  SingularMatrix(double lambda_min, double det);
  double lambda_min() const noexcept { return lambda_min_; }
  double det() const noexcept { return det_; }

 private:
  double lambda_min_;
  double det_;
};

Matrix invert(const Eigen::Ref<const Matrix>& a);

}  // namespace heatbloch
