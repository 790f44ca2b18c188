#include "heatbloch/linalg.hpp"
#include "support/maps.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace heatbloch;
using namespace testing_support;

TEST_CASE("spectral summary of simple matrices") {
  const SpectralSummary id = spectral_summary(Matrix::Identity(2, 2));
  CHECK(id.lambda_min == 1.0);
  CHECK(id.lambda_max == 1.0);
  CHECK(id.det == 1.0);
  CHECK(id.frobenius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  Matrix d(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  const SpectralSummary s = spectral_summary(d);
  CHECK(s.lambda_min == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.lambda_max == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.det == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.operator_norm == s.lambda_max);
}

TEST_CASE("spectral summary matches the characteristic-polynomial oracle") {
  std::mt19937_64 rng(42);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 300; ++trial) {
      const Matrix A = random_matrix(rng, n);
      const SpectralSummary s = spectral_summary(A);
      const SpectralOracle o = brute_force_spectrum(A);
      CHECK(std::abs(s.lambda_min - static_cast<double>(o.lambda_min)) < 1e-10);
      CHECK(std::abs(s.lambda_max - static_cast<double>(o.lambda_max)) < 1e-10);
      CHECK(std::abs(s.det - static_cast<double>(o.det)) < 1e-10);
    }
  }
}

TEST_CASE("singular values have relative accuracy near 1e-12 for graded matrices") {
  // diag(10^-k) scaled by an orthogonal similarity; singular values are known exactly.
  for (int n = 2; n <= 9; ++n) {
    Vector sv(n);
    for (int i = 0; i < n; ++i) sv(i) = std::pow(10.0, -static_cast<double>(i) / 2.0);
    std::mt19937_64 rng(n);
    const Eigen::HouseholderQR<Matrix> q1(random_matrix(rng, n)), q2(random_matrix(rng, n));
    const Matrix U = q1.householderQ(), V = q2.householderQ();
    const Matrix A = U * sv.asDiagonal() * V.transpose();
    const Vector got = singular_values(A);
    for (int i = 0; i < n; ++i) CHECK(std::abs(got(i) - sv(i)) <= 1e-12 * sv(0) * n);
  }
}

TEST_CASE("spectral invariants on random matrices") {
  std::mt19937_64 rng(9);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Matrix A = random_matrix(rng, n);
      const SpectralSummary s = spectral_summary(A);
      CHECK(s.operator_norm == s.lambda_max);
      CHECK(std::pow(s.lambda_min, n) - std::abs(s.det) <= 1e-12);
      CHECK(std::abs(s.det) - std::pow(s.lambda_max, n) <= 1e-12);
      CHECK(s.operator_norm - s.frobenius <= 1e-12);
      CHECK(s.frobenius - std::sqrt(n) * s.operator_norm <= 1e-12);
      if (std::abs(s.det) > 1e-6) {
        const SpectralSummary inv = spectral_summary(invert(A));
        CHECK(s.lambda_min * inv.lambda_max == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("inversion") {
  CHECK(invert(Matrix::Identity(3, 3)) == Matrix::Identity(3, 3));
  Matrix d(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  Matrix expect(2, 2);
  expect << 0.5, 0.0, 0.0, 2.0;
  CHECK(invert(d).isApprox(expect, 1e-15));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix A = random_matrix(rng, 3) + 2.0 * Matrix::Identity(3, 3);
    const Matrix Ai = invert(A);
    CHECK((A * Ai - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(spectral_summary(Ai).operator_norm * spectral_summary(A).lambda_min == doctest::Approx(1.0).epsilon(1e-10));
  }

  Matrix sing(2, 2);
  sing << 1.0, 2.0, 0.5, 1.0;
  try {
    invert(sing);
    FAIL("expected SingularMatrix");
  } catch (const SingularMatrix& e) {
    CHECK(e.lambda_min() < 1e-14);
    CHECK(e.det() == 0.0);
  }
  Matrix tiny = Matrix::Identity(2, 2) * 1e-8;
  CHECK_THROWS_AS(invert(tiny), SingularMatrix);
}
