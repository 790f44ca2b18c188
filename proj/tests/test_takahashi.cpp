#include "heatbloch/linalg.hpp"
#include "heatbloch/takahashi.hpp"
#include "support/maps.hpp"

#include <doctest.h>

using namespace heatbloch;
using namespace testing_support;

namespace {

// max |det F'| over a polar grid of the closed disk of radius r (m = 1), about 10^6 points.
double dense_grid_max_det(const HeatMap& F, double r) {
  double best = 0.0;
  const int n_rho = 1000, n_theta = 1000;
  for (int i = 0; i <= n_rho; ++i) {
    const double rho = r * i / n_rho;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n_theta;
      best = std::max(best, std::abs(F.jacobian(make_point({rho * std::cos(th)}, rho * std::sin(th))).determinant()));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("ball maxima of constant-det and linear maps") {
  SamplingOptions opts;
  opts.budget = 256;
  for (int m = 1; m <= 3; ++m) {
    const HeatMap F = identity_like(m);
    for (double r : {0.1, 0.5, 1.0}) {
      const BallMaxRecord rec = ball_max(F, r, opts);
      CHECK(rec.M == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rec.beta.norm() <= r);
    }
  }
  Matrix A(3, 3);
  A << 2.0, 0.1, 0.0, -0.3, 1.0, 0.4, 0.0, 0.2, 0.7;
  const BallMaxRecord rec = ball_max(MapView::linear(A), 0.6, opts);
  CHECK(rec.M == doctest::Approx(std::abs(A.determinant())).epsilon(1e-14));
  CHECK_THROWS_AS(ball_max(identity_like(1), 0.0, opts), InvalidInput);
  CHECK_THROWS_AS(ball_max(identity_like(1), 1.5, opts), InvalidInput);
}

TEST_CASE("cubic map ball maximum against a dense grid") {
  const HeatMap F = cubic_map();
  const BallMaxRecord rec = ball_max(F, 0.5, SamplingOptions{});
  const double oracle = dense_grid_max_det(F, 0.5);
  CHECK(std::abs(rec.M - oracle) / oracle < 1e-3);
  CHECK(rec.M >= oracle - 1e-12);
  CHECK(std::abs(std::abs(F.jacobian(rec.beta).determinant()) - rec.M) <= 1e-12);
  CHECK(rec.beta.norm() <= 0.5);
}

TEST_CASE("ball maxima are monotone in r and thread independent") {
  for (const auto& name : {"cubic", "vardet_m1", "kernel_m1", "kernel_m2"}) {
    const HeatMap F = normalize(shipped_map(name));
    SamplingOptions opts;
    opts.budget = 1024;
    double prev = 0.0;
    for (double r : uniform_radii(12)) {
      const BallMaxRecord rec = ball_max(F, r, opts);
      CHECK(rec.M + 1e-12 >= prev);
      CHECK(std::abs(std::abs(F.jacobian(rec.beta).determinant()) - rec.M) <= 1e-12 * std::max(1.0, rec.M));
      prev = rec.M;
    }
    SamplingOptions par = opts;
    par.threads = 3;
    const BallMaxRecord a = ball_max(F, 0.7, opts), b = ball_max(F, 0.7, par);
    CHECK(a.M == b.M);
    CHECK(a.beta == b.beta);
    CHECK(a.max_frob == b.max_frob);
  }
}

TEST_CASE("Takahashi constant estimates") {
  SamplingOptions opts;
  opts.budget = 512;

  SUBCASE("identity-like map tends to sqrt(m+1) at small radii") {
    for (int m = 1; m <= 3; ++m) {
      const KEstimate est = estimate_K(identity_like(m), {1e-4, 1e-2, 0.5}, opts);
      CHECK(est.per_radius[0].ratio == doctest::Approx(std::sqrt(m + 1.0)).epsilon(1e-4));
      for (const auto& p : est.per_radius) CHECK(p.ratio >= std::sqrt(m + 1.0) - 1e-12);
    }
  }
  SUBCASE("linear map has a constant ratio") {
    Matrix A(2, 2);
    A << 2.0, 0.0, 0.0, 0.5;
    const double expect = A.norm() / std::sqrt(std::abs(A.determinant()));
    const KEstimate est = estimate_K(MapView::linear(A), uniform_radii(8), opts);
    CHECK(std::abs(est.K - expect) < 1e-10);
    for (const auto& p : est.per_radius) CHECK(std::abs(p.ratio - expect) < 1e-10);
  }
  SUBCASE("scale invariance") {
    const HeatMap F = shipped_map("kernel_m1");
    const double k1 = estimate_K(F, uniform_radii(8), opts).K;
    const double k2 = estimate_K(F.scaled(-3.7), uniform_radii(8), opts).K;
    CHECK(std::abs(k1 - k2) < 1e-10);
  }
  SUBCASE("cubic map stable under budget doubling") {
    SamplingOptions a, b;
    a.budget = 4096;
    b.budget = 8192;
    const double ka = estimate_K(cubic_map(), uniform_radii(32), a).K;
    const double kb = estimate_K(cubic_map(), uniform_radii(32), b).K;
    CHECK(std::abs(ka - kb) / kb < 1e-2);
  }
  SUBCASE("degenerate determinant") {
    const HeatMap S(1, {CaloricComponent(1, {PolyTerm{1.0, {1}}}), CaloricComponent(1, {PolyTerm{2.0, {1}}})});
    CHECK_THROWS_AS(estimate_K(S, {0.5}, opts), NumericalFailure);
    CHECK_THROWS_AS(estimate_K(cubic_map(), {}, opts), InvalidInput);
  }
}

TEST_CASE("eigenvalue inequalities") {
  SUBCASE("identity Jacobian") {
    for (int m = 1; m <= 3; ++m) {
      BallMaxRecord rec;
      rec.beta = Vector::Zero(m + 1);
      const WuReport w = check_wu_inequalities(identity_like(m), rec, std::sqrt(m + 1.0));
      CHECK(w.spread_m_slack > 0.0);
      CHECK(w.spread_slack > 0.0);
      CHECK(w.small_eigen_slack > 0.0);
      CHECK(w.all_hold());
    }
  }
  SUBCASE("diag(2, 1/2) with K = ||A||") {
    Matrix A(2, 2);
    A << 2.0, 0.0, 0.0, 0.5;
    BallMaxRecord rec;
    rec.beta = Vector::Zero(2);
    const double K = A.norm();
    const WuReport w = check_wu_inequalities(MapView::linear(A), rec, K);
    // direct arithmetic: lambda = 1/2, Lambda = 2, det = 1
    CHECK(w.spread_slack == doctest::Approx(K * K * 0.5 - 2.0));
    CHECK(w.small_eigen_slack == doctest::Approx(0.5 - 1.0 / (K * K)));
    CHECK(w.holds());
    CHECK(w.k_admissible);
    // K^m lambda = K/2 < 2 = Lambda: the m-power spread fails here
    CHECK(w.spread_m_slack == doctest::Approx(K * 0.5 - 2.0));
    CHECK(w.spread_m_slack < 0.0);
  }
  SUBCASE("cubic map at its argmax") {
    const HeatMap F = cubic_map();
    const BallMaxRecord rec = ball_max(F, 0.5, SamplingOptions{});
    const double K = estimate_K(F, {0.5}, SamplingOptions{}).K;
    const WuReport w = check_wu_inequalities(F, rec, K);
    CHECK(w.holds());
    CHECK(w.all_hold());
    CHECK(w.k_admissible);
  }
}
