#include "heatbloch/sampling.hpp"
#include "support/maps.hpp"

#include <doctest.h>

#include <atomic>
#include <numbers>

using namespace heatbloch;
using namespace testing_support;

TEST_CASE("radical inverse") {
  CHECK(radical_inverse(0, 2) == 0.0);
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(6, 2) == 0.375);
  CHECK(radical_inverse(5, 3) == doctest::Approx(2.0 / 3.0 + 1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("ball sampler") {
  for (int dim = 2; dim <= 9; ++dim) {
    const BallSampler a(dim, 17), b(dim, 17), c(dim, 18);
    CHECK(a.unit_point(0) == Vector::Zero(dim));
    bool differs = false;
    for (std::size_t i = 0; i < 2000; ++i) {
      const Vector p = a.unit_point(i);
      CHECK(p.norm() <= 1.0);
      CHECK(p == b.unit_point(i));
      if (i > 0 && p != c.unit_point(i)) differs = true;
    }
    CHECK(differs);
  }
  // Points fill the ball: the fraction inside radius 1/2 approaches 2^-dim.
  const BallSampler s(3, 0);
  int inner = 0;
  const int n = 20000;
  for (int i = 1; i <= n; ++i) inner += s.unit_point(i).norm() <= 0.5;
  CHECK(static_cast<double>(inner) / n == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("spherical coordinates round trip") {
  std::mt19937_64 rng(3);
  for (int dim = 2; dim <= 9; ++dim)
    for (int i = 0; i < 50; ++i) {
      const Vector v = random_in_ball(rng, dim, 1.0);
      const Vector s = to_spherical(v);
      CHECK(s(0) == doctest::Approx(v.norm()).epsilon(1e-15));
      CHECK((from_spherical(s) - v).norm() < 1e-14);
    }
}

TEST_CASE("maximize on ball") {
  SamplingOptions opts;
  opts.budget = 512;
  const Vector center = Vector::Zero(3);

  SUBCASE("interior peak") {
    const Vector peak = make_point({0.2, -0.3}, 0.1);
    const auto f = [&peak](const Vector& z) { return -(z - peak).squaredNorm(); };
    const BallOptimum o = maximize_on_ball(f, center, 0.8, opts);
    CHECK((o.point - peak).norm() < 1e-6);
    CHECK(o.value > -1e-12);
  }
  SUBCASE("boundary maximum of a linear function") {
    const Vector a = make_point({1.0, 2.0}, -2.0);
    const auto f = [&a](const Vector& z) { return a.dot(z); };
    const BallOptimum o = maximize_on_ball(f, center, 0.5, opts);
    CHECK(o.value == doctest::Approx(0.5 * a.norm()).epsilon(1e-10));
    CHECK(o.point.norm() <= 0.5 + 1e-15);
  }
  SUBCASE("ties go to the smallest index") {
    const BallOptimum o = maximize_on_ball([](const Vector&) { return 1.0; }, center, 0.5, opts);
    CHECK(o.sample_index == 0);
    CHECK(o.point == center);
  }
  SUBCASE("off-centre ball") {
    const Vector c = make_point({0.5, 0.0}, 0.0);
    const auto f = [](const Vector& z) { return z(2); };
    const BallOptimum o = maximize_on_ball(f, c, 0.25, opts);
    CHECK(o.value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK((o.point - c).norm() <= 0.25 + 1e-15);
  }
  SUBCASE("thread count does not change the result") {
    const auto f = [](const Vector& z) { return std::sin(5 * z(0)) * std::cos(3 * z(1)) + z(2) * z(2); };
    const BallOptimum one = maximize_on_ball(f, center, 1.0, opts);
    opts.threads = 5;
    const BallOptimum many = maximize_on_ball(f, center, 1.0, opts);
    CHECK(one.value == many.value);
    CHECK(one.point == many.point);
    CHECK(one.sample_index == many.sample_index);
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> out(1000, -1);
  parallel_for(out.size(), 7, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw InvalidInput("test", "boom");
                               }),
                  InvalidInput);
  std::atomic<int> count{0};
  parallel_for(0, 4, [&](std::size_t) { ++count; });
  CHECK(count == 0);
}

TEST_CASE("seed mixing") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(unit_double(~0ULL) < 1.0);
  CHECK(unit_double(0) == 0.0);
}
