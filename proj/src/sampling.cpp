#include "heatbloch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace heatbloch {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

struct LineResult {
  double position;
  double value;
};

// Golden-section search for a maximum of g on [a, b]; endpoints are evaluated too.
LineResult golden_maximize(const std::function<double(double)>& g, double a, double b, int iterations,
                           std::size_t& evaluations) {
  constexpr double kInvPhi = 0.6180339887498949;
  LineResult best{a, g(a)};
  const double gb = g(b);
  evaluations += 2;
  if (gb > best.value) best = {b, gb};
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = g(c);
  double fd = g(d);
  evaluations += 2;
  for (int it = 0; it < iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = g(d);
    }
    ++evaluations;
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

}  // namespace

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

BallSampler::BallSampler(int dim, std::uint64_t seed) : dim_(dim) {
  require(dim >= 1 && dim <= kMaxSpatialDim + 1, "sampling", "sampler dimension out of range");
  const int normals = 2 * ((dim + 1) / 2);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < normals + 1; ++i) {
    bases_.push_back(kPrimes[i]);
    shift_.push_back(unit_double(rng()));
  }
}

Vector BallSampler::unit_point(std::size_t index) const {
  Vector p = Vector::Zero(dim_);
  if (index == 0) return p;
  auto coord = [&](std::size_t j) {
    double u = radical_inverse(index, bases_[j]) + shift_[j];
    u -= std::floor(u);
    return u;
  };
  // Box-Muller on coordinate pairs gives an isotropic direction.
  const int pairs = static_cast<int>(bases_.size() - 1) / 2;
  std::vector<double> g;
  for (int k = 0; k < pairs; ++k) {
    const double u1 = std::max(coord(2 * k), 0x1.0p-60);
    const double u2 = coord(2 * k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g.push_back(r * std::cos(2.0 * std::numbers::pi * u2));
    g.push_back(r * std::sin(2.0 * std::numbers::pi * u2));
  }
  for (int i = 0; i < dim_; ++i) p(i) = g[i];
  const double norm = p.norm();
  if (norm == 0.0) return p;
  const double radius = std::pow(coord(bases_.size() - 1), 1.0 / dim_);
  return p * (radius / norm);
}

Vector to_spherical(const Vector& v) {
  const Eigen::Index d = v.size();
  Vector s(d);
  s(0) = v.norm();
  for (Eigen::Index k = 0; k + 2 < d; ++k) s(k + 1) = std::atan2(v.tail(d - k - 1).norm(), v(k));
  if (d >= 2) s(d - 1) = std::atan2(v(d - 1), v(d - 2));
  return s;
}

Vector from_spherical(const Vector& s) {
  const Eigen::Index d = s.size();
  Vector v(d);
  double prod = s(0);
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    v(k) = prod * std::cos(s(k + 1));
    prod *= std::sin(s(k + 1));
  }
  v(d - 1) = prod;
  return v;
}

BallOptimum maximize_on_ball(const std::function<double(const Vector&)>& f, const Vector& center,
                             double radius, const SamplingOptions& opts) {
  require(radius > 0.0, "sampling", "ball radius must be positive");
  require(opts.budget >= 1, "sampling", "sample budget must be >= 1");
  const int dim = static_cast<int>(center.size());
  const BallSampler sampler(dim, opts.seed);

  std::vector<double> values(opts.budget);
  parallel_for(opts.budget, opts.threads,
               [&](std::size_t i) { values[i] = f(center + radius * sampler.unit_point(i)); });

  BallOptimum best;
  best.sample_index = 0;
  best.value = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > best.value) {
      best.value = values[i];
      best.sample_index = i;
    }
  }
  best.point = center + radius * sampler.unit_point(best.sample_index);
  best.evaluations = opts.budget;
  if (dim < 2 || opts.polish_sweeps <= 0) return best;

  Vector sph = to_spherical(best.point - center);
  const double spacing = 2.0 * std::pow(static_cast<double>(opts.budget), -1.0 / dim);
  Vector window(dim);
  window(0) = spacing * radius;
  for (int j = 1; j < dim; ++j) window(j) = spacing * std::numbers::pi;

  for (int sweep = 0; sweep < opts.polish_sweeps; ++sweep) {
    bool improved = false;
    for (int j = 0; j < dim; ++j) {
      double lo = sph(j) - window(j);
      double hi = sph(j) + window(j);
      if (j == 0) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, radius);
      } else if (j + 1 < dim) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, std::numbers::pi);
      }
      if (!(hi > lo)) continue;
      Vector trial = sph;
      auto g = [&](double s) {
        trial(j) = s;
        return f(center + from_spherical(trial));
      };
      const LineResult line = golden_maximize(g, lo, hi, opts.golden_iterations, best.evaluations);
      if (line.value > best.value) {
        best.value = line.value;
        sph(j) = line.position;
        improved = true;
      }
    }
    window *= improved ? 0.5 : 0.25;
  }
  best.point = center + from_spherical(sph);
  return best;
}

}  // namespace heatbloch
