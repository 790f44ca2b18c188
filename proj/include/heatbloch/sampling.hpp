#pragma once

#include "heatbloch/core.hpp"

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace heatbloch {

/// Shared configuration of the deterministic ball sampler.
struct SamplingOptions {
  std::size_t budget = 4096;
  std::uint64_t seed = 0;
  int threads = 1;
  int polish_sweeps = 12;
  int golden_iterations = 48;
};

/// Cranley-Patterson shifted Halton points mapped into the unit ball of R^dim.
/// Index 0 is always the centre; the shift is drawn from the seed.
class BallSampler {
 public:
  BallSampler(int dim, std::uint64_t seed);

  int dim() const { return dim_; }
  Vector unit_point(std::size_t index) const;

 private:
  int dim_;
  std::vector<int> bases_;
  std::vector<double> shift_;
};

/// Radical inverse of `index` in base `base`.
double radical_inverse(std::uint64_t index, int base);

struct BallOptimum {
  double value = 0.0;
  Vector point;
  std::size_t sample_index = 0;  // index of the best raw sample before polishing
  std::size_t evaluations = 0;
};

/// Maximum of f over the closed ball of `radius` about `center`: sampled, then
/// polished by coordinate-wise golden-section search in hyperspherical coordinates.
/// Ties among samples go to the smallest index.
BallOptimum maximize_on_ball(const std::function<double(const Vector&)>& f, const Vector& center,
                             double radius, const SamplingOptions& opts);

/// Hyperspherical coordinates (rho, theta_1, ..., theta_{d-1}) and back.
Vector to_spherical(const Vector& v);
Vector from_spherical(const Vector& s);

/// Runs fn(i) for i in [0, n) on up to `threads` workers; fn must only write
/// to slot i of its outputs. Rethrows the first exception raised.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(threads > 1 ? static_cast<std::size_t>(threads) : 1, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// splitmix64 step; derives independent per-item seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace heatbloch
