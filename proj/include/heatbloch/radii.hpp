#pragma once

#include "heatbloch/caloric.hpp"
#include "heatbloch/takahashi.hpp"

#include <functional>
#include <vector>

namespace heatbloch {

/// r_gamma = 1 / prod_{j>=1} (1 + gamma^{-j}).
double r_from_gamma(double gamma);

/// Inverse of r_from_gamma by bisection on the increasing map gamma -> r_gamma.
double gamma_from_r0(double r0);

/// exp(-1/(g-1) + 1/(2(g^2-1)) - 1/(3(g^3-1))) <= r_from_gamma(g).
double r_gamma_lower_bound(double gamma);

using BallMaxOracle = std::function<BallMaxRecord(double r)>;

struct SequenceOptions {
  double ratio_tol = 1e-8;        // relative tolerance on (M(r_n)/M(r_{n-1}))^{1/(m+1)} = gamma^4
  double monotone_tol = 1e-2;     // relative drop of M across radii tolerated before failing
  std::size_t max_length = 64;
  int max_bisections = 200;
};

/// Maximal radii r_0 = r_gamma < r_1 < ... < r_l and factors eps_j with
/// r_{j+1} = (1 + eps_j) r_j, eps_l = 1/r_l - 1 (so r_{l+1} = 1).
struct RadiiSequence {
  int m = 0;
  double gamma = 0.0;
  double r_gamma = 0.0;
  std::vector<double> r;
  std::vector<double> eps;
  std::vector<BallMaxRecord> records;  // envelope record attaining M(r_j)
  double M_one = 0.0;                  // M(1)
  int l = 0;

  double M(std::size_t j) const { return records[j].M; }
};

/// Signals a sampled M(r) that drops by more than the tolerance as r grows.
class NonMonotoneOracle : public NumericalFailure {
 public:
  NonMonotoneOracle(double r_small, double M_small, double r_large, double M_large);
};

RadiiSequence build_sequences(const HeatMap& F, double gamma, const BallMaxOracle& oracle,
                              const SequenceOptions& opts = {});

/// Diagnostics for the sequence invariants.
struct SequenceCheck {
  double product_error = 0.0;      // |r_0 prod (1 + eps_j) - 1|
  double max_ratio_error = 0.0;    // max_n |(M(r_{n+1})/M(r_n))^{1/(m+1)} - gamma^4|
  double final_ratio = 0.0;        // (M(1)/M(r_l))^{1/(m+1)}
  int eps_witness = -1;            // some k with eps_k >= gamma^{-(k+1)}, -1 if none
  bool recurrence_ok = true;       // r_j = (1 + eps_{j-1}) r_{j-1}
  double gamma4 = 0.0;

  bool ok(double product_tol = 1e-9, double ratio_tol = 1e-6) const {
    return product_error < product_tol && max_ratio_error <= ratio_tol && eps_witness >= 0 &&
           recurrence_ok && final_ratio <= gamma4 + ratio_tol;
  }
};

SequenceCheck check_sequence(const RadiiSequence& seq);

}  // namespace heatbloch
