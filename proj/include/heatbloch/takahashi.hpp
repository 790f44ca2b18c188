#pragma once

#include "heatbloch/caloric.hpp"
#include "heatbloch/sampling.hpp"

#include <vector>

namespace heatbloch {

/// Sampled maximum M(r) of |det F'| over the closed ball of radius r, with a
/// maximising point beta and the sampled maximum of ||F'|| over the same ball.
struct BallMaxRecord {
  double r = 0.0;
  double M = 0.0;
  Vector beta;
  double max_frob = 0.0;
  std::size_t sample_count = 0;
};

BallMaxRecord ball_max(const MapView& F, double r, const SamplingOptions& opts);

struct RadiusRatio {
  double r = 0.0;
  double M = 0.0;
  double max_frob = 0.0;
  double ratio = 0.0;  // max_frob / M^{1/(m+1)}
};

/// Lower estimate of the constant K in max ||F'|| <= K max |det F'|^{1/(m+1)}.
struct KEstimate {
  double K = 0.0;
  std::vector<RadiusRatio> per_radius;
};

KEstimate estimate_K(const MapView& F, const std::vector<double>& radii, const SamplingOptions& opts);

/// (i+1)/(n+1) for i = 0..n-1.
std::vector<double> uniform_radii(std::size_t n);

/// Slacks of the eigenvalue inequalities at beta (positive = satisfied):
///   spread_m:    K^m lambda - Lambda
///   spread:      K^{m+1} lambda - Lambda
///   small_eigen: lambda - K^{-(m+1)} |det|^{1/(m+1)}
/// `spread_m` does not follow from the K-condition alone (diag(2, 1/2) breaks it),
/// so it is reported but excluded from `holds()`.
struct WuReport {
  double lambda = 0.0;
  double Lambda = 0.0;
  double det = 0.0;
  double K = 0.0;
  double spread_m_slack = 0.0;
  double spread_slack = 0.0;
  double small_eigen_slack = 0.0;
  bool k_admissible = true;  // ||F'(beta)|| <= K |det F'(beta)|^{1/(m+1)}

  bool holds(double tol = 1e-10) const { return spread_slack >= -tol && small_eigen_slack >= -tol; }
  bool all_hold(double tol = 1e-10) const { return holds(tol) && spread_m_slack >= -tol; }
};

WuReport check_wu_inequalities(const MapView& F, const BallMaxRecord& rec, double K);

}  // namespace heatbloch
