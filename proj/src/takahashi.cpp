#include "heatbloch/takahashi.hpp"

#include "heatbloch/linalg.hpp"

#include <cmath>

namespace heatbloch {

BallMaxRecord ball_max(const MapView& F, double r, const SamplingOptions& opts) {
  require(r > 0.0 && r <= 1.0, "takahashi", "ball radius must lie in (0, 1]");
  require(opts.budget >= 1, "takahashi", "sample budget must be >= 1");
  const Vector origin = Vector::Zero(F.size());
  const auto abs_det = [&F](const Vector& z) { return std::abs(F.jacobian(z).determinant()); };
  const auto frob = [&F](const Vector& z) { return F.jacobian(z).norm(); };

  const BallOptimum det_opt = maximize_on_ball(abs_det, origin, r, opts);
  const BallOptimum frob_opt = maximize_on_ball(frob, origin, r, opts);

  BallMaxRecord rec;
  rec.r = r;
  rec.M = det_opt.value;
  rec.beta = det_opt.point;
  rec.max_frob = std::max(frob_opt.value, frob(rec.beta));
  rec.sample_count = opts.budget;
  return rec;
}

std::vector<double> uniform_radii(std::size_t n) {
  std::vector<double> radii;
  for (std::size_t i = 0; i < n; ++i) radii.push_back(static_cast<double>(i + 1) / static_cast<double>(n + 1));
  return radii;
}

KEstimate estimate_K(const MapView& F, const std::vector<double>& radii, const SamplingOptions& opts) {
  require(!radii.empty(), "takahashi", "estimate_K needs a nonempty radii grid");
  KEstimate est;
  for (double r : radii) {
    const BallMaxRecord rec = ball_max(F, r, opts);
    if (!(rec.M >= 1e-14))
      throw NumericalFailure("takahashi", "max |det F'| below 1e-14 at radius " + std::to_string(r));
    const double ratio = rec.max_frob / std::pow(rec.M, 1.0 / F.size());
    est.per_radius.push_back({r, rec.M, rec.max_frob, ratio});
    est.K = std::max(est.K, ratio);
  }
  return est;
}

WuReport check_wu_inequalities(const MapView& F, const BallMaxRecord& rec, double K) {
  require(K > 0.0, "takahashi", "K must be positive");
  const int m = F.dim();
  const Matrix J = F.jacobian(rec.beta);
  const SpectralSummary s = spectral_summary(J);
  const double det_root = std::pow(std::abs(s.det), 1.0 / (m + 1));

  WuReport w;
  w.lambda = s.lambda_min;
  w.Lambda = s.lambda_max;
  w.det = s.det;
  w.K = K;
  w.spread_m_slack = std::pow(K, m) * s.lambda_min - s.lambda_max;
  w.spread_slack = std::pow(K, m + 1) * s.lambda_min - s.lambda_max;
  w.small_eigen_slack = s.lambda_min - std::pow(K, -(m + 1)) * det_root;
  w.k_admissible = s.frobenius <= K * det_root * (1.0 + 1e-12);
  return w;
}

}  // namespace heatbloch
