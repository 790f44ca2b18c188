#include "heatbloch/bounds.hpp"

#include "heatbloch/radii.hpp"

#include <cmath>

namespace heatbloch {

namespace {

void check_bound_inputs(int m, double K, double gamma, double sigma, double r_gamma, double a_m) {
  require(m >= 1 && m <= kMaxSpatialDim, "bounds", "m must lie in [1, 8]");
  require(K > 0.0, "bounds", "K must be positive");
  require(gamma > 1.0, "bounds", "gamma must exceed 1");
  require(sigma > 0.0 && sigma < 1.0, "bounds", "sigma must lie in (0, 1)");
  require(r_gamma > 0.0 && r_gamma <= 1.0, "bounds", "r_gamma must lie in (0, 1]");
  require(a_m >= 1.0, "bounds", "a_m must be >= 1");
}

// sigma (1 - sigma) / ((m+1) 2^{m+3} K^{2m+3})
double common_factor(int m, double K, double sigma) {
  return sigma * (1.0 - sigma) / ((m + 1) * std::ldexp(1.0, m + 3) * std::pow(K, 2 * m + 3));
}

double lower_bound_ratio(double gamma) { return r_gamma_lower_bound(gamma) / gamma; }

}  // namespace

double bound_interior(int m, double K, double gamma, double sigma, double r_gamma, double a_m, double M_rgamma) {
  check_bound_inputs(m, K, gamma, sigma, r_gamma, a_m);
  require(M_rgamma > 0.0, "bounds", "M(r_gamma) must be positive");
  const double g4 = std::pow(gamma, 4);
  return common_factor(m, K, sigma) / g4 * std::pow(r_gamma / a_m, 4) * std::pow(M_rgamma, 1.0 / (m + 1)) / g4;
}

double bound_origin(int m, double K, double gamma, double sigma, double r_gamma, double a_m, double M_rgamma) {
  check_bound_inputs(m, K, gamma, sigma, r_gamma, a_m);
  require(M_rgamma > 0.0, "bounds", "M(r_gamma) must be positive");
  return common_factor(m, K, sigma) / std::pow(M_rgamma, 1.0 / (m + 1)) * std::pow(r_gamma / a_m, 4);
}

WorstCaseBound worst_case_bound(int m, double K, double gamma, double sigma, double a_m) {
  const double r_exact = r_from_gamma(gamma);
  check_bound_inputs(m, K, gamma, sigma, r_exact, a_m);
  const double c = common_factor(m, K, sigma);
  return {c * std::pow(r_exact / (a_m * gamma), 4),
          c * std::pow(r_gamma_lower_bound(gamma) / (a_m * gamma), 4)};
}

OptimalConstants optimize_constants(std::size_t resolution) {
  require(resolution >= 100, "bounds", "resolution must be at least 100 points per axis");
  constexpr double kGammaMax = 100.0;
  const double step = (kGammaMax - 1.0) / static_cast<double>(resolution);
  std::size_t best = 1;
  double best_val = lower_bound_ratio(1.0 + step);
  for (std::size_t i = 2; i <= resolution; ++i) {
    const double v = lower_bound_ratio(1.0 + step * static_cast<double>(i));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement on the neighbouring grid cells.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 1.0 + step * static_cast<double>(best - 1);
  double b = std::min(kGammaMax, 1.0 + step * static_cast<double>(best + 1));
  if (a <= 1.0) a = 1.0 + 0.5 * step;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = lower_bound_ratio(c);
  double fd = lower_bound_ratio(d);
  while (b - a > 1e-12 * b) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = lower_bound_ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = lower_bound_ratio(d);
    }
  }
  OptimalConstants out;
  out.sigma_star = 0.5;
  out.gamma_star = 0.5 * (a + b);
  out.c_star = lower_bound_ratio(out.gamma_star);
  if (best_val > out.c_star) {
    out.gamma_star = 1.0 + step * static_cast<double>(best);
    out.c_star = best_val;
  }
  if (!(out.c_star >= 0.22))
    throw NumericalFailure("bounds", "optimised constant fell below 0.22; r_gamma_lower_bound is wrong");
  return out;
}

double theorem_bound(int m, double K, double a_m) {
  require(m >= 1 && K >= 1.0 && a_m >= 1.0, "bounds", "theorem_bound needs m >= 1, K >= 1, a_m >= 1");
  return std::pow(0.22, 4) / (std::ldexp(1.0, m + 5) * (m + 1) * std::pow(a_m, 4) * std::pow(K, 2 * m + 3));
}

double theorem_bound_stated(int m, double K, double a_m) {
  require(m >= 1 && K >= 1.0 && a_m >= 1.0, "bounds", "theorem_bound needs m >= 1, K >= 1, a_m >= 1");
  return std::pow(0.22, 4) / (std::ldexp(1.0, m + 5) * m * std::pow(a_m, 4) * std::pow(K, 2 * m + 3));
}

std::string_view to_string(Branch b) { return b == Branch::interior ? "interior" : "origin"; }

BlochBoundReport bloch_bound_report(int m, double K, double a_m, double gamma, double sigma, double r_gamma,
                                    double M_rgamma) {
  BlochBoundReport rep;
  rep.m = m;
  rep.K = K;
  rep.a_m = a_m;
  rep.gamma = gamma;
  rep.sigma = sigma;
  rep.r_gamma = r_gamma;
  rep.M_rgamma = M_rgamma;
  rep.bound_interior = bound_interior(m, K, gamma, sigma, r_gamma, a_m, M_rgamma);
  rep.bound_origin = bound_origin(m, K, gamma, sigma, r_gamma, a_m, M_rgamma);
  rep.bound_worst_case = common_factor(m, K, sigma) * std::pow(r_gamma / (a_m * gamma), 4);
  rep.theorem_bound = K >= 1.0 ? theorem_bound(m, K, a_m) : 0.0;
  rep.theorem_bound_stated = K >= 1.0 ? theorem_bound_stated(m, K, a_m) : 0.0;
  rep.better_branch =
      std::pow(M_rgamma, 1.0 / (m + 1)) >= std::pow(gamma, 4) ? Branch::interior : Branch::origin;
  return rep;
}

double estimate_am(int m, const std::vector<CaloricComponent>& family, const std::vector<double>& radii,
                   const SamplingOptions& opts) {
  require(!family.empty(), "bounds", "estimate_am needs a nonempty family");
  require(!radii.empty(), "bounds", "estimate_am needs a nonempty radii grid");
  const int dim = m + 1;
  const Vector origin = Vector::Zero(dim);
  std::vector<MultiIndex> indices = MultiIndex::of_order(dim, 1);
  for (auto& k : MultiIndex::of_order(dim, 2)) indices.push_back(std::move(k));

  double a_m = 1.0;
  for (const auto& u : family) {
    require(u.dim() == m, "bounds", "family member dimension mismatch");
    for (double r : radii) {
      require(r > 0.0 && r < 1.0, "bounds", "estimate_am radii must lie in (0, 1)");
      const double sup_u = maximize_on_ball([&u](const Vector& z) { return std::abs(u.value(z)); }, origin, r, opts).value;
      if (!(sup_u > 0.0)) throw InvalidInput("bounds", "family member with zero sup-norm");
      for (const auto& k : indices) {
        const double sup_d =
            maximize_on_ball([&](const Vector& z) { return std::abs(u.derivative(k, z)); }, origin, r * r / 4.0, opts)
                .value;
        a_m = std::max(a_m, std::pow(r, 2 * k.order()) * sup_d / sup_u);
      }
    }
  }
  return a_m;
}

}  // namespace heatbloch
