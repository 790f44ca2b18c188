#pragma once

#include "heatbloch/caloric.hpp"
#include "heatbloch/sampling.hpp"

#include <string_view>
#include <vector>

namespace heatbloch {

/// Schlicht radius from the interior branch:
///   (1-s) s / (2^{m+3} (m+1) K^{2m+3} g^4) (r_g / a_m)^4 M(r_g)^{1/(m+1)} / g^4
double bound_interior(int m, double K, double gamma, double sigma, double r_gamma, double a_m, double M_rgamma);

/// Schlicht radius from the origin branch:
///   s (1-s) / ((m+1) 2^{m+3} K^{2m+3} M(r_g)^{1/(m+1)}) (r_g / a_m)^4
double bound_origin(int m, double K, double gamma, double sigma, double r_gamma, double a_m, double M_rgamma);

struct WorstCaseBound {
  double exact = 0.0;             // with r_gamma = r_from_gamma(gamma)
  double with_lower_bound = 0.0;  // with r_gamma replaced by r_gamma_lower_bound(gamma)
};

/// s (1-s) / ((m+1) 2^{m+3} K^{2m+3}) (r_g / (a_m g))^4, the smaller of the two
/// branches at their crossover.
WorstCaseBound worst_case_bound(int m, double K, double gamma, double sigma, double a_m);

struct OptimalConstants {
  double gamma_star = 0.0;
  double sigma_star = 0.0;
  double c_star = 0.0;  // max over gamma of r_gamma_lower_bound(gamma) / gamma
};

/// Maximises s(1-s) and r_gamma_lower_bound(g)/g over g in (1, 100].
OptimalConstants optimize_constants(std::size_t resolution = 1000);

/// 0.22^4 / (2^{m+5} (m+1) a_m^4 K^{2m+3}).
double theorem_bound(int m, double K, double a_m);

/// Same constant with the denominator factor m in place of m+1.
double theorem_bound_stated(int m, double K, double a_m);

enum class Branch { interior, origin };

std::string_view to_string(Branch b);

struct BlochBoundReport {
  int m = 0;
  double K = 0.0;
  double a_m = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;
  double r_gamma = 0.0;
  double M_rgamma = 0.0;
  double bound_interior = 0.0;
  double bound_origin = 0.0;
  double bound_worst_case = 0.0;
  double theorem_bound = 0.0;
  double theorem_bound_stated = 0.0;
  Branch better_branch = Branch::origin;
};

BlochBoundReport bloch_bound_report(int m, double K, double a_m, double gamma, double sigma, double r_gamma,
                                    double M_rgamma);

/// Lower estimate of the interior derivative constant a_m:
///   max(1, max_{u, r, 1<=|k|<=2} r^{2|k|} sup_{B_{r^2/4}} |d^k u| / sup_{B_r} |u|).
double estimate_am(int m, const std::vector<CaloricComponent>& family, const std::vector<double>& radii,
                   const SamplingOptions& opts);

}  // namespace heatbloch
