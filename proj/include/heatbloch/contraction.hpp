#pragma once

#include "heatbloch/caloric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace heatbloch {

/// eta = (1 - sigma) (eps_n r_n / a_m)^4 / (2^{m+3} (m+1) K^{m+2} gamma^4).
double eta_interior(double eps_n, double r_n, double sigma, double K, double gamma, int m, double a_m);

/// eta = (1 - sigma) lambda_F(0) (r_gamma / a_m)^4 / (2^{m+3} (m+1) K M(r_gamma)^{1/(m+1)}).
double eta_origin(double r_gamma, double sigma, double K, int m, double a_m, double M_rgamma,
                  double lambda_at_0);

/// Ball of radius eta about beta on which the chord map is a contraction, and the
/// certified univalent disk of radius rho = sigma * eta * lambda_F(beta) about F(beta).
struct SchlichtCertificate {
  std::string branch;  // "interior" or "origin"
  int n = 0;
  Vector beta;
  double sigma = 0.5;
  double eta = 0.0;
  double lambda_at_beta = 0.0;
  double rho = 0.0;
  Vector center_image;
};

SchlichtCertificate make_certificate(const MapView& F, std::string branch, int n, const Vector& beta,
                                     double sigma, double eta);

struct ChordOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

struct ChordResult {
  Vector z;
  int iterations = 0;
  double residual = 0.0;
  double max_distance = 0.0;               // max ||z_k - beta|| over iterates
  double worst_contraction_factor = 0.0;   // max ||dz_{k+1}|| / ||dz_k||
};

/// An iterate left the closed eta-ball: the certificate does not hold for this target.
class CertificateViolation : public NumericalFailure {
 public:
  CertificateViolation(const Vector& iterate, double distance, double eta);
  const Vector& iterate() const noexcept { return iterate_; }

 private:
  Vector iterate_;
};

/// Solves F(z) = w by z <- z + F'(beta)^{-1} (w - F(z)), starting at beta (or `start`).
ChordResult chord_solve(const MapView& F, const Vector& beta, const Vector& w, double eta,
                        const ChordOptions& opts = {}, const std::optional<Vector>& start = std::nullopt);

struct ContractionReport {
  std::size_t pairs = 0;
  double sigma = 0.5;
  double worst_pair_ratio = 0.0;
  Vector witness_a;
  Vector witness_b;
  double worst_row_norm = 0.0;
  double row_bound = 0.0;  // (1 - sigma) / sqrt(m+1)
  Vector row_witness;

  bool pairs_ok() const { return worst_pair_ratio <= 1.0 - sigma + 1e-9; }
  bool rows_ok() const { return worst_row_norm <= row_bound * (1.0 + 1e-12); }
  bool passed() const { return pairs_ok() && rows_ok(); }
};

ContractionReport verify_contraction(const MapView& F, const Vector& beta, double eta, double sigma,
                                     std::size_t pair_budget, std::uint64_t seed, int threads = 1);

struct SchlichtOptions {
  ChordOptions chord;
  int starts = 8;
  double uniqueness_tol = 1e-9;
  int threads = 1;
};

struct TargetOutcome {
  Vector w;
  Vector z;
  bool converged = false;
  std::string failure;
  int iterations = 0;
  double residual = 0.0;
  double uniqueness_gap = 0.0;
};

struct SchlichtReport {
  std::vector<TargetOutcome> targets;
  std::size_t failures = 0;
  double worst_residual = 0.0;
  double worst_uniqueness_gap = 0.0;
  double min_pair_separation = 0.0;
  int worst_iterations = 0;
  double tol = 1e-12;
  double uniqueness_tol = 1e-9;

  bool passed() const {
    return failures == 0 && worst_residual < tol && worst_uniqueness_gap <= uniqueness_tol &&
           (targets.size() < 2 || min_pair_separation > 0.0);
  }
};

SchlichtReport verify_schlicht(const MapView& F, const SchlichtCertificate& cert, std::size_t n_targets,
                               std::uint64_t seed, const SchlichtOptions& opts = {});

}  // namespace heatbloch
