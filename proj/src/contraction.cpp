#include "heatbloch/contraction.hpp"

#include "heatbloch/linalg.hpp"
#include "heatbloch/sampling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace heatbloch {

namespace {

void check_common(double sigma, double K, int m, double a_m) {
  require(sigma > 0.0 && sigma < 1.0, "contraction", "sigma must lie in (0, 1)");
  require(K > 0.0, "contraction", "K must be positive");
  require(m >= 1 && m <= kMaxSpatialDim, "contraction", "m must lie in [1, 8]");
  require(a_m >= 1.0, "contraction", "a_m must be >= 1");
}

std::string violation_message(double distance, double eta) {
  std::ostringstream os;
  os.precision(17);
  os << "chord iterate left the certified ball: distance " << distance << " > eta " << eta;
  return os.str();
}

}  // namespace

double eta_interior(double eps_n, double r_n, double sigma, double K, double gamma, int m, double a_m) {
  check_common(sigma, K, m, a_m);
  require(eps_n > 0.0 && r_n > 0.0, "contraction", "eps_n and r_n must be positive");
  require(gamma > 1.0, "contraction", "gamma must exceed 1");
  const double er = eps_n * r_n;
  require(er <= 1.0, "contraction", "eps_n * r_n must not exceed 1");
  const double eta = (1.0 - sigma) * std::pow(er / a_m, 4) /
                     (std::ldexp(1.0, m + 3) * (m + 1) * std::pow(K, m + 2) * std::pow(gamma, 4));
  if (!(eta <= er * er / 4.0)) throw NumericalFailure("contraction", "eta exceeds (eps_n r_n)^2 / 4");
  return eta;
}

double eta_origin(double r_gamma, double sigma, double K, int m, double a_m, double M_rgamma,
                  double lambda_at_0) {
  check_common(sigma, K, m, a_m);
  require(r_gamma > 0.0 && r_gamma < 1.0, "contraction", "r_gamma must lie in (0, 1)");
  require(M_rgamma > 0.0, "contraction", "M(r_gamma) must be positive");
  require(lambda_at_0 > 0.0, "contraction", "lambda_F(0) must be positive");
  return (1.0 - sigma) * lambda_at_0 * std::pow(r_gamma / a_m, 4) /
         (std::ldexp(1.0, m + 3) * (m + 1) * K * std::pow(M_rgamma, 1.0 / (m + 1)));
}

SchlichtCertificate make_certificate(const MapView& F, std::string branch, int n, const Vector& beta,
                                     double sigma, double eta) {
  require(beta.size() == F.size(), "contraction", "beta dimension mismatch");
  require(sigma > 0.0 && sigma < 1.0, "contraction", "sigma must lie in (0, 1)");
  require(eta > 0.0, "contraction", "eta must be positive");
  require(beta.norm() + eta < 1.0, "contraction", "certified ball must lie inside the unit ball");
  SchlichtCertificate c;
  c.branch = std::move(branch);
  c.n = n;
  c.beta = beta;
  c.sigma = sigma;
  c.eta = eta;
  c.lambda_at_beta = spectral_summary(F.jacobian(beta)).lambda_min;
  c.rho = sigma * eta * c.lambda_at_beta;
  c.center_image = F(beta);
  return c;
}

CertificateViolation::CertificateViolation(const Vector& iterate, double distance, double eta)
    : NumericalFailure("contraction", violation_message(distance, eta)), iterate_(iterate) {}

ChordResult chord_solve(const MapView& F, const Vector& beta, const Vector& w, double eta,
                        const ChordOptions& opts, const std::optional<Vector>& start) {
  require(beta.size() == F.size() && w.size() == F.size(), "contraction", "dimension mismatch");
  require(eta > 0.0, "contraction", "eta must be positive");
  const Matrix A_inv = invert(F.jacobian(beta));
  const double limit = eta * (1.0 + 1e-12);

  ChordResult res;
  res.z = start.value_or(beta);
  res.max_distance = (res.z - beta).norm();
  if (res.max_distance > limit) throw CertificateViolation(res.z, res.max_distance, eta);

  double prev_step = 0.0;
  for (;;) {
    const Vector defect = w - F(res.z);
    res.residual = defect.norm();
    if (res.residual < opts.tol) return res;
    if (res.iterations >= opts.max_iter)
      throw NumericalFailure("contraction", "chord iteration exceeded max_iter without converging");
    const Vector step = A_inv * defect;
    const double step_norm = step.norm();
    if (prev_step > 0.0) res.worst_contraction_factor = std::max(res.worst_contraction_factor, step_norm / prev_step);
    prev_step = step_norm;
    res.z += step;
    ++res.iterations;
    const double dist = (res.z - beta).norm();
    res.max_distance = std::max(res.max_distance, dist);
    if (dist > limit) throw CertificateViolation(res.z, dist, eta);
  }
}

ContractionReport verify_contraction(const MapView& F, const Vector& beta, double eta, double sigma,
                                     std::size_t pair_budget, std::uint64_t seed, int threads) {
  require(eta > 0.0, "contraction", "eta must be positive");
  require(sigma > 0.0 && sigma < 1.0, "contraction", "sigma must lie in (0, 1)");
  require(pair_budget >= 1, "contraction", "pair budget must be >= 1");
  const int dim = F.size();
  const Matrix A_inv = invert(F.jacobian(beta));
  const BallSampler first(dim, seed);
  const BallSampler second(dim, mix_seed(seed, 1));
  const Matrix I = Matrix::Identity(dim, dim);

  std::vector<double> pair_ratio(pair_budget);
  std::vector<double> row_norm(pair_budget);
  parallel_for(pair_budget, threads, [&](std::size_t i) {
    // index 0 of `first` is beta itself, where the chord map has zero Jacobian
    const Vector z1 = beta + eta * first.unit_point(i);
    const Vector z2 = beta + eta * second.unit_point(i + 1);
    const Vector dz = z1 - z2;
    const Vector dg = dz - A_inv * (F(z1) - F(z2));
    pair_ratio[i] = dz.norm() > 0.0 ? dg.norm() / dz.norm() : 0.0;
    const Matrix G = I - A_inv * F.jacobian(z1);
    row_norm[i] = G.rowwise().norm().maxCoeff();
  });

  ContractionReport rep;
  rep.pairs = pair_budget;
  rep.sigma = sigma;
  rep.row_bound = (1.0 - sigma) / std::sqrt(static_cast<double>(dim));
  std::size_t worst_pair = 0;
  std::size_t worst_row = 0;
  for (std::size_t i = 1; i < pair_budget; ++i) {
    if (pair_ratio[i] > pair_ratio[worst_pair]) worst_pair = i;
    if (row_norm[i] > row_norm[worst_row]) worst_row = i;
  }
  rep.worst_pair_ratio = pair_ratio[worst_pair];
  rep.witness_a = beta + eta * first.unit_point(worst_pair);
  rep.witness_b = beta + eta * second.unit_point(worst_pair + 1);
  rep.worst_row_norm = row_norm[worst_row];
  rep.row_witness = beta + eta * first.unit_point(worst_row);
  return rep;
}

SchlichtReport verify_schlicht(const MapView& F, const SchlichtCertificate& cert, std::size_t n_targets,
                               std::uint64_t seed, const SchlichtOptions& opts) {
  require(n_targets >= 1, "contraction", "need at least one target");
  require(cert.rho > 0.0 && cert.eta > 0.0, "contraction", "certificate radii must be positive");
  const int dim = F.size();
  const BallSampler target_sampler(dim, seed);

  SchlichtReport rep;
  rep.tol = opts.chord.tol;
  rep.uniqueness_tol = opts.uniqueness_tol;
  rep.targets.resize(n_targets);
  parallel_for(n_targets, opts.threads, [&](std::size_t i) {
    TargetOutcome& out = rep.targets[i];
    out.w = cert.center_image + cert.rho * target_sampler.unit_point(i);
    try {
      const ChordResult main = chord_solve(F, cert.beta, out.w, cert.eta, opts.chord);
      out.z = main.z;
      out.iterations = main.iterations;
      out.residual = main.residual;
      const BallSampler starts(dim, mix_seed(seed, i + 1));
      for (int s = 0; s < opts.starts; ++s) {
        const Vector z0 = cert.beta + cert.eta * starts.unit_point(static_cast<std::size_t>(s) + 1);
        const ChordResult alt = chord_solve(F, cert.beta, out.w, cert.eta, opts.chord, z0);
        out.uniqueness_gap = std::max(out.uniqueness_gap, (alt.z - out.z).norm());
        out.residual = std::max(out.residual, alt.residual);
      }
      out.converged = true;
    } catch (const NumericalFailure& e) {
      out.failure = e.what();
    }
  });

  rep.min_pair_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_targets; ++i) {
    const TargetOutcome& t = rep.targets[i];
    if (!t.converged) {
      ++rep.failures;
      continue;
    }
    rep.worst_residual = std::max(rep.worst_residual, t.residual);
    rep.worst_uniqueness_gap = std::max(rep.worst_uniqueness_gap, t.uniqueness_gap);
    rep.worst_iterations = std::max(rep.worst_iterations, t.iterations);
    for (std::size_t j = 0; j < i; ++j) {
      const TargetOutcome& u = rep.targets[j];
      if (!u.converged || (t.w - u.w).norm() == 0.0) continue;
      rep.min_pair_separation = std::min(rep.min_pair_separation, (t.z - u.z).norm());
    }
  }
  if (!std::isfinite(rep.min_pair_separation)) rep.min_pair_separation = 0.0;
  return rep;
}

}  // namespace heatbloch
