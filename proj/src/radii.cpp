#include "heatbloch/radii.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace heatbloch {

namespace {

constexpr long kMaxProductTerms = 50'000'000;

std::string non_monotone_message(double r_small, double M_small, double r_large, double M_large) {
  std::ostringstream os;
  os.precision(17);
  os << "sampled M is not monotone: M(" << r_small << ") = " << M_small << " > M(" << r_large
     << ") = " << M_large << "; increase the sample budget";
  return os.str();
}

}  // namespace

double r_from_gamma(double gamma) {
  require(gamma > 1.0, "radii", "gamma must exceed 1");
  // log r = -sum_j log1p(gamma^{-j}). The tail after N terms is summed in closed form to
  // third order: sum_{j>N} (q^j - q^{2j}/2 + q^{3j}/3), q = 1/gamma, leaving an error
  // below q^{4N} / (4 (gamma^4 - 1)).
  const double q = 1.0 / gamma;
  const double g4m1 = std::expm1(4.0 * std::log(gamma));
  double log_sum = 0.0;
  double p = 1.0;
  for (long j = 1;; ++j) {
    p *= q;
    log_sum += std::log1p(p);
    const double naive_tail = p / (gamma - 1.0);
    const double p4 = p * p * p * p;
    if (naive_tail < 1e-14 || p4 / (4.0 * g4m1) < 1e-17) {
      const double p2 = p * p;
      const double p3 = p2 * p;
      const double tail = p / (gamma - 1.0) - 0.5 * p2 / std::expm1(2.0 * std::log(gamma)) +
                          p3 / (3.0 * std::expm1(3.0 * std::log(gamma)));
      log_sum += tail;
      break;
    }
    if (j >= kMaxProductTerms) throw NumericalFailure("radii", "gamma too close to 1 for r_from_gamma");
  }
  return std::exp(-log_sum);
}

double gamma_from_r0(double r0) {
  require(r0 > 0.0 && r0 < 1.0, "radii", "r0 must lie in (0, 1)");
  double lo = 1.0 + 1.0 / 512.0;
  while (r_from_gamma(lo) > r0) lo = 1.0 + 0.5 * (lo - 1.0);
  double hi = 2.0;
  while (r_from_gamma(hi) < r0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalFailure("radii", "r0 too close to 1");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (r_from_gamma(mid) < r0)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(r_from_gamma(lo) - r0) < std::abs(r_from_gamma(hi) - r0) ? lo : hi;
}

double r_gamma_lower_bound(double gamma) {
  require(gamma > 1.0, "radii", "gamma must exceed 1");
  const double g2 = gamma * gamma;
  const double g3 = g2 * gamma;
  return std::exp(-1.0 / (gamma - 1.0) + 1.0 / (2.0 * (g2 - 1.0)) - 1.0 / (3.0 * (g3 - 1.0)));
}

NonMonotoneOracle::NonMonotoneOracle(double r_small, double M_small, double r_large, double M_large)
    : NumericalFailure("radii", non_monotone_message(r_small, M_small, r_large, M_large)) {}

RadiiSequence build_sequences(const HeatMap& F, double gamma, const BallMaxOracle& oracle,
                              const SequenceOptions& opts) {
  require(gamma > 1.0, "radii", "gamma must exceed 1");
  require(F.normalized(), "radii", "build_sequences expects a normalized map");
  const int m = F.dim();
  const double exponent = 1.0 / (m + 1);
  const double gamma4 = std::pow(gamma, 4.0);

  // Raw oracle values by radius; the running maximum over smaller radii makes M monotone.
  std::map<double, BallMaxRecord> cache;
  auto envelope = [&](double r) -> const BallMaxRecord& {
    if (!cache.contains(r)) {
      BallMaxRecord rec = oracle(r);
      for (const auto& [rc, other] : cache) {
        if (rc < r && other.M > rec.M * (1.0 + opts.monotone_tol)) throw NonMonotoneOracle(rc, other.M, r, rec.M);
        if (rc > r && rec.M > other.M * (1.0 + opts.monotone_tol)) throw NonMonotoneOracle(r, rec.M, rc, other.M);
      }
      cache.emplace(r, std::move(rec));
    }
    const BallMaxRecord* best = nullptr;
    for (const auto& [rc, rec] : cache) {
      if (rc > r) break;
      if (best == nullptr || rec.M > best->M) best = &rec;
    }
    return *best;
  };
  auto ratio = [&](double M, double M_prev) { return std::pow(M / M_prev, exponent); };

  RadiiSequence seq;
  seq.m = m;
  seq.gamma = gamma;
  seq.r_gamma = r_from_gamma(gamma);
  seq.r.push_back(seq.r_gamma);
  seq.records.push_back(envelope(seq.r_gamma));
  seq.M_one = envelope(1.0).M;

  while (true) {
    const double r_prev = seq.r.back();
    const double M_prev = seq.records.back().M;
    if (!(M_prev > 0.0)) throw NumericalFailure("radii", "M vanishes on the initial ball");
    if (!(ratio(seq.M_one, M_prev) > gamma4)) {
      seq.eps.push_back(1.0 / r_prev - 1.0);
      break;
    }
    if (seq.r.size() >= opts.max_length)
      throw NumericalFailure("radii", "radius sequence exceeded the maximum length");

    // Smallest r in (r_prev, 1) with ratio >= gamma^4, to the requested tolerance.
    double lo = r_prev;
    double hi = 1.0;
    for (int it = 0; it < opts.max_bisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (ratio(envelope(mid).M, M_prev) >= gamma4)
        hi = mid;
      else
        lo = mid;
      if (hi < 1.0 && std::abs(ratio(envelope(hi).M, M_prev) - gamma4) <= opts.ratio_tol * gamma4) break;
    }
    seq.eps.push_back(hi / r_prev - 1.0);
    seq.r.push_back(hi);
    seq.records.push_back(envelope(hi));
  }
  seq.l = static_cast<int>(seq.r.size()) - 1;
  return seq;
}

SequenceCheck check_sequence(const RadiiSequence& seq) {
  SequenceCheck c;
  const double exponent = 1.0 / (seq.m + 1);
  c.gamma4 = std::pow(seq.gamma, 4.0);
  double prod = seq.r.front();
  for (double e : seq.eps) prod *= 1.0 + e;
  c.product_error = std::abs(prod - 1.0);
  for (std::size_t j = 1; j < seq.r.size(); ++j) {
    const double expected = (1.0 + seq.eps[j - 1]) * seq.r[j - 1];
    if (std::abs(expected - seq.r[j]) > 1e-12 * seq.r[j]) c.recurrence_ok = false;
    if (!(seq.r[j] > seq.r[j - 1])) c.recurrence_ok = false;
    const double ratio = std::pow(seq.M(j) / seq.M(j - 1), exponent);
    c.max_ratio_error = std::max(c.max_ratio_error, std::abs(ratio - c.gamma4));
  }
  c.final_ratio = std::pow(seq.M_one / seq.M(seq.r.size() - 1), exponent);
  for (std::size_t k = 0; k < seq.eps.size(); ++k) {
    if (seq.eps[k] >= std::pow(seq.gamma, -static_cast<double>(k + 1))) {
      c.eps_witness = static_cast<int>(k);
      break;
    }
  }
  return c;
}

}  // namespace heatbloch
