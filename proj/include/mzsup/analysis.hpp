#pragma once

// Statistical machinery for designing and reading out the discrimination
// experiment: midpoint phase averages, Wilson score intervals, the two-point
// log-likelihood ratio between the collapse rate (1/8) and the persistent
// superposition rate (3/8), and exact binomial trial-count design.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <mzsup/errors.hpp>
#include <mzsup/scenarios.hpp>

namespace mzsup {

inline constexpr double kCollapseRate = 0.125;
inline constexpr double kPersistenceRate = 0.375;

// Midpoint-rule average of kernel over one phase period [0, 2pi). For any
// integrand of the form a + b cos(theta) the node sum of the cosine vanishes
// for n_nodes >= 2, so the average is exact there, not merely convergent.
template <typename Kernel>
double quadrature_average(Kernel&& kernel, int n_nodes) {
  if (n_nodes < 2) throw ConfigError("points: midpoint average needs at least 2 nodes");
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    sum += kernel(kTwoPi * (i + 0.5) / n_nodes);
  }
  return sum / n_nodes;
}

// Standard-normal CDF via the complementary error function.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Quantile of the standard normal. Acklam's rational approximation polished
// with two Newton steps against normal_cdf; good to ~1e-15 over (0, 1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("confidence: normal quantile needs an argument inside (0, 1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double err = normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
    if (pdf > 0.0) x -= err / pdf;
  }
  return x;
}

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;

  bool contains(double p) const { return low <= p && p <= high; }
  bool operator==(const WilsonInterval&) const = default;
};

// Wilson score interval for a binomial proportion; behaves sanely at the
// clicks = 0 and clicks = n edges, unlike the Wald interval.
inline WilsonInterval wilson_interval(std::uint64_t clicks, std::uint64_t n_trials,
                                      double confidence) {
  if (n_trials == 0) throw ConfigError("trials: interval needs at least one trial");
  if (clicks > n_trials) throw ConfigError("clicks: more clicks than trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence: must lie strictly inside (0, 1)");
  }
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double n = static_cast<double>(n_trials);
  const double p_hat = static_cast<double>(clicks) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p_hat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Log-likelihood ratio ln L(p1)/L(p0) in nats; positive favors p1. Undefined
// when either hypothesis sits on the boundary of (0, 1).
inline double log_likelihood_ratio(std::uint64_t clicks, std::uint64_t n_trials, double p0,
                                   double p1) {
  if (clicks > n_trials) throw ConfigError("clicks: more clicks than trials");
  if (!(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0)) {
    throw ConfigError("p0/p1: likelihood ratio undefined at rate 0 or 1");
  }
  const double k = static_cast<double>(clicks);
  const double n = static_cast<double>(n_trials);
  return k * std::log(p1 / p0) + (n - k) * std::log((1.0 - p1) / (1.0 - p0));
}

namespace detail {

inline double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) +
         dk * std::log(p) + (dn - dk) * std::log1p(-p);
}

}  // namespace detail

// P(X >= k) for X ~ Binomial(n, p), summed in probability space from the top.
inline double binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double sum = 0.0;
  for (std::uint64_t j = n + 1; j-- > k;) {
    sum += std::exp(detail::log_binomial_pmf(n, j, p));
  }
  return std::min(sum, 1.0);
}

// One-sided exact binomial test telling p1 from p0. reject_high means the
// rejection region is clicks >= threshold (the p1 > p0 direction); otherwise
// it is clicks <= threshold.
struct BinomialTestDesign {
  std::uint64_t n_trials = 0;
  std::uint64_t threshold = 0;
  bool reject_high = true;
  double size = 0.0;   // rejection probability under p0, <= alpha by design
  double power = 0.0;  // rejection probability under p1

  bool rejects(std::uint64_t clicks) const {
    return reject_high ? clicks >= threshold : clicks <= threshold;
  }
};

// Smallest n whose exact one-sided binomial test of size <= alpha reaches the
// requested power; found by exhaustive search over n, never by a normal
// approximation. Feasibility is capped at 5000 trials, plenty for any
// separation this experiment cares about.
inline BinomialTestDesign design_binomial_test(double p0, double p1, double alpha,
                                               double power) {
  if (!(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0)) {
    throw ConfigError("p0/p1: hypothesis rates must lie strictly inside (0, 1)");
  }
  if (std::abs(p0 - p1) <= 1e-12) {
    throw ConfigError("p0/p1: cannot size a test of identical hypotheses");
  }
  if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0)) {
    throw ConfigError("alpha/power: must lie strictly inside (0, 1)");
  }

  // Work in the clicks >= threshold direction; mirror through the complement
  // when p1 < p0 (clicks <= t under (p0, p1) is n - clicks >= n - t under the
  // complement rates).
  const bool mirrored = p1 < p0;
  const double q0 = mirrored ? 1.0 - p0 : p0;
  const double q1 = mirrored ? 1.0 - p1 : p1;

  constexpr std::uint64_t kMaxTrials = 5000;
  for (std::uint64_t n = 1; n <= kMaxTrials; ++n) {
    // Smallest threshold whose size fits under alpha, by accumulating the
    // upper tail downward from k = n.
    double tail = 0.0;
    std::uint64_t threshold = n + 1;  // empty rejection region
    double size = 0.0;
    for (std::uint64_t k = n + 1; k-- > 0;) {
      const double next = tail + std::exp(detail::log_binomial_pmf(n, k, q0));
      if (next > alpha) break;
      tail = next;
      threshold = k;
      size = next;
    }
    if (threshold > n) continue;  // not even rejecting at k = n fits under alpha
    const double achieved = binomial_upper_tail(n, threshold, q1);
    if (achieved >= power) {
      BinomialTestDesign design;
      design.n_trials = n;
      design.size = size;
      design.power = achieved;
      design.reject_high = !mirrored;
      design.threshold = mirrored ? n - threshold : threshold;
      return design;
    }
  }
  throw ConfigError("alpha/power: no feasible design within 5000 trials");
}

inline std::uint64_t required_trials(double p0, double p1, double alpha, double power) {
  return design_binomial_test(p0, p1, alpha, power).n_trials;
}

struct SweepRow {
  double theta = 0.0;
  double probability = 0.0;

  bool operator==(const SweepRow&) const = default;
};

// Dark-port probability of the model at n evenly spaced phases in [0, 2pi).
inline std::vector<SweepRow> sweep_theta(const ScenarioConfig& config, int n_points) {
  if (n_points < 2) throw ConfigError("points: sweep needs at least 2 points");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta = kTwoPi * i / n_points;
    rows.push_back({theta, per_theta_probability(config, theta)});
  }
  return rows;
}

enum class Verdict { kFavorsCollapse, kFavorsPersistence, kInconclusive };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kFavorsCollapse: return "favors-collapse";
    case Verdict::kFavorsPersistence: return "favors-persistence";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

// The unavoidable loophole of a rate-only readout: a persistent superposition
// with a reproducible crossing phase of pi/4 clicks at exactly the collapse
// rate, so a 1/8 result alone cannot exclude persistence. Every report says so.
inline std::string confound_caveat() {
  return "a persistent superposition with fixed crossing phase pi/4 also clicks at 1/8; "
         "an observed rate of 1/8 supports collapse only against the uniform-random-phase "
         "alternative, not against a fixed-phase one (vary theta to separate them)";
}

struct DiscriminationReport {
  std::uint64_t clicks = 0;
  std::uint64_t n_trials = 0;
  double confidence = 0.0;
  double p_collapse = kCollapseRate;
  double p_persistence = kPersistenceRate;
  double llr = 0.0;  // nats, positive favors persistence
  WilsonInterval interval;
  Verdict verdict = Verdict::kInconclusive;
  std::string caveat;

  bool operator==(const DiscriminationReport&) const = default;
};

// Reads observed clicks against the two point hypotheses. The verdict favors
// the hypothesis the Wilson interval retains when it excludes the other; if
// the interval keeps both, or excludes both on the same side (the data fit
// neither rate), the call is inconclusive; if the estimate falls between two
// excluded hypotheses the likelihood ratio breaks the tie.
inline DiscriminationReport discriminate(std::uint64_t clicks, std::uint64_t n_trials,
                                         double confidence, double p0 = kCollapseRate,
                                         double p1 = kPersistenceRate) {
  DiscriminationReport report;
  report.clicks = clicks;
  report.n_trials = n_trials;
  report.confidence = confidence;
  report.p_collapse = p0;
  report.p_persistence = p1;
  report.interval = wilson_interval(clicks, n_trials, confidence);
  report.llr = log_likelihood_ratio(clicks, n_trials, p0, p1);
  report.caveat = confound_caveat();

  const bool has0 = report.interval.contains(p0);
  const bool has1 = report.interval.contains(p1);
  if (has0 && !has1) {
    report.verdict = Verdict::kFavorsCollapse;
  } else if (has1 && !has0) {
    report.verdict = Verdict::kFavorsPersistence;
  } else if (has0 && has1) {
    report.verdict = Verdict::kInconclusive;
  } else {
    const bool both_below = p0 < report.interval.low && p1 < report.interval.low;
    const bool both_above = p0 > report.interval.high && p1 > report.interval.high;
    if (both_below || both_above) {
      report.verdict = Verdict::kInconclusive;  // data consistent with neither rate
    } else if (report.llr > 0.0) {
      report.verdict = Verdict::kFavorsPersistence;
    } else if (report.llr < 0.0) {
      report.verdict = Verdict::kFavorsCollapse;
    } else {
      report.verdict = Verdict::kInconclusive;
    }
  }
  return report;
}

}  // namespace mzsup
