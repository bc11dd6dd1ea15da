#include <doctest.h>

#include <cmath>
#include <random>

#include <mzsup/analysis.hpp>

using namespace mzsup;

namespace {

// Independent exact-binomial oracle: pmf built by the multiplicative
// recurrence instead of lgamma, tails summed from the opposite end, and the
// (n, threshold) search repeated from scratch in both test directions.
struct OracleDesign {
  std::uint64_t n = 0;
  std::uint64_t threshold = 0;
  bool reject_high = true;
};

std::vector<double> oracle_pmf(std::uint64_t n, double p) {
  std::vector<double> f(n + 1);
  // log-space seed avoids underflow of (1-p)^n for large n
  f[0] = std::exp(static_cast<double>(n) * std::log1p(-p));
  for (std::uint64_t k = 0; k + 1 <= n; ++k) {
    f[k + 1] = f[k] * static_cast<double>(n - k) / static_cast<double>(k + 1) * p / (1.0 - p);
  }
  return f;
}

double oracle_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  auto f = oracle_pmf(n, p);
  double s = 0.0;
  for (std::uint64_t j = k; j <= n; ++j) s += f[j];
  return s;
}

double oracle_lower_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (k > n) return 1.0;
  auto f = oracle_pmf(n, p);
  double s = 0.0;
  for (std::uint64_t j = 0; j <= k; ++j) s += f[j];
  return s;
}

OracleDesign oracle_design(double p0, double p1, double alpha, double power) {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    if (p1 > p0) {
      std::uint64_t kstar = n + 1;
      for (std::uint64_t k = 0; k <= n; ++k) {
        if (oracle_upper_tail(n, k, p0) <= alpha) {
          kstar = k;
          break;
        }
      }
      if (kstar <= n && oracle_upper_tail(n, kstar, p1) >= power) return {n, kstar, true};
    } else {
      bool found = false;
      std::uint64_t kstar = 0;
      for (std::uint64_t k = n + 1; k-- > 0;) {
        if (oracle_lower_tail(n, k, p0) <= alpha) {
          kstar = k;
          found = true;
          break;
        }
      }
      if (found && oracle_lower_tail(n, kstar, p1) >= power) return {n, kstar, false};
    }
  }
  return {};
}

}  // namespace

TEST_CASE("midpoint average of the per-theta law is exact from two nodes up") {
  for (int n : {2, 3, 5, 16, 1000, 10000}) {
    CHECK(quadrature_average(pb_random_phase_given_theta, n) ==
          doctest::Approx(0.375).epsilon(1e-12));
  }
}

TEST_CASE("midpoint average handles other integrands and rejects tiny node counts") {
  CHECK(quadrature_average([](double) { return 0.2; }, 7) ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(quadrature_average([](double t) { return std::cos(t) * std::cos(t); }, 64) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(quadrature_average([](double) { return 0.0; }, 1),
                       doctest::Contains("points"), ConfigError);
}

TEST_CASE("normal quantile matches reference values and round-trips") {
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 300; ++i) {
    const double p = u(gen);
    CHECK(normal_cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-11));
  }
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), ConfigError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), ConfigError);
}

TEST_CASE("wilson interval: frozen values") {
  auto zero = wilson_interval(0, 100, 0.95);
  CHECK(zero.low == 0.0);
  CHECK(zero.high == doctest::Approx(0.036993498206986).epsilon(1e-9));
  CHECK(zero.high < 0.05);

  auto half = wilson_interval(50, 100, 0.95);
  CHECK(half.low == doctest::Approx(0.403831530365996).epsilon(1e-9));
  CHECK(half.high == doctest::Approx(0.596168469634004).epsilon(1e-9));
  CHECK(half.contains(0.5));

  auto collapse = wilson_interval(125, 1000, 0.99);
  CHECK(collapse.low == doctest::Approx(0.100508417431321).epsilon(1e-9));
  CHECK(collapse.high == doctest::Approx(0.154434956246235).epsilon(1e-9));
  CHECK(collapse.contains(0.125));
  CHECK(!collapse.contains(0.375));
}

TEST_CASE("wilson interval always brackets the observed proportion") {
  std::mt19937_64 gen(37);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = 1 + gen() % 5000;
    const std::uint64_t clicks = gen() % (n + 1);
    const double conf = 0.5 + 0.499 * (static_cast<double>(gen() % 1000) / 1000.0);
    auto w = wilson_interval(clicks, n, conf);
    const double p_hat = static_cast<double>(clicks) / static_cast<double>(n);
    CHECK(w.low <= p_hat + 1e-15);
    CHECK(w.high >= p_hat - 1e-15);
    CHECK(w.low >= 0.0);
    CHECK(w.high <= 1.0);
  }
}

TEST_CASE("wilson interval rejects degenerate inputs") {
  CHECK_THROWS_WITH_AS(wilson_interval(1, 0, 0.95), doctest::Contains("trials"), ConfigError);
  CHECK_THROWS_WITH_AS(wilson_interval(5, 4, 0.95), doctest::Contains("clicks"), ConfigError);
  CHECK_THROWS_WITH_AS(wilson_interval(1, 10, 1.0), doctest::Contains("confidence"),
                       ConfigError);
}

TEST_CASE("log-likelihood ratio: frozen values and sign convention") {
  CHECK(log_likelihood_ratio(375, 1000, 0.125, 0.375) ==
        doctest::Approx(201.684460362283).epsilon(1e-12));
  CHECK(log_likelihood_ratio(125, 1000, 0.125, 0.375) ==
        doctest::Approx(-157.086670960048).epsilon(1e-12));
  CHECK(log_likelihood_ratio(777, 2000, 0.3, 0.3) == 0.0);  // identical hypotheses
  CHECK_THROWS_WITH_AS(log_likelihood_ratio(5, 10, 0.0, 0.5), doctest::Contains("p0"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(log_likelihood_ratio(5, 10, 0.5, 1.0), doctest::Contains("p1"),
                       ConfigError);
}

TEST_CASE("binomial upper tail matches the recurrence oracle") {
  CHECK(binomial_upper_tail(10, 3, 0.5) == doctest::Approx(0.9453125).epsilon(1e-12));
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t n = 1 + gen() % 400;
    const std::uint64_t k = gen() % (n + 2);
    const double p = u(gen);
    CHECK(binomial_upper_tail(n, k, p) ==
          doctest::Approx(oracle_upper_tail(n, k, p)).epsilon(1e-10));
  }
}

TEST_CASE("trial design for 1/8 vs 3/8 matches the exhaustive oracle exactly") {
  auto design = design_binomial_test(0.125, 0.375, 0.05, 0.95);
  auto oracle = oracle_design(0.125, 0.375, 0.05, 0.95);
  CHECK(design.n_trials == oracle.n);
  CHECK(design.threshold == oracle.threshold);
  CHECK(design.reject_high);
  CHECK(design.n_trials == 32);  // frozen from the oracle
  CHECK(design.threshold == 8);
  CHECK(design.size == doctest::Approx(0.039505716187925).epsilon(1e-9));
  CHECK(design.size <= 0.05);
  CHECK(design.power == doctest::Approx(0.953541155933490).epsilon(1e-9));
  CHECK(design.power >= 0.95);
  CHECK(required_trials(0.125, 0.375, 0.05, 0.95) == 32);
}

TEST_CASE("trial design in the mirrored direction matches its own oracle") {
  auto design = design_binomial_test(0.375, 0.125, 0.05, 0.9);
  auto oracle = oracle_design(0.375, 0.125, 0.05, 0.9);
  CHECK(design.n_trials == oracle.n);
  CHECK(design.threshold == oracle.threshold);
  CHECK(!design.reject_high);
  CHECK(design.rejects(0));
  CHECK(!design.rejects(design.n_trials));
}

TEST_CASE("stricter designs need more trials") {
  const auto lax = required_trials(0.125, 0.375, 0.10, 0.90);
  const auto mid = required_trials(0.125, 0.375, 0.05, 0.95);
  const auto strict = required_trials(0.125, 0.375, 0.01, 0.99);
  CHECK(lax == 20);  // frozen from the oracle
  CHECK(strict == 62);
  CHECK(lax <= mid);
  CHECK(mid <= strict);
}

TEST_CASE("trial design rejects impossible hypotheses") {
  CHECK_THROWS_WITH_AS(required_trials(0.25, 0.25, 0.05, 0.95), doctest::Contains("p0/p1"),
                       ConfigError);
  CHECK_THROWS_AS(required_trials(0.0, 0.5, 0.05, 0.95), ConfigError);
  CHECK_THROWS_AS(required_trials(0.125, 0.375, 0.0, 0.95), ConfigError);
}

TEST_CASE("theta sweep tabulates the model on an even grid starting at zero") {
  auto rows = sweep_theta(make_scenario(Model::kCoherentFixedPhase), 360);
  REQUIRE(rows.size() == 360);
  CHECK(rows[0].theta == 0.0);
  CHECK(rows[0].probability == doctest::Approx((3.0 - 2.0 * std::sqrt(2.0)) / 8.0).epsilon(1e-12));
  CHECK(rows[1].theta == doctest::Approx(kTwoPi / 360).epsilon(1e-15));
  // 45 degrees is on this grid: the collapse confound row
  CHECK(rows[45].theta == doctest::Approx(M_PI / 4).epsilon(1e-12));
  CHECK(rows[45].probability == doctest::Approx(0.125).epsilon(1e-12));
  // theta = 0 is the sweep minimum
  for (const auto& row : rows) CHECK(row.probability >= rows[0].probability - 1e-15);
}

TEST_CASE("theta sweep of the mimic is flat at the collapse rate") {
  for (const auto& row : sweep_theta(make_scenario(Model::kFineTunedMimic), 90)) {
    CHECK(std::abs(row.probability - 0.125) < 1e-12);
  }
  CHECK_THROWS_WITH_AS(sweep_theta(make_scenario(Model::kFineTunedMimic), 1),
                       doctest::Contains("points"), ConfigError);
}

TEST_CASE("discrimination verdicts on the worked examples") {
  auto persistence = discriminate(375, 1000, 0.99);
  CHECK(persistence.verdict == Verdict::kFavorsPersistence);
  CHECK(persistence.llr > 0.0);

  auto collapse = discriminate(125, 1000, 0.99);
  CHECK(collapse.verdict == Verdict::kFavorsCollapse);
  CHECK(collapse.llr < 0.0);
  CHECK(collapse.caveat.find("pi/4") != std::string::npos);

  auto inconclusive = discriminate(2, 10, 0.99);
  CHECK(inconclusive.verdict == Verdict::kInconclusive);
  CHECK(inconclusive.interval.contains(0.125));
  CHECK(inconclusive.interval.contains(0.375));
}

TEST_CASE("discrimination edge verdicts") {
  // Interval far above both rates: the data fit neither hypothesis.
  CHECK(discriminate(900, 1000, 0.99).verdict == Verdict::kInconclusive);
  // Interval between the rates, excluding both: likelihood breaks the tie.
  auto between = discriminate(250, 1000, 0.999);
  CHECK(!between.interval.contains(0.125));
  CHECK(!between.interval.contains(0.375));
  CHECK(between.verdict == Verdict::kFavorsPersistence);
}

TEST_CASE("every discrimination report carries the confound caveat") {
  for (auto [clicks, n] : {std::pair<std::uint64_t, std::uint64_t>{375, 1000},
                           {125, 1000},
                           {2, 10},
                           {0, 32}}) {
    CHECK(discriminate(clicks, n, 0.95).caveat == confound_caveat());
  }
}
