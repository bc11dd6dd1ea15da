#pragma once

// Seeded trial runner. Each trial draws its model randomness (placement or
// phases), asks the scenario layer for the exact three-outcome distribution of
// that run, and draws the outcome from it; only outcomes are ever sampled, the
// distribution itself is exact.
//
// Reproducibility contract: trial i of seed s consumes exactly
// draws_per_trial(model) uniforms from stream i / kTrialsPerStream (see
// rng.hpp), at offset i % kTrialsPerStream. Summaries over the same
// (config, range, seed) are therefore bit-identical on every platform, and a
// run split into disjoint ranges merges to exactly the full-run summary.

#include <cstdint>

#include <mzsup/errors.hpp>
#include <mzsup/rng.hpp>
#include <mzsup/scenarios.hpp>

namespace mzsup {

struct TrialSummary {
  std::uint64_t n_trials = 0;
  std::uint64_t clicks_d = 0;
  std::uint64_t clicks_c = 0;
  std::uint64_t absorbed = 0;
  double estimate_d = 0.0;
  double std_err_d = 0.0;
  std::uint64_t seed = 0;
  ScenarioConfig model;

  bool operator==(const TrialSummary&) const = default;
};

// Uniform draws one trial consumes, fixed per model so trial offsets are
// computable without running the predecessors.
inline std::uint32_t draws_per_trial(Model m) {
  switch (m) {
    case Model::kCollapsedMixture: return 2;   // placement + outcome
    case Model::kEntangledRandomPhase: return 2;  // theta + outcome
    case Model::kCoherentFixedPhase: return 1;    // outcome only
    case Model::kFineTunedMimic: return 2;        // theta + outcome
    case Model::kRandomLowerPhase: return 3;      // two thetas + outcome
    case Model::kBlockedBothPaths: return 3;      // two thetas + outcome
  }
  return 0;
}

namespace detail {

inline OutcomeDistribution sample_run_distribution(const ScenarioConfig& config,
                                                   Xoshiro256StarStar& rng) {
  switch (config.model) {
    case Model::kCollapsedMixture: {
      const auto branch = rng.uniform01() < config.weight_a2 ? AbsorberBranch::kPosA
                                                             : AbsorberBranch::kPosB;
      return collapsed_branch_distribution(branch, config.geometry);
    }
    case Model::kEntangledRandomPhase:
      return crossing_distribution(kTwoPi * rng.uniform01(), 0.0, config.weight_a2);
    case Model::kCoherentFixedPhase:
      return crossing_distribution(*config.fixed_theta, 0.0, config.weight_a2);
    case Model::kFineTunedMimic:
      return outcome_distribution(
          joint_run_state(config, kTwoPi * rng.uniform01(), 0.0));
    case Model::kRandomLowerPhase: {
      const double theta_upper = kTwoPi * rng.uniform01();
      const double theta_lower = kTwoPi * rng.uniform01();
      return crossing_distribution(theta_upper, theta_lower, config.weight_a2);
    }
    case Model::kBlockedBothPaths: {
      const double theta_a = kTwoPi * rng.uniform01();
      const double theta_b = kTwoPi * rng.uniform01();
      return outcome_distribution(joint_run_state(config, theta_a, theta_b));
    }
  }
  throw ConfigError("model: unhandled model");
}

}  // namespace detail

// Trials [first, first + count) of the run identified by (config, seed).
inline TrialSummary run_trials_range(const ScenarioConfig& config, std::uint64_t seed,
                                     std::uint64_t first, std::uint64_t count) {
  validate_scenario(config);
  if (count == 0) throw ConfigError("trials: need at least one trial");

  const std::uint32_t k = draws_per_trial(config.model);
  TrialSummary out;
  out.seed = seed;
  out.model = config;
  out.n_trials = count;

  std::uint64_t i = first;
  const std::uint64_t end = first + count;
  while (i < end) {
    const std::uint64_t stream = i / kTrialsPerStream;
    auto rng = Xoshiro256StarStar::stream(seed, stream);
    rng.discard((i % kTrialsPerStream) * k);
    const std::uint64_t chunk_end = std::min(end, (stream + 1) * kTrialsPerStream);
    for (; i < chunk_end; ++i) {
      const OutcomeDistribution dist = detail::sample_run_distribution(config, rng);
      const double u = rng.uniform01();
      if (u < dist.p_click_d) {
        ++out.clicks_d;
      } else if (u < dist.p_click_d + dist.p_click_c) {
        ++out.clicks_c;
      } else {
        ++out.absorbed;
      }
    }
  }

  out.estimate_d = static_cast<double>(out.clicks_d) / static_cast<double>(count);
  out.std_err_d = std::sqrt(out.estimate_d * (1.0 - out.estimate_d) /
                            static_cast<double>(count));
  return out;
}

inline TrialSummary run_trials(const ScenarioConfig& config, std::uint64_t n_trials,
                               std::uint64_t seed) {
  return run_trials_range(config, seed, 0, n_trials);
}

// Pools two summaries of the same experiment; estimate and standard error are
// recomputed from the pooled counts. Keeps the first summary's seed.
inline TrialSummary merge(const TrialSummary& a, const TrialSummary& b) {
  if (a.model != b.model) {
    throw ConfigError("model: cannot merge summaries of different scenarios");
  }
  TrialSummary out = a;
  out.n_trials = a.n_trials + b.n_trials;
  out.clicks_d = a.clicks_d + b.clicks_d;
  out.clicks_c = a.clicks_c + b.clicks_c;
  out.absorbed = a.absorbed + b.absorbed;
  out.estimate_d = static_cast<double>(out.clicks_d) / static_cast<double>(out.n_trials);
  out.std_err_d = std::sqrt(out.estimate_d * (1.0 - out.estimate_d) /
                            static_cast<double>(out.n_trials));
  return out;
}

}  // namespace mzsup
