#pragma once

// The six experiment models and their predicted detector-D probabilities.
//
// Two families of predictions for the device with the absorber superposed over
// a clear placement (A) and one blocking the upper arm (B):
//   - collapse: each run sees a definite placement; D clicks at rate 1/8.
//   - persistent superposition with a random crossing phase: D clicks at rate
//     (3 - 2*sqrt(2)*cos theta)/8 per run, averaging 3/8 over uniform theta.
// The remaining models probe the gap between the two: a fixed crossing phase,
// a fine-tuned perturbation that mimics collapse exactly, an independent
// random phase on the lower arm, and a variant whose placements block one arm
// each so the branches never interfere.

#include <cassert>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <mzsup/errors.hpp>
#include <mzsup/interferometer.hpp>

namespace mzsup {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Model {
  kCollapsedMixture,
  kEntangledRandomPhase,
  kCoherentFixedPhase,
  kFineTunedMimic,
  kRandomLowerPhase,
  kBlockedBothPaths,
};

inline constexpr Model kAllModels[] = {
    Model::kCollapsedMixture, Model::kEntangledRandomPhase, Model::kCoherentFixedPhase,
    Model::kFineTunedMimic,   Model::kRandomLowerPhase,     Model::kBlockedBothPaths,
};

inline std::string_view model_name(Model m) {
  switch (m) {
    case Model::kCollapsedMixture: return "collapsed";
    case Model::kEntangledRandomPhase: return "entangled-random";
    case Model::kCoherentFixedPhase: return "coherent-fixed";
    case Model::kFineTunedMimic: return "fine-tuned-mimic";
    case Model::kRandomLowerPhase: return "random-lower";
    case Model::kBlockedBothPaths: return "blocked-both";
  }
  return "unknown";
}

inline Model model_from_name(std::string_view name) {
  for (Model m : kAllModels) {
    if (model_name(m) == name) return m;
  }
  throw ConfigError("model: unknown model '" + std::string(name) +
                    "' (expected one of: collapsed, entangled-random, coherent-fixed, "
                    "fine-tuned-mimic, random-lower, blocked-both)");
}

inline std::string_view model_description(Model m) {
  switch (m) {
    case Model::kCollapsedMixture:
      return "absorber settles into one definite placement per run; dark port clicks at 1/8";
    case Model::kEntangledRandomPhase:
      return "superposed absorber imprints a fresh uniform crossing phase per run; "
             "dark-port rate (3-2*sqrt(2)*cos(theta))/8 averages to 3/8";
    case Model::kCoherentFixedPhase:
      return "superposed absorber with one reproducible crossing phase theta; dark-port "
             "rate (3-2*sqrt(2)*cos(theta))/8, equal to 1/8 only at theta = pi/4";
    case Model::kFineTunedMimic:
      return "clear branch phases both arms identically, blocking branch untouched; "
             "reproduces the collapse statistics exactly at every theta";
    case Model::kRandomLowerPhase:
      return "independent random phases on the upper and lower arms; only the relative "
             "phase enters, so the average stays 3/8 and collapse is not mimicked";
    case Model::kBlockedBothPaths:
      return "placements block the upper arm and the lower arm; branches never "
             "interfere and the dark port clicks at 1/4 for any phases";
  }
  return "";
}

inline DeviceGeometry default_geometry(Model m) {
  return m == Model::kBlockedBothPaths ? blocked_both_geometry() : main_device_geometry();
}

struct ScenarioConfig {
  Model model = Model::kCollapsedMixture;
  double weight_a2 = 0.5;
  double weight_b2 = 0.5;
  std::optional<double> fixed_theta;  // only meaningful for kCoherentFixedPhase
  DeviceGeometry geometry = main_device_geometry();

  bool operator==(const ScenarioConfig&) const = default;
};

inline ScenarioConfig make_scenario(Model m, double weight_a2 = 0.5, double weight_b2 = 0.5,
                                    std::optional<double> fixed_theta = std::nullopt) {
  return {m, weight_a2, weight_b2, fixed_theta, default_geometry(m)};
}

// Rejects degenerate configs at the boundary; core ops assume valid states.
// With require_fixed_theta false (sweeps vary theta themselves) a coherent
// config may omit fixed_theta, but no other model may carry one.
inline void validate_scenario(const ScenarioConfig& config, bool require_fixed_theta = true) {
  if (!(config.weight_a2 >= 0.0 && config.weight_a2 <= 1.0) ||
      !(config.weight_b2 >= 0.0 && config.weight_b2 <= 1.0)) {
    throw ConfigError("weightA2/weightB2: branch weights must lie in [0, 1]");
  }
  if (std::abs(config.weight_a2 + config.weight_b2 - 1.0) > 1e-12) {
    throw ConfigError("weightA2/weightB2: branch weights must sum to 1");
  }
  if (config.model == Model::kCoherentFixedPhase) {
    if (require_fixed_theta && !config.fixed_theta.has_value()) {
      throw ConfigError("fixedTheta: coherent-fixed requires a phase (set --theta)");
    }
  } else if (config.fixed_theta.has_value()) {
    throw ConfigError("fixedTheta: only coherent-fixed takes a fixed phase");
  }
  if (config.geometry != default_geometry(config.model)) {
    throw ConfigError("geometry: model '" + std::string(model_name(config.model)) +
                      "' uses its canonical absorber placements");
  }
}

enum class Method { kClosedForm, kQuadrature, kJointEngine };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kClosedForm: return "closed-form";
    case Method::kQuadrature: return "quadrature";
    case Method::kJointEngine: return "joint-engine";
  }
  return "unknown";
}

struct AnalyticResult {
  double probability = 0.0;
  Method method = Method::kClosedForm;
  ScenarioConfig model;

  bool operator==(const AnalyticResult&) const = default;
};

// --- engine routes -----------------------------------------------------------

// Pure-state pass with the absorber superposed over {clear, blocking the upper
// arm}: the upper-arm amplitude keeps the fraction sqrt(weight_a2) and picks up
// theta_upper while crossing, the rest joins the absorbed channel; the lower
// arm takes an optional independent kick theta_lower.
inline PhotonState<> superposed_crossing_state(double theta_upper, double theta_lower = 0.0,
                                               double weight_a2 = 0.5) {
  auto s = apply_mirrors(apply_beam_splitter(photon_in(Mode::kRightward)));
  s = apply_partial_absorber(s, kUpperArm,
                             std::polar(std::sqrt(weight_a2), theta_upper));
  s = apply_phase(s, kLowerArm, theta_lower);
  return apply_beam_splitter(s);
}

// Joint pass for the models whose branches stay tagged by the absorber state.
inline JointState<> joint_run_state(const ScenarioConfig& config, double phase_a,
                                    double phase_b) {
  return evolve_joint(make_joint(config.weight_a2, config.weight_b2), config.geometry,
                      phase_a, phase_b);
}

// --- the three-outcome distribution of a single run --------------------------

struct OutcomeDistribution {
  double p_click_d = 0.0;
  double p_click_c = 0.0;
  double p_absorbed = 0.0;
};

inline OutcomeDistribution outcome_distribution(const PhotonState<>& s) {
  return {detection_probability(s, kDetectorD), detection_probability(s, kDetectorC),
          detection_probability(s, Mode::kAbsorbed)};
}

inline OutcomeDistribution outcome_distribution(const JointState<>& j) {
  return {detection_probability(j, kDetectorD), detection_probability(j, kDetectorC),
          detection_probability(j, Mode::kAbsorbed)};
}

// Closed form of the superposed-crossing run, agreeing with the engine route
// to float rounding: pD = (1 + wA2 - 2*sqrt(wA2)*cos(du - dl))/4, pAbs = wB2/2.
inline OutcomeDistribution crossing_distribution(double theta_upper, double theta_lower = 0.0,
                                                 double weight_a2 = 0.5) {
  const double lam = std::sqrt(weight_a2);
  const double cosrel = std::cos(theta_upper - theta_lower);
  const double p_d = (1.0 + weight_a2 - 2.0 * lam * cosrel) / 4.0;
  const double p_c = (1.0 + weight_a2 + 2.0 * lam * cosrel) / 4.0;
  return {p_d, p_c, (1.0 - weight_a2) / 2.0};
}

enum class AbsorberBranch { kPosA, kPosB };

// Collapse outcome for one definite placement of the absorber.
inline OutcomeDistribution collapsed_branch_distribution(AbsorberBranch branch,
                                                         const DeviceGeometry& geometry) {
  const auto blocked =
      branch == AbsorberBranch::kPosA ? geometry.blocked_in_pos_a : geometry.blocked_in_pos_b;
  if (!blocked.has_value()) return {0.0, 1.0, 0.0};  // both arms open: dark port exact
  return {0.25, 0.25, 0.5};
}

// --- model probabilities -----------------------------------------------------

// Collapse: an incoherent mixture of the two definite placements of the main
// device. Only the blocking placement can reach D, with probability 1/4.
inline AnalyticResult pb_collapsed(double weight_a2, double weight_b2) {
  auto config = make_scenario(Model::kCollapsedMixture, weight_a2, weight_b2);
  validate_scenario(config);
  return {weight_b2 * 0.25, Method::kClosedForm, config};
}

// Persistent superposition, conditioned on crossing phase theta.
inline double pb_random_phase_given_theta(double theta) {
  return crossing_distribution(theta).p_click_d;
}

// Uniform average over theta; the cosine term integrates to zero exactly.
inline AnalyticResult pb_random_phase_average() {
  return {3.0 / 8.0, Method::kClosedForm, make_scenario(Model::kEntangledRandomPhase)};
}

// Fixed reproducible crossing phase. The absolute value is vacuous for real
// phases since 3 > 2*sqrt(2) >= 2*sqrt(2)*cos(theta), asserted below.
inline AnalyticResult pb_coherent_fixed(double theta) {
  const double arg = 3.0 - 2.0 * std::sqrt(2.0) * std::cos(theta);
  assert(arg > 0.0);
  auto config = make_scenario(Model::kCoherentFixedPhase, 0.5, 0.5, theta);
  return {std::abs(arg) / 8.0, Method::kClosedForm, config};
}

// Fine-tuned mimic: branch A (clear) phases both arms by theta so its dark
// port stays dark; branch B is the plain blocked-arm run. The result is the
// collapse value at every theta.
inline AnalyticResult pb_fine_tuned_mimic(double theta) {
  auto config = make_scenario(Model::kFineTunedMimic);
  auto j = joint_run_state(config, theta, 0.0);
  return {detection_probability(j, kDetectorD), Method::kJointEngine, config};
}

// Independent kicks on both arms; only theta_upper - theta_lower enters.
inline double pb_random_lower(double theta_upper, double theta_lower) {
  return detection_probability(superposed_crossing_state(theta_upper, theta_lower),
                               kDetectorD);
}

// Variant geometry where each placement blocks one arm. Both branches lose
// the interference cross term, so the value is phase-independent.
inline AnalyticResult pb_blocked_both(double theta_a, double theta_b) {
  auto config = make_scenario(Model::kBlockedBothPaths);
  auto j = joint_run_state(config, theta_a, theta_b);
  return {detection_probability(j, kDetectorD), Method::kJointEngine, config};
}

// Ensemble-average dark-port probability of a model; the reference value a
// long simulate run should approach.
inline AnalyticResult ensemble_average_probability(const ScenarioConfig& config) {
  validate_scenario(config);
  switch (config.model) {
    case Model::kCollapsedMixture:
      return pb_collapsed(config.weight_a2, config.weight_b2);
    case Model::kEntangledRandomPhase:
      return {(1.0 + config.weight_a2) / 4.0, Method::kClosedForm, config};
    case Model::kCoherentFixedPhase:
      return {crossing_distribution(*config.fixed_theta, 0.0, config.weight_a2).p_click_d,
              Method::kClosedForm, config};
    case Model::kFineTunedMimic:
      return {detection_probability(joint_run_state(config, 0.0, 0.0), kDetectorD),
              Method::kJointEngine, config};
    case Model::kRandomLowerPhase:
      return {(1.0 + config.weight_a2) / 4.0, Method::kClosedForm, config};
    case Model::kBlockedBothPaths:
      return {detection_probability(joint_run_state(config, 0.0, 0.0), kDetectorD),
              Method::kJointEngine, config};
  }
  throw ConfigError("model: unhandled model");
}

// Dark-port probability at one swept phase; what a sweep tabulates per theta.
// For random-lower theta is the relative phase of the two kicks; for
// blocked-both the same phase is handed to both branches.
inline double per_theta_probability(const ScenarioConfig& config, double theta) {
  validate_scenario(config, /*require_fixed_theta=*/false);
  switch (config.model) {
    case Model::kCollapsedMixture:
      return config.weight_b2 * 0.25;
    case Model::kEntangledRandomPhase:
    case Model::kCoherentFixedPhase:
      return crossing_distribution(theta, 0.0, config.weight_a2).p_click_d;
    case Model::kFineTunedMimic:
      return detection_probability(joint_run_state(config, theta, 0.0), kDetectorD);
    case Model::kRandomLowerPhase:
      return detection_probability(superposed_crossing_state(theta, 0.0, config.weight_a2),
                                   kDetectorD);
    case Model::kBlockedBothPaths:
      return detection_probability(joint_run_state(config, theta, theta), kDetectorD);
  }
  throw ConfigError("model: unhandled model");
}

}  // namespace mzsup
