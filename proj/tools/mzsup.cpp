// Command-line front end. Subcommands map one-to-one onto the library:
//   analytic      dark-port probability of a model (closed form, quadrature,
//                 or the two-branch engine, as appropriate)
//   simulate      Monte Carlo click counts with a reproducible seed
//   sweep         tabulate probability against the absorber phase
//   discriminate  verdict from an observed click count
//   models        list the model identifiers this tool accepts
//
// Exit codes: 0 success, 2 bad configuration or flags, 3 I/O failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <mzsup/analysis.hpp>
#include <mzsup/errors.hpp>
#include <mzsup/io.hpp>
#include <mzsup/monte_carlo.hpp>
#include <mzsup/scenarios.hpp>

namespace {

using namespace mzsup;

struct CommonOpts {
  std::string config_path;
  std::string model_str;
  std::string format_str;
  std::string out_path;
  CLI::Option* config_opt = nullptr;
  CLI::Option* model_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o, bool with_model) {
  o.config_opt = sub->add_option("--config", o.config_path,
                                 "'key = value' config file; explicit flags override it");
  if (with_model) {
    o.model_opt =
        sub->add_option("--model", o.model_str,
                        "collapsed | entangled-random | coherent-fixed | fine-tuned-mimic | "
                        "random-lower | blocked-both (default: collapsed)");
  }
  o.format_opt = sub->add_option("--format", o.format_str, "output format (default: json)")
                     ->check(CLI::IsMember({"json", "csv"}));
  o.out_opt = sub->add_option("--out", o.out_path, "write to this path instead of stdout");
}

// Config file first, then flags on top. Choosing a model re-derives its
// canonical absorber geometry.
ExperimentSpec resolve_spec(const CommonOpts& o) {
  ExperimentSpec spec;
  if (o.config_opt->count() > 0) spec = parse_config_file(o.config_path);
  if (o.model_opt != nullptr && o.model_opt->count() > 0) {
    spec.scenario.model = model_from_name(o.model_str);
    spec.scenario.geometry = default_geometry(spec.scenario.model);
  }
  if (o.format_opt->count() > 0) spec.output_format = format_from_name(o.format_str);
  if (o.out_opt->count() > 0) spec.output_path = o.out_path;
  return spec;
}

void emit(const ExperimentSpec& spec, const nlohmann::json& j, const std::string& csv) {
  const std::string text =
      spec.output_format == OutputFormat::kJson ? j.dump(2) + "\n" : csv;
  if (spec.output_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(spec.output_path, text);
  }
}

// Probability at one phase value. Models whose per-theta law is the crossing
// law report the closed form; the engine-defined models report the engine.
AnalyticResult analytic_at_theta(const ScenarioConfig& config, double theta) {
  validate_scenario(config, /*require_fixed_theta=*/false);
  switch (config.model) {
    case Model::kCollapsedMixture:
      return {config.weight_b2 * 0.25, Method::kClosedForm, config};
    case Model::kEntangledRandomPhase:
    case Model::kCoherentFixedPhase:
    case Model::kRandomLowerPhase:
      return {crossing_distribution(theta, 0.0, config.weight_a2).p_click_d,
              Method::kClosedForm, config};
    default:
      return {per_theta_probability(config, theta), Method::kJointEngine, config};
  }
}

void run_analytic(const CommonOpts& o, const CLI::Option* theta_opt, double theta,
                  const CLI::Option* points_opt, int points) {
  ExperimentSpec spec = resolve_spec(o);
  AnalyticResult result;
  std::optional<double> theta_used;
  if (spec.scenario.model == Model::kCoherentFixedPhase) {
    if (theta_opt->count() > 0) spec.scenario.fixed_theta = theta;
    result = ensemble_average_probability(spec.scenario);
  } else if (theta_opt->count() > 0) {
    theta_used = theta;
    result = analytic_at_theta(spec.scenario, theta);
  } else if (points_opt->count() > 0) {
    const auto model = spec.scenario.model;
    if (model != Model::kEntangledRandomPhase && model != Model::kRandomLowerPhase) {
      throw ConfigError(
          "points: quadrature averaging applies to the random-phase models "
          "(entangled-random, random-lower)");
    }
    validate_scenario(spec.scenario);
    const double wa2 = spec.scenario.weight_a2;
    const double avg = quadrature_average(
        [wa2](double t) { return crossing_distribution(t, 0.0, wa2).p_click_d; }, points);
    result = {avg, Method::kQuadrature, spec.scenario};
  } else {
    result = ensemble_average_probability(spec.scenario);
  }
  nlohmann::json j{{"provenance", provenance(result.model)}, {"result", result}};
  if (theta_used) j["theta"] = *theta_used;
  emit(spec, j, to_csv(result));
}

void run_simulate(const CommonOpts& o, const CLI::Option* trials_opt, std::uint64_t trials,
                  const CLI::Option* seed_opt, std::uint64_t seed,
                  const CLI::Option* theta_opt, double theta) {
  ExperimentSpec spec = resolve_spec(o);
  if (trials_opt->count() > 0) spec.n_trials = trials;
  if (seed_opt->count() > 0) spec.seed = seed;
  if (theta_opt->count() > 0) spec.scenario.fixed_theta = theta;
  const TrialSummary summary = run_trials(spec.scenario, spec.n_trials, spec.seed);
  nlohmann::json j{
      {"provenance", provenance(spec.scenario, spec.seed)},
      {"summary", summary},
      {"analyticReference", ensemble_average_probability(spec.scenario).probability}};
  emit(spec, j, to_csv(summary));
}

void run_sweep(const CommonOpts& o, int points) {
  ExperimentSpec spec = resolve_spec(o);
  const auto rows = sweep_theta(spec.scenario, points);
  nlohmann::json j{{"provenance", provenance(spec.scenario)},
                   {"points", points},
                   {"rows", rows}};
  emit(spec, j, to_csv(rows));
}

void run_discriminate(const CommonOpts& o, std::uint64_t clicks,
                      const CLI::Option* trials_opt, std::uint64_t trials,
                      double confidence) {
  ExperimentSpec spec = resolve_spec(o);
  if (trials_opt->count() > 0) spec.n_trials = trials;
  const DiscriminationReport report = discriminate(clicks, spec.n_trials, confidence);
  nlohmann::json j{{"provenance", nlohmann::json{{"artifactVersion", kArtifactVersion}}},
                   {"report", report}};
  emit(spec, j, to_csv(report));
}

void run_models(const CommonOpts& o) {
  ExperimentSpec spec = resolve_spec(o);
  nlohmann::json list = nlohmann::json::array();
  std::string csv = "model,description\n";
  for (Model m : kAllModels) {
    list.push_back({{"id", model_name(m)}, {"description", model_description(m)}});
    csv += std::string(model_name(m)) + "," + csv_field(model_description(m)) + "\n";
  }
  emit(spec, nlohmann::json{{"models", list}}, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mach-Zehnder dark-port probabilities for collapse and persistence models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kArtifactVersion);

  auto* analytic = app.add_subcommand("analytic", "closed-form dark-port probability");
  CommonOpts an_common;
  add_common(analytic, an_common, /*with_model=*/true);
  double an_theta = 0.0;
  int an_points = 0;
  auto* an_theta_opt =
      analytic->add_option("--theta", an_theta, "evaluate at this absorber phase (radians)");
  auto* an_points_opt = analytic->add_option(
      "--points", an_points, "average a random-phase model by midpoint quadrature");
  an_theta_opt->excludes(an_points_opt);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo click counts");
  CommonOpts si_common;
  add_common(simulate, si_common, /*with_model=*/true);
  std::uint64_t si_trials = 0;
  std::uint64_t si_seed = 0;
  double si_theta = 0.0;
  auto* si_trials_opt = simulate->add_option("--trials", si_trials, "number of photons to run");
  auto* si_seed_opt = simulate->add_option("--seed", si_seed, "RNG seed (default 0)");
  auto* si_theta_opt =
      simulate->add_option("--theta", si_theta, "fixed phase for the coherent-fixed model");

  auto* sweep = app.add_subcommand("sweep", "tabulate probability against phase");
  CommonOpts sw_common;
  add_common(sweep, sw_common, /*with_model=*/true);
  int sw_points = 360;
  sweep->add_option("--points", sw_points, "grid points over one period (default 360)");

  auto* discriminate_cmd =
      app.add_subcommand("discriminate", "verdict from an observed click count");
  CommonOpts di_common;
  add_common(discriminate_cmd, di_common, /*with_model=*/false);
  std::uint64_t di_clicks = 0;
  std::uint64_t di_trials = 0;
  double di_confidence = 0.95;
  discriminate_cmd->add_option("--clicks", di_clicks, "observed dark-port clicks")->required();
  auto* di_trials_opt =
      discriminate_cmd->add_option("--trials", di_trials, "number of photons observed");
  discriminate_cmd->add_option("--confidence", di_confidence,
                               "interval confidence level (default 0.95)");

  auto* models_cmd = app.add_subcommand("models", "list model identifiers");
  CommonOpts mo_common;
  add_common(models_cmd, mo_common, /*with_model=*/false);

  analytic->callback(
      [&] { run_analytic(an_common, an_theta_opt, an_theta, an_points_opt, an_points); });
  simulate->callback([&] {
    run_simulate(si_common, si_trials_opt, si_trials, si_seed_opt, si_seed, si_theta_opt,
                 si_theta);
  });
  sweep->callback([&] { run_sweep(sw_common, sw_points); });
  discriminate_cmd->callback(
      [&] { run_discriminate(di_common, di_clicks, di_trials_opt, di_trials, di_confidence); });
  models_cmd->callback([&] { run_models(mo_common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
