#pragma once

// Serialization of results and experiment specs. JSON outputs re-parse into
// the records that produced them with exact field equality; CSV outputs are
// header-first, comma-separated, LF-terminated, with 12 significant digits on
// every number.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include <mzsup/analysis.hpp>
#include <mzsup/errors.hpp>
#include <mzsup/monte_carlo.hpp>
#include <mzsup/rng.hpp>
#include <mzsup/scenarios.hpp>

namespace mzsup {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class OutputFormat { kJson, kCsv };

inline std::string_view format_name(OutputFormat f) {
  return f == OutputFormat::kJson ? "json" : "csv";
}

inline OutputFormat format_from_name(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw ConfigError("outputFormat: expected 'csv' or 'json', got '" + std::string(name) + "'");
}

// Everything one run of the tool needs to know.
struct ExperimentSpec {
  ScenarioConfig scenario;
  std::uint64_t n_trials = 0;  // 0 means "not set"; simulate requires >= 1
  std::uint64_t seed = 0;
  OutputFormat output_format = OutputFormat::kJson;
  std::string output_path;  // empty writes to stdout

  bool operator==(const ExperimentSpec&) const = default;
};

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Quotes a CSV field when it contains a delimiter, quote, or newline.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// --- JSON glue ---------------------------------------------------------------

inline std::string_view arm_name(Mode m) {
  return m == kUpperArm ? "upper" : "lower";
}

inline Mode arm_from_name(std::string_view name) {
  if (name == "upper") return kUpperArm;
  if (name == "lower") return kLowerArm;
  throw ConfigError("geometry: expected arm 'upper' or 'lower', got '" + std::string(name) +
                    "'");
}

inline void to_json(nlohmann::json& j, const DeviceGeometry& g) {
  j = nlohmann::json::object();
  j["blockedInPosA"] =
      g.blocked_in_pos_a ? nlohmann::json(arm_name(*g.blocked_in_pos_a)) : nlohmann::json();
  j["blockedInPosB"] =
      g.blocked_in_pos_b ? nlohmann::json(arm_name(*g.blocked_in_pos_b)) : nlohmann::json();
}

inline void from_json(const nlohmann::json& j, DeviceGeometry& g) {
  g.blocked_in_pos_a = j.at("blockedInPosA").is_null()
                           ? std::nullopt
                           : std::optional<Mode>(arm_from_name(
                                 j.at("blockedInPosA").get<std::string>()));
  g.blocked_in_pos_b = j.at("blockedInPosB").is_null()
                           ? std::nullopt
                           : std::optional<Mode>(arm_from_name(
                                 j.at("blockedInPosB").get<std::string>()));
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = nlohmann::json{{"model", model_name(c.model)},
                     {"weightA2", c.weight_a2},
                     {"weightB2", c.weight_b2},
                     {"fixedTheta", c.fixed_theta ? nlohmann::json(*c.fixed_theta)
                                                  : nlohmann::json()},
                     {"geometry", c.geometry}};
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& c) {
  c.model = model_from_name(j.at("model").get<std::string>());
  c.weight_a2 = j.at("weightA2").get<double>();
  c.weight_b2 = j.at("weightB2").get<double>();
  c.fixed_theta = j.at("fixedTheta").is_null()
                      ? std::nullopt
                      : std::optional<double>(j.at("fixedTheta").get<double>());
  c.geometry = j.at("geometry").get<DeviceGeometry>();
}

// Provenance identifies what produced a result; sampling outputs also carry
// the generator name and seed.
inline nlohmann::json provenance(const ScenarioConfig& config,
                                 std::optional<std::uint64_t> seed = std::nullopt) {
  nlohmann::json p{{"artifactVersion", kArtifactVersion}, {"model", model_name(config.model)}};
  if (seed) {
    p["rngAlgorithm"] = kRngAlgorithm;
    p["seed"] = *seed;
  }
  return p;
}

inline void to_json(nlohmann::json& j, const AnalyticResult& r) {
  j = nlohmann::json{{"probability", r.probability},
                     {"method", method_name(r.method)},
                     {"model", r.model}};
}

inline void from_json(const nlohmann::json& j, AnalyticResult& r) {
  r.probability = j.at("probability").get<double>();
  const auto name = j.at("method").get<std::string>();
  if (name == method_name(Method::kClosedForm)) {
    r.method = Method::kClosedForm;
  } else if (name == method_name(Method::kQuadrature)) {
    r.method = Method::kQuadrature;
  } else if (name == method_name(Method::kJointEngine)) {
    r.method = Method::kJointEngine;
  } else {
    throw ConfigError("method: unknown analytic method '" + name + "'");
  }
  r.model = j.at("model").get<ScenarioConfig>();
}

inline void to_json(nlohmann::json& j, const TrialSummary& s) {
  j = nlohmann::json{{"nTrials", s.n_trials},   {"clicksD", s.clicks_d},
                     {"clicksC", s.clicks_c},   {"absorbed", s.absorbed},
                     {"estimateD", s.estimate_d}, {"stdErrD", s.std_err_d},
                     {"seed", s.seed},          {"model", s.model}};
}

inline void from_json(const nlohmann::json& j, TrialSummary& s) {
  s.n_trials = j.at("nTrials").get<std::uint64_t>();
  s.clicks_d = j.at("clicksD").get<std::uint64_t>();
  s.clicks_c = j.at("clicksC").get<std::uint64_t>();
  s.absorbed = j.at("absorbed").get<std::uint64_t>();
  s.estimate_d = j.at("estimateD").get<double>();
  s.std_err_d = j.at("stdErrD").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.model = j.at("model").get<ScenarioConfig>();
}

inline void to_json(nlohmann::json& j, const WilsonInterval& w) {
  j = nlohmann::json{{"low", w.low}, {"high", w.high}};
}

inline void from_json(const nlohmann::json& j, WilsonInterval& w) {
  w.low = j.at("low").get<double>();
  w.high = j.at("high").get<double>();
}

inline void to_json(nlohmann::json& j, const DiscriminationReport& r) {
  j = nlohmann::json{{"clicks", r.clicks},
                     {"nTrials", r.n_trials},
                     {"confidence", r.confidence},
                     {"pCollapse", r.p_collapse},
                     {"pPersistence", r.p_persistence},
                     {"logLikelihoodRatio", r.llr},
                     {"wilson", r.interval},
                     {"verdict", verdict_name(r.verdict)},
                     {"caveat", r.caveat}};
}

inline void from_json(const nlohmann::json& j, DiscriminationReport& r) {
  r.clicks = j.at("clicks").get<std::uint64_t>();
  r.n_trials = j.at("nTrials").get<std::uint64_t>();
  r.confidence = j.at("confidence").get<double>();
  r.p_collapse = j.at("pCollapse").get<double>();
  r.p_persistence = j.at("pPersistence").get<double>();
  r.llr = j.at("logLikelihoodRatio").get<double>();
  r.interval = j.at("wilson").get<WilsonInterval>();
  const auto name = j.at("verdict").get<std::string>();
  if (name == verdict_name(Verdict::kFavorsCollapse)) {
    r.verdict = Verdict::kFavorsCollapse;
  } else if (name == verdict_name(Verdict::kFavorsPersistence)) {
    r.verdict = Verdict::kFavorsPersistence;
  } else if (name == verdict_name(Verdict::kInconclusive)) {
    r.verdict = Verdict::kInconclusive;
  } else {
    throw ConfigError("verdict: unknown verdict '" + name + "'");
  }
  r.caveat = j.at("caveat").get<std::string>();
}

inline void to_json(nlohmann::json& j, const SweepRow& row) {
  j = nlohmann::json{{"theta", row.theta}, {"probability", row.probability}};
}

inline void from_json(const nlohmann::json& j, SweepRow& row) {
  row.theta = j.at("theta").get<double>();
  row.probability = j.at("probability").get<double>();
}

// --- CSV rendering -----------------------------------------------------------

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "theta,probability\n";
  for (const auto& row : rows) {
    out += format_number(row.theta) + "," + format_number(row.probability) + "\n";
  }
  return out;
}

inline std::string to_csv(const AnalyticResult& r) {
  std::string out = "model,method,probability\n";
  out += std::string(model_name(r.model.model)) + "," + std::string(method_name(r.method)) +
         "," + format_number(r.probability) + "\n";
  return out;
}

inline std::string to_csv(const TrialSummary& s) {
  std::string out = "model,nTrials,clicksD,clicksC,absorbed,estimateD,stdErrD,seed\n";
  std::ostringstream line;
  line << model_name(s.model.model) << ',' << s.n_trials << ',' << s.clicks_d << ','
       << s.clicks_c << ',' << s.absorbed << ',' << format_number(s.estimate_d) << ','
       << format_number(s.std_err_d) << ',' << s.seed << '\n';
  return out + line.str();
}

inline std::string to_csv(const DiscriminationReport& r) {
  std::string out =
      "clicks,nTrials,confidence,logLikelihoodRatio,wilsonLow,wilsonHigh,verdict\n";
  std::ostringstream line;
  line << r.clicks << ',' << r.n_trials << ',' << format_number(r.confidence) << ','
       << format_number(r.llr) << ',' << format_number(r.interval.low) << ','
       << format_number(r.interval.high) << ',' << verdict_name(r.verdict) << '\n';
  return out + line.str();
}

// --- config files ------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
  if (used != value.size()) throw ConfigError(key + ": not a number: '" + value + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-') {
    throw ConfigError(key + ": not a non-negative integer: '" + value + "'");
  }
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a non-negative integer: '" + value + "'");
  }
  if (used != value.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + value + "'");
  }
  return out;
}

}  // namespace detail

// Flat "key = value" per line; blank lines and lines starting with '#' are
// skipped. Keys match the ExperimentSpec field names documented in the README.
inline ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key == "model") {
      spec.scenario.model = model_from_name(value);
      spec.scenario.geometry = default_geometry(spec.scenario.model);
    } else if (key == "weightA2") {
      spec.scenario.weight_a2 = detail::parse_double(key, value);
    } else if (key == "weightB2") {
      spec.scenario.weight_b2 = detail::parse_double(key, value);
    } else if (key == "fixedTheta") {
      spec.scenario.fixed_theta = detail::parse_double(key, value);
    } else if (key == "nTrials") {
      spec.n_trials = detail::parse_uint(key, value);
    } else if (key == "seed") {
      spec.seed = detail::parse_uint(key, value);
    } else if (key == "outputFormat") {
      spec.output_format = format_from_name(value);
    } else if (key == "outputPath") {
      spec.output_path = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return spec;
}

inline ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace mzsup
