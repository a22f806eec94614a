#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "holevac/reports.hpp"

namespace holevac::reports {

using nlohmann::json;

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"engine_vs_closed", 0.02},    {"oracle_vs_closed", 0.01},
      {"oracle_vs_engine", 0.005},   {"norm_drift", 1e-9},
      {"orthogonality", 1e-8},       {"identity", 1e-10},
      {"spectrum", 1e-12},           {"slater", 1e-12},
      {"vacuum_finite_B", 1e-4},     {"vacuum_quadrature", 1e-8},
      {"extrapolation", 0.003},      {"remainder_order", 2.7},
  };
  return defaults;
}

ModelParams RunConfig::model() const { return ModelParams{m, L, R}; }

PotentialSpec RunConfig::potential() const {
  PotentialSpec v;
  v.w = w;
  v.amplitude = amplitude;
  v.shape = PulseShape::sinc;
  v.t0 = -T;
  v.tf = T;
  return v;
}

double RunConfig::tolerance(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

void RunConfig::validate() const {
  const auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigError(std::string(what) + " must be positive and finite");
    }
  };
  const auto non_negative = [](double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ConfigError(std::string(what) + " must be non-negative and finite");
    }
  };
  positive(m, "m");
  positive(L, "L");
  positive(T, "T");
  non_negative(q, "q");
  non_negative(oracle_q, "oracle_q");
  non_negative(amplitude, "amplitude");
  non_negative(integrator_step, "integrator_step");
  non_negative(quadrature_step, "quadrature_step");
  if (w < 1) throw ConfigError("w must be a positive integer");
  if (R < 1) throw ConfigError("R must be a positive integer");
  if (R < w) throw ConfigError("R must be at least w");
  const double k = 2.0 * pi * w / L;
  if (!(k < m)) {
    std::ostringstream msg;
    msg << "k_w = " << k << " >= m = " << m
        << "; the potential requires k_w = 2πw/L < m";
    throw ConfigError(msg.str());
  }
  if (!(vacuum_B > k)) throw ConfigError("vacuum_B must exceed k_w");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json, got '" + format + "'");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  for (const auto& [name, value] : tolerances) {
    if (!default_tolerances().count(name)) {
      throw ConfigError("unknown tolerance '" + name + "'");
    }
    positive(value, ("tolerance " + name).c_str());
  }
}

RunConfig default_config() { return RunConfig{}; }

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "m",        "L",           "L_over_pi",       "w",
      "q",        "amplitude",   "R",               "T",
      "oracle_q", "integrator_step", "quadrature_step", "vacuum_B",
      "tolerances", "seed",      "output_dir",      "threads",
      "format",   "k_w"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  RunConfig c;
  try {
    const auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) doc.at(key).get_to(field);
    };
    get("m", c.m);
    get("w", c.w);
    get("q", c.q);
    get("amplitude", c.amplitude);
    get("T", c.T);
    get("oracle_q", c.oracle_q);
    get("integrator_step", c.integrator_step);
    get("quadrature_step", c.quadrature_step);
    get("vacuum_B", c.vacuum_B);
    get("seed", c.seed);
    get("output_dir", c.output_dir);
    get("threads", c.threads);
    get("format", c.format);
    if (doc.contains("L") && doc.contains("L_over_pi")) {
      throw ConfigError("give either L or L_over_pi, not both");
    }
    get("L", c.L);
    if (doc.contains("L_over_pi")) c.L = doc.at("L_over_pi").get<double>() * pi;
    if (doc.contains("R")) {
      doc.at("R").get_to(c.R);
    } else {
      // p_R = 30 m
      c.R = static_cast<int>(std::lround(30.0 * c.m * c.L / (2.0 * pi)));
    }
    if (doc.contains("tolerances")) {
      const json& tol = doc.at("tolerances");
      if (!tol.is_object()) throw ConfigError("tolerances must be an object");
      for (const auto& [name, value] : tol.items()) c.tolerances[name] = value.get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  // k_w is derived; reports carry it, so a copied report config may too
  if (doc.contains("k_w")) {
    const double given = doc.at("k_w").is_number() ? doc.at("k_w").get<double>() : NAN;
    if (!(std::abs(given - 2.0 * pi * c.w / c.L) <= 1e-12 * given)) {
      throw ConfigError("k_w does not match 2πw/L for the given w and L");
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const RunConfig& c) {
  json tol = json::object();
  for (const auto& [name, value] : default_tolerances()) tol[name] = c.tolerance(name);
  return json{{"m", c.m},
              {"L", c.L},
              {"w", c.w},
              {"k_w", 2.0 * pi * c.w / c.L},
              {"q", c.q},
              {"amplitude", c.amplitude},
              {"R", c.R},
              {"T", c.T},
              {"oracle_q", c.oracle_q},
              {"integrator_step", c.integrator_step},
              {"quadrature_step", c.quadrature_step},
              {"vacuum_B", c.vacuum_B},
              {"tolerances", tol},
              {"seed", c.seed},
              {"output_dir", c.output_dir},
              {"threads", c.threads},
              {"format", c.format}};
}

ModelParams oracle_params(const RunConfig& config, const ModeIndex& mode, double q) {
  const int rungs = ladder_rungs_for(q, config.amplitude);
  return ModelParams{config.m, config.L, std::abs(mode.r) + rungs * config.w};
}

IntegratorConfig oracle_integrator(const RunConfig& config, double q) {
  IntegratorConfig ic;
  ic.step = config.integrator_step;
  ic.ladder_rungs = ladder_rungs_for(q, config.amplitude);
  return ic;
}

}  // namespace holevac::reports
