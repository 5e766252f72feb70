#include "finslab/config.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "finslab/errors.hpp"

namespace finslab {

std::string format_real(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

const std::vector<std::string> kKnownSuites = {"classify", "validate", "rigidity"};

double require_number(const json& j, const char* field, ConfigCode code) {
  if (!j.is_number()) throw ConfigError(code, std::string(field) + " must be a number");
  return j.get<double>();
}

void parse_constant(const json& j, const char* field, bool* scan, double* value) {
  if (j.is_string()) {
    if (j.get<std::string>() != "scan")
      throw ConfigError(ConfigCode::bad_constant,
                        std::string(field) + " must be a number or \"scan\"");
    *scan = true;
    *value = 0.0;
    return;
  }
  *scan = false;
  *value = require_number(j, field, ConfigCode::bad_constant);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigCode::bad_field, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError(ConfigCode::bad_field, "config must be a JSON object");

  RunConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "metric") {
      if (!v.is_string()) throw ConfigError(ConfigCode::bad_field, "metric must be a string");
      cfg.metric = v.get<std::string>();
    } else if (key == "psi") {
      if (!v.is_string()) throw ConfigError(ConfigCode::bad_field, "psi must be a string");
      cfg.psi = v.get<std::string>();
    } else if (key == "params") {
      if (!v.is_object()) throw ConfigError(ConfigCode::bad_field, "params must be an object");
      for (auto p = v.begin(); p != v.end(); ++p)
        cfg.params[p.key()] = require_number(p.value(), "params entry", ConfigCode::bad_field);
    } else if (key == "n") {
      if (!v.is_number_integer())
        throw ConfigError(ConfigCode::bad_dimension, "n must be an integer");
      cfg.n = v.get<int>();
    } else if (key == "samples") {
      if (!v.is_number_integer())
        throw ConfigError(ConfigCode::bad_samples, "samples must be an integer");
      cfg.samples = v.get<int>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError(ConfigCode::bad_field, "seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "r_range") {
      if (!v.is_array() || v.size() != 2)
        throw ConfigError(ConfigCode::bad_r_range, "r_range must be [r_min, r_max]");
      cfg.r_range = {require_number(v[0], "r_range", ConfigCode::bad_r_range),
                     require_number(v[1], "r_range", ConfigCode::bad_r_range)};
    } else if (key == "u_range") {
      if (!v.is_array() || v.size() != 2)
        throw ConfigError(ConfigCode::bad_field, "u_range must be [u_min, u_max]");
      cfg.u_range = {require_number(v[0], "u_range", ConfigCode::bad_field),
                     require_number(v[1], "u_range", ConfigCode::bad_field)};
    } else if (key == "tolerance_zero") {
      cfg.tolerance_zero = require_number(v, "tolerance_zero", ConfigCode::bad_tolerance);
    } else if (key == "threshold_nonzero") {
      cfg.threshold_nonzero = require_number(v, "threshold_nonzero", ConfigCode::bad_tolerance);
    } else if (key == "k1") {
      parse_constant(v, "k1", &cfg.k1_scan, &cfg.k1_value);
    } else if (key == "c") {
      parse_constant(v, "c", &cfg.c_scan, &cfg.c_value);
    } else if (key == "k_fn") {
      if (!v.is_string()) throw ConfigError(ConfigCode::bad_expression, "k_fn must be a string");
      cfg.k_fn = v.get<std::string>();
    } else if (key == "k2_fn") {
      if (!v.is_string()) throw ConfigError(ConfigCode::bad_expression, "k2_fn must be a string");
      cfg.k2_fn = v.get<std::string>();
    } else if (key == "suites") {
      if (!v.is_array()) throw ConfigError(ConfigCode::bad_suite, "suites must be an array");
      cfg.suites.clear();
      for (const auto& s : v) {
        if (!s.is_string()) throw ConfigError(ConfigCode::bad_suite, "suites entries are strings");
        cfg.suites.push_back(s.get<std::string>());
      }
    } else if (key == "format") {
      if (!v.is_string()) throw ConfigError(ConfigCode::bad_format, "format must be a string");
      cfg.format = v.get<std::string>();
    } else {
      throw ConfigError(ConfigCode::bad_field, "unknown config field '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.metric.empty() && cfg.psi.empty())
    throw ConfigError(ConfigCode::missing_field, "one of metric or psi is required");
  if (!cfg.metric.empty() && !cfg.psi.empty())
    throw ConfigError(ConfigCode::bad_field, "metric and psi are mutually exclusive");
  if (!cfg.metric.empty() && !is_catalog_name(cfg.metric))
    throw ConfigError(ConfigCode::unknown_metric, "unknown metric '" + cfg.metric + "'");
  if (cfg.metric == "riemann_sqrt" && (cfg.k_fn.empty() || cfg.k2_fn.empty()))
    throw ConfigError(ConfigCode::missing_field, "riemann_sqrt requires k_fn and k2_fn");
  if (cfg.n < 2 || cfg.n > 5)
    throw ConfigError(ConfigCode::bad_dimension, "n must be between 2 and 5");
  if (cfg.samples < 1 || cfg.samples > 1000000)
    throw ConfigError(ConfigCode::bad_samples, "samples must be in [1, 1000000]");
  if (!(cfg.r_range[0] > 0.0))
    throw ConfigError(ConfigCode::bad_r_range, "r_min must be positive");
  if (cfg.r_range[0] < 1e-3)
    throw ConfigError(ConfigCode::bad_r_range, "r_min must be at least 1e-3");
  if (!(cfg.r_range[0] < cfg.r_range[1]))
    throw ConfigError(ConfigCode::bad_r_range, "r_min must be below r_max");
  if (!(cfg.u_range[0] > 0.0) || !(cfg.u_range[0] <= cfg.u_range[1]))
    throw ConfigError(ConfigCode::bad_field, "u_range must satisfy 0 < u_min <= u_max");
  if (!(cfg.tolerance_zero > 0.0) || !(cfg.tolerance_zero < cfg.threshold_nonzero))
    throw ConfigError(ConfigCode::bad_tolerance,
                      "tolerance_zero must be positive and below threshold_nonzero");
  if (cfg.suites.empty()) throw ConfigError(ConfigCode::bad_suite, "suites must be non-empty");
  for (const auto& s : cfg.suites) {
    bool known = false;
    for (const auto& k : kKnownSuites) known = known || s == k;
    if (!known) throw ConfigError(ConfigCode::bad_suite, "unknown suite '" + s + "'");
  }
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError(ConfigCode::bad_format, "format must be json or csv");
  if (!cfg.psi.empty()) parse_psi(cfg.psi, cfg.params);  // throws ParseError when malformed
  if (!cfg.k_fn.empty()) parse_expression(cfg.k_fn, {});
  if (!cfg.k2_fn.empty()) parse_expression(cfg.k2_fn, {});
}

std::string config_to_json(const RunConfig& cfg) {
  std::string out = "{";
  auto field = [&out](const char* name, const std::string& body, bool first = false) {
    if (!first) out += ",";
    out += "\"";
    out += name;
    out += "\":";
    out += body;
  };
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  field("metric", quoted(cfg.metric), true);
  field("psi", quoted(cfg.psi));
  std::string params = "{";
  bool first_param = true;
  for (const auto& [k, v] : cfg.params) {
    if (!first_param) params += ",";
    params += quoted(k) + ":" + format_real(v);
    first_param = false;
  }
  params += "}";
  field("params", params);
  field("n", std::to_string(cfg.n));
  field("samples", std::to_string(cfg.samples));
  field("seed", std::to_string(cfg.seed));
  field("r_range", "[" + format_real(cfg.r_range[0]) + "," + format_real(cfg.r_range[1]) + "]");
  field("u_range", "[" + format_real(cfg.u_range[0]) + "," + format_real(cfg.u_range[1]) + "]");
  field("tolerance_zero", format_real(cfg.tolerance_zero));
  field("threshold_nonzero", format_real(cfg.threshold_nonzero));
  field("k1", cfg.k1_scan ? std::string("\"scan\"") : format_real(cfg.k1_value));
  field("c", cfg.c_scan ? std::string("\"scan\"") : format_real(cfg.c_value));
  field("k_fn", quoted(cfg.k_fn));
  field("k2_fn", quoted(cfg.k2_fn));
  std::string suites = "[";
  for (std::size_t i = 0; i < cfg.suites.size(); ++i) {
    if (i) suites += ",";
    suites += quoted(cfg.suites[i]);
  }
  suites += "]";
  field("suites", suites);
  field("format", quoted(cfg.format));
  out += "}";
  return out;
}

PsiProfile profile_from_config(const RunConfig& cfg) {
  if (!cfg.psi.empty()) return parse_psi(cfg.psi, cfg.params);
  if (cfg.metric == "riemann_sqrt") return riemann_sqrt_profile(cfg.k2_fn, cfg.k_fn);
  return catalog_profile(cfg.metric);
}

}  // namespace finslab
