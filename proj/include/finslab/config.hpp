#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finslab/psi.hpp"

namespace finslab {

// One verification run: which metric, where to sample, and which suites.
// The seed fully determines the sample stream; the serialized echo of this
// struct is canonical (fixed field order, fixed number formatting), so equal
// configs yield byte-identical reports.
struct RunConfig {
  std::string metric;  // catalog name; empty when psi is inline
  std::string psi;     // inline expression; empty when metric is named
  std::map<std::string, double> params;
  int n = 3;
  int samples = 100;
  std::uint64_t seed = 1;
  std::array<double, 2> r_range{0.1, 0.9};
  std::array<double, 2> u_range{0.5, 2.0};
  double tolerance_zero = 1e-9;
  double threshold_nonzero = 1e-3;
  bool k1_scan = true;
  double k1_value = 0.0;
  bool c_scan = true;
  double c_value = 0.0;
  std::string k_fn;
  std::string k2_fn;
  std::vector<std::string> suites{"classify"};
  std::string format = "json";
};

// Parses and validates a JSON config document. Distinct ConfigCode per
// failure class (unknown metric, malformed expression, bad r-range, bad
// tolerance ordering, ...).
RunConfig parse_config(const std::string& text);

void validate_config(const RunConfig& config);

// Canonical serialization (the report's config echo; round-trips through
// parse_config).
std::string config_to_json(const RunConfig& config);

PsiProfile profile_from_config(const RunConfig& config);

// Locale-independent scientific formatting with 17 significant digits; the
// one number formatter every serializer uses.
std::string format_real(double value);

}  // namespace finslab
