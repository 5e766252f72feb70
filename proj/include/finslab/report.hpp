#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finslab/config.hpp"

namespace finslab {

struct Witness {
  std::vector<double> x, y;
  double residual = 0.0;
};

// Verdict bands: holds iff residual_max <= tolerance_zero, fails iff
// residual_max >= threshold_nonzero, inconclusive in the gap.
struct FlagVerdict {
  std::string flag;
  std::string verdict;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  std::vector<Witness> witnesses;
};

struct CrossValRow {
  std::string quantity;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ConstantFit {
  std::string mode;  // "fixed" or "scan"
  double value = 0.0;
  double fit_residual = 0.0;
};

struct IsotropySummary {
  std::vector<double> r_values;
  std::vector<double> c_values;
  std::vector<double> c_deviations;  // per-r max |c(s) - mean|
  double cross_r_deviation = 0.0;
};

struct RigiditySection {
  bool ran = false;
  double pfdf_psi_max = 0.0;
  double corollary_p_max = 0.0;
  double corollary_q_max = 0.0;
  double isotropy_consistency_max = 0.0;
  bool isotropy_consistency_applicable = false;
  bool have_k_chain = false;
  double hash_max = 0.0;
  double star_max = 0.0;
  double two_star_max = 0.0;
  double two_hash_max = 0.0;
  double star_identity_max = 0.0;
  bool riemannian = false;
  double riemann_third_max = 0.0;
  bool degenerate_2c_minus_k1 = false;
  bool chain_consistent = true;
  std::string chain_note;
};

struct Report {
  std::string tool_name;
  std::string tool_version;
  RunConfig config;
  std::vector<std::string> suites_run;
  std::vector<FlagVerdict> flags;
  std::optional<ConstantFit> k1;
  std::optional<ConstantFit> c;
  std::optional<IsotropySummary> isotropy;
  std::vector<CrossValRow> cross_validation;
  RigiditySection rigidity;
  int exit_code = 0;
};

// Stable field order, reals with 17 significant digits; byte-identical for
// equal configs regardless of worker count.
std::string report_to_json(const Report& report);

// One row per flag plus one per cross-validation entry, after a header line.
std::string report_to_csv(const Report& report);

}  // namespace finslab
