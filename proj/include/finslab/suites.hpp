#pragma once

#include "finslab/config.hpp"
#include "finslab/report.hpp"

namespace finslab {

struct SuiteOptions {
  // Worker threads for per-sample evaluation. Results are stored by sample
  // index and reduced sequentially, so the report bytes do not depend on
  // this value (it is deliberately not part of RunConfig).
  int threads = 1;
};

// Executes the suites named in the config (classify / validate / rigidity)
// and assembles the report. Throws ConfigError / DomainError; flag failures
// are reported, not thrown.
Report run_suites(const RunConfig& config, const SuiteOptions& options = {});

}  // namespace finslab
