#include "finslab/errors.hpp"

namespace finslab {

const char* to_string(ConfigCode code) {
  switch (code) {
    case ConfigCode::unknown_metric: return "unknown_metric";
    case ConfigCode::bad_expression: return "bad_expression";
    case ConfigCode::bad_dimension: return "bad_dimension";
    case ConfigCode::bad_samples: return "bad_samples";
    case ConfigCode::bad_r_range: return "bad_r_range";
    case ConfigCode::bad_tolerance: return "bad_tolerance";
    case ConfigCode::bad_constant: return "bad_constant";
    case ConfigCode::bad_suite: return "bad_suite";
    case ConfigCode::bad_format: return "bad_format";
    case ConfigCode::bad_field: return "bad_field";
    case ConfigCode::missing_field: return "missing_field";
    case ConfigCode::io_error: return "io_error";
  }
  return "config_error";
}

}  // namespace finslab
