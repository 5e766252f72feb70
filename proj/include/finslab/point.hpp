#pragma once

#include <vector>

#include "finslab/errors.hpp"

namespace finslab {

// A base point (x, y) with the derived scalars r = |x|, u = |y|, v = <x,y>,
// s = v/u. Requires y != 0; |s| <= r holds by Cauchy-Schwarz.
struct EvaluationPoint {
  std::vector<double> x, y;
  double r = 0.0, u = 0.0, v = 0.0, s = 0.0;

  int n() const { return static_cast<int>(x.size()); }

  static EvaluationPoint make(std::vector<double> x, std::vector<double> y);
};

}  // namespace finslab
