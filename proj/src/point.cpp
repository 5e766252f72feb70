#include "finslab/point.hpp"

#include <cmath>

namespace finslab {

EvaluationPoint EvaluationPoint::make(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.empty())
    throw DomainError("evaluation point dimensions mismatch");
  EvaluationPoint p;
  p.x = std::move(x);
  p.y = std::move(y);
  double r2 = 0.0, u2 = 0.0, v = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    r2 += p.x[i] * p.x[i];
    u2 += p.y[i] * p.y[i];
    v += p.x[i] * p.y[i];
  }
  if (!(u2 > 0.0)) throw DomainError("evaluation at zero vector");
  p.r = std::sqrt(r2);
  p.u = std::sqrt(u2);
  p.v = v;
  p.s = v / p.u;
  return p;
}

}  // namespace finslab
