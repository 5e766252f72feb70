#include "finslab/metric.hpp"

#include <cmath>

namespace finslab {

namespace {

Jet dot(std::span<const Jet> a, std::span<const Jet> b) {
  Jet acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

Jet ProfileMetric::psi_jet(std::span<const Jet> x, std::span<const Jet> y, Jet* u_out) const {
  Jet u2 = dot(y, y);
  Jet u = sqrt(u2);
  Jet v = dot(x, y);
  JetVars vars;
  vars.s = v / u;
  vars.r2 = dot(x, x);
  Jet r2 = vars.r2;
  vars.r = [r2]() { return sqrt(r2); };
  if (u_out) *u_out = u;
  return eval_profile_jets(profile_, vars);
}

Jet ProfileMetric::f_squared(std::span<const Jet> x, std::span<const Jet> y) const {
  Jet u;
  Jet psi = psi_jet(x, y, &u);
  Jet f = u * psi;
  return f * f;
}

Jet ProfileMetric::f(std::span<const Jet> x, std::span<const Jet> y) const {
  Jet u;
  Jet psi = psi_jet(x, y, &u);
  return u * psi;
}

SeededPoint seed_xy(const EvaluationPoint& p, int x_cap, int y_cap, bool seed_x) {
  SeededPoint out;
  int n = p.n();
  out.space = xy_space(n, x_cap, y_cap);
  out.x.reserve(static_cast<std::size_t>(n));
  out.y.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (seed_x)
      out.x.push_back(Jet::variable(out.space, i, p.x[static_cast<std::size_t>(i)]));
    else
      out.x.push_back(Jet::constant(out.space, p.x[static_cast<std::size_t>(i)]));
    out.y.push_back(Jet::variable(out.space, n + i, p.y[static_cast<std::size_t>(i)]));
  }
  return out;
}

}  // namespace finslab
