#include "finslab/curvature.hpp"

#include <cmath>

#include "finslab/util.hpp"

namespace finslab {

namespace {

MultiIndex y_orders(int n, std::initializer_list<int> ys) {
  MultiIndex idx(static_cast<std::size_t>(2 * n), 0);
  for (int i : ys) idx[static_cast<std::size_t>(n + i)] += 1;
  return idx;
}

}  // namespace

double s_curvature(const EvaluationPoint& p, const SprayScalars& sc, int n) {
  double rr_ss = p.r * p.r - p.s * p.s;
  return p.u * (n + 1) * sc.P + 2.0 * p.u * p.s * sc.Q + p.u * rr_ss * sc.Q_s;
}

std::vector<double> e_closed(const EvaluationPoint& p, const SprayScalars& sc) {
  int n = p.n();
  double s = p.s, u = p.u;
  double w = p.r * p.r - s * s;
  double np1 = n + 1;

  double cxx = np1 * sc.P_ss + 2.0 * sc.Q_s + w * sc.Q_sss - 2.0 * s * sc.Q_ss;
  double cxy = -np1 * s * sc.P_ss - 2.0 * s * sc.Q_s - s * w * sc.Q_sss + 2.0 * s * s * sc.Q_ss;
  double cyy = np1 * s * s * sc.P_ss + 2.0 * s * s * sc.Q_s + s * s * w * sc.Q_sss -
               2.0 * s * s * s * sc.Q_ss + np1 * s * sc.P_s - np1 * sc.P +
               s * w * sc.Q_ss - w * sc.Q_s;
  double cdd = -np1 * s * sc.P_s + np1 * sc.P - s * w * sc.Q_ss + w * sc.Q_s;

  double u2 = u * u, u3 = u2 * u;
  std::vector<double> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double xi = p.x[static_cast<std::size_t>(i)], xj = p.x[static_cast<std::size_t>(j)];
      double yi = p.y[static_cast<std::size_t>(i)], yj = p.y[static_cast<std::size_t>(j)];
      double val = cxx / u * xi * xj + cxy / u2 * (xi * yj + yi * xj) +
                   cyy / u3 * yi * yj + (i == j ? cdd / u : 0.0);
      e[static_cast<std::size_t>(i * n + j)] = 0.5 * val;
    }
  }
  return e;
}

std::vector<double> e_from_spray_jets(std::span<const Jet> spray, int n) {
  Jet trace = spray[0].derivative(n + 0);
  for (int k = 1; k < n; ++k) trace += spray[static_cast<std::size_t>(k)].derivative(n + k);

  std::vector<double> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double val = 0.5 * trace.partial(y_orders(n, {i, j}));
      e[static_cast<std::size_t>(i * n + j)] = val;
      e[static_cast<std::size_t>(j * n + i)] = val;
    }
  return e;
}

double trace_spray_divergence(std::span<const Jet> spray, int n) {
  double acc = 0.0;
  for (int k = 0; k < n; ++k)
    acc += spray[static_cast<std::size_t>(k)].partial(y_orders(n, {k}));
  return acc;
}

std::vector<double> berwald_tensor(std::span<const Jet> spray, int n) {
  std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> b(nn * nn * nn * nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          b[((static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
             static_cast<std::size_t>(k)) * nn + static_cast<std::size_t>(l)] =
              spray[static_cast<std::size_t>(i)].partial(y_orders(n, {j, k, l}));
  return b;
}

double max_abs(std::span<const double> values) {
  double best = 0.0;
  for (double v : values) best = std::max(best, std::abs(v));
  return best;
}

std::array<double, 4> berwald_conditions(const SprayScalars& sc, double s) {
  return {s * sc.P_s - sc.P, sc.P_ss, s * sc.Q_ss - sc.Q_s, sc.Q_sss};
}

IsotropyEstimate isotropic_e_residual(const PsiProfile& profile, double r,
                                      std::span<const double> s_grid, int n, double tol) {
  IsotropyEstimate out;
  out.c_values.reserve(s_grid.size());
  for (double s : s_grid) {
    PQJets pq = compute_pq_jets(profile, r, s);
    SprayScalars sc = scalars_from_jets(pq);
    double psi = pq.psi.value();
    MultiIndex ds{0, 1};
    double psi_s = pq.psi.partial(ds);
    double denom = psi - s * psi_s;
    if (!(denom > 0.0)) throw DomainError("degenerate isotropy denominator");
    double w = r * r - s * s;
    double lhs = (n + 1) * (sc.P - s * sc.P_s) + w * (sc.Q_s - s * sc.Q_ss);
    out.c_values.push_back(lhs / ((n + 1) * denom));
  }
  KahanSum mean;
  for (double c : out.c_values) mean.add(c);
  out.c_mean = mean.total() / static_cast<double>(out.c_values.size());
  for (double c : out.c_values)
    out.c_deviation = std::max(out.c_deviation, std::abs(c - out.c_mean));
  out.isotropic = out.c_deviation <= tol;
  return out;
}

std::vector<double> default_s_grid(double r, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double theta = M_PI * (2.0 * i + 1.0) / (2.0 * count);
    grid[static_cast<std::size_t>(i)] = 0.9 * r * std::cos(theta);
  }
  return grid;
}

}  // namespace finslab
