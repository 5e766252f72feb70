#include "finslab/flatness.hpp"

#include <cmath>

#include "finslab/util.hpp"

namespace finslab {

namespace {

MultiIndex unit_index(int vars, int a) {
  MultiIndex idx(static_cast<std::size_t>(vars), 0);
  idx[static_cast<std::size_t>(a)] += 1;
  return idx;
}

MultiIndex unit_index(int vars, int a, int b) {
  MultiIndex idx(static_cast<std::size_t>(vars), 0);
  idx[static_cast<std::size_t>(a)] += 1;
  idx[static_cast<std::size_t>(b)] += 1;
  return idx;
}

struct PsiDerivatives {
  double psi, psi_r, psi_s, psi_ss, psi_rs;
};

PsiDerivatives psi_derivatives(const PsiProfile& profile, double r, double s) {
  Jet psi = eval_profile_rs(profile, r, s);
  MultiIndex dr{1, 0}, ds{0, 1}, dss{0, 2}, drs{1, 1};
  return {psi.value(), psi.partial(dr), psi.partial(ds), psi.partial(dss), psi.partial(drs)};
}

}  // namespace

std::vector<double> hamel_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                   double* scale_out) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 1, 2, true);
  Jet F = metric.f(seeded.x, seeded.y);
  int vars = seeded.space->var_count();
  std::vector<double> res(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int l = 0; l < n; ++l) {
    double fx = F.partial(unit_index(vars, l));
    double acc = -fx;
    scale = std::max(scale, std::abs(fx));
    for (int k = 0; k < n; ++k) {
      double term = F.partial(unit_index(vars, k, n + l)) * p.y[static_cast<std::size_t>(k)];
      acc += term;
      scale = std::max(scale, std::abs(term));
    }
    res[static_cast<std::size_t>(l)] = acc;
  }
  if (scale_out) *scale_out = scale;
  return res;
}

std::vector<double> dual_flat_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                       double* scale_out) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 1, 2, true);
  Jet L = metric.f_squared(seeded.x, seeded.y);
  int vars = seeded.space->var_count();
  std::vector<double> res(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int l = 0; l < n; ++l) {
    double lx = 2.0 * L.partial(unit_index(vars, l));
    double acc = -lx;
    scale = std::max(scale, std::abs(lx));
    for (int k = 0; k < n; ++k) {
      double term = L.partial(unit_index(vars, k, n + l)) * p.y[static_cast<std::size_t>(k)];
      acc += term;
      scale = std::max(scale, std::abs(term));
    }
    res[static_cast<std::size_t>(l)] = acc;
  }
  if (scale_out) *scale_out = scale;
  return res;
}

std::vector<double> pfdf_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                  double k1, double* scale_out) {
  int n = p.n();
  SeededPoint seeded = seed_xy(p, 1, 1, true);
  Jet F = metric.f(seeded.x, seeded.y);
  int vars = seeded.space->var_count();
  double f0 = F.value();
  std::vector<double> res(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    double fx = F.partial(unit_index(vars, k));
    double ffy = k1 * f0 * F.partial(unit_index(vars, n + k));
    res[static_cast<std::size_t>(k)] = fx - ffy;
    scale = std::max({scale, std::abs(fx), std::abs(ffy)});
  }
  if (scale_out) *scale_out = scale;
  return res;
}

std::array<double, 2> pfdf_psi_residuals(const PsiProfile& profile, double r, double s,
                                         double k1) {
  PsiDerivatives d = psi_derivatives(profile, r, s);
  double first = d.psi_r / r - k1 * d.psi * d.psi_s;
  double second = d.psi_s - k1 * (d.psi * d.psi - s * d.psi * d.psi_s);
  return {first, second};
}

std::array<double, 2> corollary_pq_residuals(const SprayScalars& sc, double psi, double k1) {
  return {sc.P - 0.5 * k1 * psi, sc.Q};
}

double isotropy_consistency_residual(const SprayScalars& sc, double psi, double psi_s,
                                     double s, double c, double q_tol) {
  if (std::abs(sc.Q) > q_tol) throw DomainError("specialization inapplicable: Q != 0");
  return sc.P - s * sc.P_s - c * (psi - s * psi_s);
}

RigidityResiduals rigidity_chain_residuals(const PsiProfile& profile, double r, double s,
                                           const ExprPtr& k_fn) {
  PsiDerivatives d = psi_derivatives(profile, r, s);
  double k = eval_scalar(*k_fn, r, s);
  RigidityResiduals out;
  out.hash = 2.0 * r * s * k * d.psi - s * d.psi_r - r * d.psi_s;
  out.two_star = r * d.psi_ss + s * d.psi_rs - d.psi_r;
  out.two_hash = r * k * d.psi + r * s * k * d.psi_s - d.psi_r;
  return out;
}

double star_residual(const PsiProfile& profile, double r, double s, const ExprPtr& k_fn) {
  PsiDerivatives d = psi_derivatives(profile, r, s);
  double k = eval_scalar(*k_fn, r, s);
  return 2.0 * r * k * d.psi + 2.0 * r * s * k * d.psi_s - r * d.psi_ss - s * d.psi_rs -
         d.psi_r;
}

double hash_s_derivative(const PsiProfile& profile, double r, double s, const ExprPtr& k_fn) {
  Jet psi = eval_profile_rs(profile, r, s);
  auto space = psi.space();
  Jet rj = Jet::variable(space, 0, r);
  Jet sj = Jet::variable(space, 1, s);
  JetVars vars;
  vars.s = sj;
  vars.r2 = rj * rj;
  vars.r = [rj]() { return rj; };
  Jet kj = eval_jet(*k_fn, vars);
  Jet hash = 2.0 * rj * sj * kj * psi - sj * psi.derivative(0) - rj * psi.derivative(1);
  MultiIndex ds{0, 1};
  return hash.partial(ds);
}

RiemannCheck is_riemannian(const MetricEvaluator& metric,
                           std::span<const EvaluationPoint> samples, double tol) {
  RiemannCheck out;
  for (const EvaluationPoint& p : samples) {
    int n = p.n();
    SeededPoint seeded = seed_xy(p, 0, 3, false);
    Jet L = metric.f_squared(seeded.x, seeded.y);
    int vars = seeded.space->var_count();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        MultiIndex second(static_cast<std::size_t>(vars), 0);
        second[static_cast<std::size_t>(n + i)] += 1;
        second[static_cast<std::size_t>(n + j)] += 1;
        out.scale = std::max(out.scale, 1.0 + std::abs(L.partial(second)));
        for (int k = j; k < n; ++k) {
          MultiIndex third = second;
          third[static_cast<std::size_t>(n + k)] += 1;
          out.max_third = std::max(out.max_third, std::abs(L.partial(third)));
        }
      }
  }
  out.riemannian = out.max_third <= tol * out.scale;
  return out;
}

FitResult fit_k1(const MetricEvaluator& metric, std::span<const EvaluationPoint> samples) {
  KahanSum num, den;
  for (const EvaluationPoint& p : samples) {
    int n = p.n();
    SeededPoint seeded = seed_xy(p, 1, 1, true);
    Jet F = metric.f(seeded.x, seeded.y);
    int vars = seeded.space->var_count();
    double f0 = F.value();
    for (int k = 0; k < n; ++k) {
      double fx = F.partial(unit_index(vars, k));
      double ffy = f0 * F.partial(unit_index(vars, n + k));
      num.add(fx * ffy);
      den.add(ffy * ffy);
    }
  }
  FitResult out;
  if (!(den.total() > 0.0)) throw DomainError("degenerate k1 fit: F F_y vanishes");
  out.value = num.total() / den.total();

  KahanSum res2;
  for (const EvaluationPoint& p : samples) {
    std::vector<double> r = pfdf_residual(metric, p, out.value);
    for (double v : r) res2.add(v * v);
  }
  out.fit_residual = std::sqrt(res2.total() / den.total());
  return out;
}

double pfdf_rms(const MetricEvaluator& metric, std::span<const EvaluationPoint> samples,
                double k1) {
  KahanSum res2, den;
  for (const EvaluationPoint& p : samples) {
    int n = p.n();
    SeededPoint seeded = seed_xy(p, 1, 1, true);
    Jet F = metric.f(seeded.x, seeded.y);
    int vars = seeded.space->var_count();
    double f0 = F.value();
    for (int k = 0; k < n; ++k) {
      double fx = F.partial(unit_index(vars, k));
      double ffy = f0 * F.partial(unit_index(vars, n + k));
      double r = fx - k1 * ffy;
      res2.add(r * r);
      den.add(ffy * ffy);
    }
  }
  if (!(den.total() > 0.0)) throw DomainError("degenerate k1 fit: F F_y vanishes");
  return std::sqrt(res2.total() / den.total());
}

}  // namespace finslab
