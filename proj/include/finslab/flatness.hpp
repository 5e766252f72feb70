#pragma once

#include <array>
#include <span>
#include <vector>

#include "finslab/expr.hpp"
#include "finslab/metric.hpp"
#include "finslab/point.hpp"
#include "finslab/psi.hpp"
#include "finslab/spray.hpp"

namespace finslab {

// Hamel: F_{x^k y^l} y^k - F_{x^l}; zero vector iff projectively flat here.
// scale_out (optional) receives the largest |term| entering the residual.
std::vector<double> hamel_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                   double* scale_out = nullptr);

// L_{x^k y^l} y^k - 2 L_{x^l} with L = F^2; zero iff dually flat here.
std::vector<double> dual_flat_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                       double* scale_out = nullptr);

// F_{x^k} - k1 F F_{y^k}; zero for all k iff projectively AND dually flat.
std::vector<double> pfdf_residual(const MetricEvaluator& metric, const EvaluationPoint& p,
                                  double k1, double* scale_out = nullptr);

// The profile-side pair: (psi_r / r - k1 psi psi_s, psi_s - k1 (psi^2 - s psi psi_s)).
std::array<double, 2> pfdf_psi_residuals(const PsiProfile& profile, double r, double s,
                                         double k1);

// (P - k1 psi / 2, Q).
std::array<double, 2> corollary_pq_residuals(const SprayScalars& sc, double psi, double k1);

// P - s P_s - c (psi - s psi_s); requires Q ~ 0 (the rigidity specialization).
double isotropy_consistency_residual(const SprayScalars& sc, double psi, double psi_s,
                                     double s, double c, double q_tol = 1e-9);

struct RigidityResiduals {
  double hash = 0.0;      // 2 r s k psi - s psi_r - r psi_s
  double two_star = 0.0;  // r psi_ss + s psi_rs - psi_r  (the Q numerator)
  double two_hash = 0.0;  // r k psi + r s k psi_s - psi_r
};

RigidityResiduals rigidity_chain_residuals(const PsiProfile& profile, double r, double s,
                                           const ExprPtr& k_fn);

// 2 r k psi + 2 r s k psi_s - r psi_ss - s psi_rs - psi_r; identically the
// s-derivative of the hash residual.
double star_residual(const PsiProfile& profile, double r, double s, const ExprPtr& k_fn);

// d(hash)/ds computed by jet differentiation, for the Star identity check.
double hash_s_derivative(const PsiProfile& profile, double r, double s, const ExprPtr& k_fn);

// psi = k2(r) sqrt(1 + k(r) s^2), the rigidity endpoint family.
inline PsiProfile rigidity_family(const std::string& k2_expr, const std::string& k_expr) {
  return riemann_sqrt_profile(k2_expr, k_expr);
}

struct RiemannCheck {
  bool riemannian = false;
  double max_third = 0.0;  // largest |d^3 F^2 / dy^3| over the samples
  double scale = 1.0;      // 1 + largest |d^2 F^2 / dy^2|
};

// F^2 quadratic in y (all third y-partials vanish) across the samples.
RiemannCheck is_riemannian(const MetricEvaluator& metric,
                           std::span<const EvaluationPoint> samples,
                           double tol = 1e-10);

struct FitResult {
  double value = 0.0;
  double fit_residual = 0.0;  // relative RMS of the residual at the fit
};

// Least-squares k1 = sum <F_x, F F_y> / sum <F F_y, F F_y> over all sampled
// components, with index-ordered compensated sums.
FitResult fit_k1(const MetricEvaluator& metric, std::span<const EvaluationPoint> samples);

// Relative RMS of the pfdf residual at a given k1 (the fit_residual metric,
// reusable for fixed k1).
double pfdf_rms(const MetricEvaluator& metric, std::span<const EvaluationPoint> samples,
                double k1);

}  // namespace finslab
