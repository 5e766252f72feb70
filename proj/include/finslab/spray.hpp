#pragma once

#include <span>
#include <vector>

#include "finslab/jet.hpp"
#include "finslab/metric.hpp"
#include "finslab/point.hpp"
#include "finslab/psi.hpp"

namespace finslab {

// The spherically symmetric spray data at one (r, s):
//   G^i = u P y^i + u^2 Q x^i,
//   Q = (r psi_ss + s psi_rs - psi_r) / (2r (psi - s psi_s + (r^2 - s^2) psi_ss)),
//   P = (s psi_r + r psi_s) / (2r psi) - ((s psi + (r^2 - s^2) psi_s) / psi) Q.
struct SprayScalars {
  double P = 0.0, P_s = 0.0, P_ss = 0.0;
  double Q = 0.0, Q_s = 0.0, Q_ss = 0.0, Q_sss = 0.0;
};

// P and Q as (r, s) jets; the s-derivatives in SprayScalars are truncations
// of these, never hand-differentiated quotient formulas.
struct PQJets {
  Jet psi, P, Q;
};

PQJets compute_pq_jets(const PsiProfile& profile, double r, double s);
SprayScalars compute_pq(const PsiProfile& profile, double r, double s);
SprayScalars scalars_from_jets(const PQJets& jets);

std::vector<double> assemble_spray(const EvaluationPoint& p, const SprayScalars& sc);

struct FundamentalTensor {
  int n = 0;
  std::vector<double> g;      // row-major
  std::vector<double> g_inv;  // best-effort when not positive definite
  bool positive_definite = false;
  double min_pivot = 0.0;  // smallest elimination pivot (eigenvalue proxy)
  double condition = 0.0;
};

// g_ij = 1/2 (F^2)_{y^i y^j} via jets; inversion attempted even when the
// positive-definiteness test fails, for diagnostics.
FundamentalTensor fundamental_tensor(const MetricEvaluator& metric, const EvaluationPoint& p);

struct ConvexityCheck {
  bool positive_definite = false;
  double min_pivot = 0.0;
};

ConvexityCheck strong_convexity_check(const PsiProfile& profile, const EvaluationPoint& p);
ConvexityCheck strong_convexity_check(const PsiProfile& profile, std::span<const double> x,
                                      std::span<const double> y);

// G^i := 1/4 g^{il} { (F^2)_{x^k y^l} y^k - (F^2)_{x^l} } straight from the
// definition; shares nothing with compute_pq/assemble_spray.
std::vector<double> general_spray_oracle(const MetricEvaluator& metric, const EvaluationPoint& p);

// y-jets of G^i (coefficients valid through y-degree 3), for the curvature
// oracles. The closed-form flavor composes the (P, Q) s-series along the
// direction jets; the general flavor runs the definition chain on F^2.
std::vector<Jet> spray_jets_closed(const PsiProfile& profile, const EvaluationPoint& p);
std::vector<Jet> spray_jets_general(const MetricEvaluator& metric, const EvaluationPoint& p);

// Finite-difference spray assembled from central x-differences of (F^2) and
// (F^2)_{y^l}; secondary cross-check only (step ~1e-5, accuracy ~1e-8).
std::vector<double> finite_difference_spray(const MetricEvaluator& metric,
                                            const EvaluationPoint& p, double step = 1e-5);

}  // namespace finslab
