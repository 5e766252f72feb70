#pragma once

#include <array>
#include <span>
#include <vector>

#include "finslab/jet.hpp"
#include "finslab/point.hpp"
#include "finslab/psi.hpp"
#include "finslab/spray.hpp"

namespace finslab {

// S = trace of dG/dy relative to the Euclidean volume form:
// u(n+1)P + 2usQ + u(r^2 - s^2)Q_s.
double s_curvature(const EvaluationPoint& p, const SprayScalars& sc, int n);

// E_ij assembled from the four blocks of the closed-form E-curvature
// (candidate under test; the jet oracle adjudicates it). Row-major n x n.
std::vector<double> e_closed(const EvaluationPoint& p, const SprayScalars& sc);

// E_ij = 1/2 d^2/dy^i dy^j (dG^k/dy^k) straight off the spray jets; knows
// nothing about the closed form.
std::vector<double> e_from_spray_jets(std::span<const Jet> spray, int n);

// Sum_k dG^k/dy^k read off the spray jets.
double trace_spray_divergence(std::span<const Jet> spray, int n);

// B^i_{jkl} = d^3 G^i / dy^j dy^k dy^l, flattened [i][j][k][l].
std::vector<double> berwald_tensor(std::span<const Jet> spray, int n);

double max_abs(std::span<const double> values);

// The four Berwald conditions: (s P_s - P, P_ss, s Q_ss - Q_s, Q_sss).
std::array<double, 4> berwald_conditions(const SprayScalars& sc, double s);

struct IsotropyEstimate {
  double c_mean = 0.0;
  double c_deviation = 0.0;
  bool isotropic = false;
  std::vector<double> c_values;
};

// Pointwise c(s) = [(n+1)(P - sP_s) + (r^2-s^2)(Q_s - sQ_ss)] / [(n+1)(psi - s psi_s)]
// over the s-grid at fixed r; isotropic at this r iff max |c(s) - mean| <= tol.
IsotropyEstimate isotropic_e_residual(const PsiProfile& profile, double r,
                                      std::span<const double> s_grid, int n, double tol);

// Chebyshev-spaced s-grid in [-0.9 r, 0.9 r].
std::vector<double> default_s_grid(double r, int count = 17);

}  // namespace finslab
