#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finslab/expr.hpp"
#include "finslab/jet.hpp"

namespace finslab {

// A profile function psi(r, s) defining the spherically symmetric metric
// F = |y| psi(|x|, <x,y>/|y|). Immutable after construction.
struct PsiProfile {
  std::string name;
  std::string expression;
  std::map<std::string, double> params;
  ExprPtr body;
  // Exclusive upper bound on r (funk/klein live on the unit ball).
  std::optional<double> r_upper;
  // Set for the riemann_sqrt family psi = k2(r) * sqrt(1 + k(r) s^2).
  ExprPtr k_fn, k2_fn;
};

PsiProfile parse_psi(const std::string& text, const std::map<std::string, double>& params = {});

// Built-ins: euclidean, sqrt_one_plus_s2, klein, funk. riemann_sqrt requires
// its two r-expressions and is built via riemann_sqrt_profile.
PsiProfile catalog_profile(const std::string& name);
PsiProfile riemann_sqrt_profile(const std::string& k2_expr, const std::string& k_expr);
bool is_catalog_name(const std::string& name);

struct CatalogEntry {
  std::string name;
  std::string formula;
  std::string domain;
};
std::vector<CatalogEntry> catalog_listing();

// psi as an (r, s) jet with r-degree <= 2 and s-degree <= 6, carrying every
// partial the closed forms need. Throws DomainError on domain violations.
Jet eval_profile_rs(const PsiProfile& profile, double r, double s);

// psi evaluated in an arbitrary jet algebra through the variable bindings.
Jet eval_profile_jets(const PsiProfile& profile, const JetVars& vars);

double eval_profile_value(const PsiProfile& profile, double r, double s);

// Samples psi over [r_lo, r_hi] x {|s| <= 0.95 r}; throws DomainError if any
// sample is non-positive or fails to evaluate.
void check_profile_positive(const PsiProfile& profile, double r_lo, double r_hi);

// Shared (r, s) domain guard: r > 0, |s| <= r, r below the profile bound.
void check_profile_domain(const PsiProfile& profile, double r, double s);

}  // namespace finslab
