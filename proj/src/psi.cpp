#include "finslab/psi.hpp"

#include <cmath>

#include "finslab/errors.hpp"

namespace finslab {

PsiProfile parse_psi(const std::string& text, const std::map<std::string, double>& params) {
  PsiProfile p;
  p.name = "inline";
  p.expression = text;
  p.params = params;
  p.body = parse_expression(text, params);
  return p;
}

namespace {

PsiProfile named(const std::string& name, const std::string& expr,
                 std::optional<double> r_upper = std::nullopt) {
  PsiProfile p = parse_psi(expr);
  p.name = name;
  p.r_upper = r_upper;
  return p;
}

}  // namespace

bool is_catalog_name(const std::string& name) {
  return name == "euclidean" || name == "sqrt_one_plus_s2" || name == "klein" ||
         name == "funk" || name == "riemann_sqrt";
}

PsiProfile catalog_profile(const std::string& name) {
  if (name == "euclidean") return named("euclidean", "1");
  if (name == "sqrt_one_plus_s2") return named("sqrt_one_plus_s2", "sqrt(1 + s^2)");
  if (name == "klein")
    return named("klein", "sqrt(1 - r^2 + s^2)/(1 - r^2)", 1.0);
  if (name == "funk")
    return named("funk", "(sqrt(1 - r^2 + s^2) + s)/(1 - r^2)", 1.0);
  if (name == "riemann_sqrt")
    throw ConfigError(ConfigCode::unknown_metric,
                      "riemann_sqrt requires k2 and k expressions (use --k2-fn/--k-fn)");
  throw ConfigError(ConfigCode::unknown_metric, "unknown metric '" + name + "'");
}

PsiProfile riemann_sqrt_profile(const std::string& k2_expr, const std::string& k_expr) {
  PsiProfile p;
  p.name = "riemann_sqrt";
  p.expression = "(" + k2_expr + ")*sqrt(1 + (" + k_expr + ")*s^2)";
  p.k_fn = parse_expression(k_expr, {});
  p.k2_fn = parse_expression(k2_expr, {});
  if (references_var(*p.k_fn, ExprKind::var_s) || references_var(*p.k2_fn, ExprKind::var_s))
    throw ConfigError(ConfigCode::bad_expression, "k and k2 must depend on r only");
  p.body = parse_expression(p.expression, {});
  return p;
}

std::vector<CatalogEntry> catalog_listing() {
  return {
      {"euclidean", "psi = 1", "all r"},
      {"sqrt_one_plus_s2", "psi = sqrt(1 + s^2)", "all r"},
      {"klein", "psi = sqrt(1 - r^2 + s^2)/(1 - r^2)", "r < 1"},
      {"funk", "psi = (sqrt(1 - r^2 + s^2) + s)/(1 - r^2)", "r < 1"},
      {"riemann_sqrt", "psi = k2(r)*sqrt(1 + k(r)*s^2)", "k2 > 0, 1 + k s^2 > 0"},
  };
}

void check_profile_domain(const PsiProfile& profile, double r, double s) {
  if (!(r > 0.0)) throw DomainError("profile domain error: r must be positive");
  if (std::abs(s) > r * (1.0 + 1e-12))
    throw DomainError("profile domain error: |s| <= r required");
  if (profile.r_upper && r >= *profile.r_upper)
    throw DomainError("profile domain error: r outside profile domain");
  if (profile.k_fn) {
    double k = eval_scalar(*profile.k_fn, r, s);
    double k2 = eval_scalar(*profile.k2_fn, r, s);
    if (!(k2 > 0.0) || !(1.0 + s * s * k > 0.0))
      throw DomainError("family domain error");
  }
}

Jet eval_profile_rs(const PsiProfile& profile, double r, double s) {
  check_profile_domain(profile, r, s);
  auto space = rs_space();
  Jet rj = Jet::variable(space, 0, r);
  Jet sj = Jet::variable(space, 1, s);
  JetVars vars;
  vars.s = sj;
  vars.r2 = rj * rj;
  vars.r = [rj]() { return rj; };
  return eval_jet(*profile.body, vars);
}

Jet eval_profile_jets(const PsiProfile& profile, const JetVars& vars) {
  return eval_jet(*profile.body, vars);
}

double eval_profile_value(const PsiProfile& profile, double r, double s) {
  check_profile_domain(profile, r, s);
  return eval_scalar(*profile.body, r, s);
}

void check_profile_positive(const PsiProfile& profile, double r_lo, double r_hi) {
  constexpr int kRSteps = 12;
  constexpr int kSSteps = 9;
  for (int i = 0; i <= kRSteps; ++i) {
    double r = r_lo + (r_hi - r_lo) * i / kRSteps;
    for (int j = 0; j <= kSSteps; ++j) {
      double s = 0.95 * r * (2.0 * j / kSSteps - 1.0);
      double value = eval_profile_value(profile, r, s);
      if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError("profile not positive");
    }
  }
}

}  // namespace finslab
