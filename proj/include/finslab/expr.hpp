#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "finslab/jet.hpp"

namespace finslab {

enum class ExprKind {
  constant,
  var_r,
  var_s,
  parameter,
  add,
  sub,
  mul,
  div,
  neg,
  pow_int,
  fn_sqrt,
  fn_exp,
  fn_log,
};

// Parsed expression tree over variables {r, s} and named parameters.
// Parameters are resolved to their numeric values at parse time; the node
// keeps the name for display only.
struct Expr {
  ExprKind kind = ExprKind::constant;
  double number = 0.0;
  std::string name;
  int exponent = 1;
  std::shared_ptr<const Expr> a, b;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Grammar: + - on terms; * / on factors; `^` binds tighter than `*` and `-`;
// exponents are integer literals (optionally negative); functions sqrt, exp,
// log; identifiers are r, s, or keys of `params`.
ExprPtr parse_expression(std::string_view text, const std::map<std::string, double>& params);

std::string to_string(const Expr& e);

bool references_var(const Expr& e, ExprKind var);

double eval_scalar(const Expr& e, double r, double s);

// Variable bindings for jet evaluation. r² is always available; r itself is
// produced lazily so that metrics evaluated at x = 0 (where sqrt(Σx²) has no
// jet) still work as long as the expression uses only even powers of r.
struct JetVars {
  Jet s;
  Jet r2;
  std::function<Jet()> r;
};

Jet eval_jet(const Expr& e, const JetVars& vars);

}  // namespace finslab
