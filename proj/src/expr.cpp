#include "finslab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "finslab/errors.hpp"

namespace finslab {

namespace {

struct Token {
  enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
  std::size_t pos = 0;
  double value = 0.0;
  bool is_integer = false;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = Token{Token::end, pos_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    switch (c) {
      case '+': current_ = {Token::plus, pos_++}; return;
      case '-': current_ = {Token::minus, pos_++}; return;
      case '*': current_ = {Token::star, pos_++}; return;
      case '/': current_ = {Token::slash, pos_++}; return;
      case '^': current_ = {Token::caret, pos_++}; return;
      case '(': current_ = {Token::lparen, pos_++}; return;
      case ')': current_ = {Token::rparen, pos_++}; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      bool integer = true;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++pos_;
        } else if (d == '.' || d == 'e' || d == 'E') {
          integer = false;
          ++pos_;
          if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-') &&
              (d == 'e' || d == 'E'))
            ++pos_;
        } else {
          break;
        }
      }
      std::string_view num = text_.substr(start, pos_ - start);
      double value = 0.0;
      auto res = std::from_chars(num.data(), num.data() + num.size(), value);
      if (res.ec != std::errc() || res.ptr != num.data() + num.size())
        throw ParseError(start, "malformed number '" + std::string(num) + "'");
      current_ = Token{Token::number, start, value, integer, std::string(num)};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_ = Token{Token::ident, start, 0.0, false,
                       std::string(text_.substr(start, pos_ - start))};
      return;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

ExprPtr node(ExprKind kind, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr number_node(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::constant;
  e->number = v;
  return e;
}

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, double>& params)
      : lexer_(text), params_(params) {}

  ExprPtr parse() {
    if (lexer_.peek().kind == Token::end) throw ParseError(0, "empty expression");
    ExprPtr e = parse_sum();
    const Token& t = lexer_.peek();
    if (t.kind != Token::end) throw ParseError(t.pos, "unexpected trailing input");
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    while (true) {
      Token::Kind k = lexer_.peek().kind;
      if (k != Token::plus && k != Token::minus) return lhs;
      lexer_.take();
      ExprPtr rhs = parse_product();
      lhs = node(k == Token::plus ? ExprKind::add : ExprKind::sub, lhs, rhs);
    }
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    while (true) {
      Token::Kind k = lexer_.peek().kind;
      if (k != Token::star && k != Token::slash) return lhs;
      lexer_.take();
      ExprPtr rhs = parse_unary();
      lhs = node(k == Token::star ? ExprKind::mul : ExprKind::div, lhs, rhs);
    }
  }

  ExprPtr parse_unary() {
    if (lexer_.peek().kind == Token::minus) {
      lexer_.take();
      return node(ExprKind::neg, parse_unary());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    while (lexer_.peek().kind == Token::caret) {
      lexer_.take();
      int sign = 1;
      if (lexer_.peek().kind == Token::minus) {
        lexer_.take();
        sign = -1;
      }
      Token t = lexer_.take();
      if (t.kind != Token::number || !t.is_integer)
        throw ParseError(t.pos, "exponent must be an integer literal");
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::pow_int;
      e->exponent = sign * static_cast<int>(t.value);
      e->a = base;
      base = e;
    }
    return base;
  }

  ExprPtr parse_atom() {
    Token t = lexer_.take();
    switch (t.kind) {
      case Token::number:
        return number_node(t.value);
      case Token::lparen: {
        ExprPtr e = parse_sum();
        Token close = lexer_.take();
        if (close.kind != Token::rparen) throw ParseError(close.pos, "expected ')'");
        return e;
      }
      case Token::ident: {
        if (t.text == "sqrt" || t.text == "exp" || t.text == "log") {
          Token open = lexer_.take();
          if (open.kind != Token::lparen)
            throw ParseError(open.pos, "expected '(' after function name");
          ExprPtr arg = parse_sum();
          Token close = lexer_.take();
          if (close.kind != Token::rparen) throw ParseError(close.pos, "expected ')'");
          ExprKind k = t.text == "sqrt" ? ExprKind::fn_sqrt
                       : t.text == "exp" ? ExprKind::fn_exp
                                         : ExprKind::fn_log;
          return node(k, arg);
        }
        if (t.text == "r") return node(ExprKind::var_r);
        if (t.text == "s") return node(ExprKind::var_s);
        auto it = params_.find(t.text);
        if (it == params_.end())
          throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::parameter;
        e->name = t.text;
        e->number = it->second;
        return e;
      }
      case Token::end:
        throw ParseError(t.pos, "unexpected end of expression");
      default:
        throw ParseError(t.pos, "unexpected token");
    }
  }

  Lexer lexer_;
  const std::map<std::string, double>& params_;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

ExprPtr parse_expression(std::string_view text, const std::map<std::string, double>& params) {
  return Parser(text, params).parse();
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::constant: return format_number(e.number);
    case ExprKind::var_r: return "r";
    case ExprKind::var_s: return "s";
    case ExprKind::parameter: return e.name;
    case ExprKind::add: return "(" + to_string(*e.a) + " + " + to_string(*e.b) + ")";
    case ExprKind::sub: return "(" + to_string(*e.a) + " - " + to_string(*e.b) + ")";
    case ExprKind::mul: return "(" + to_string(*e.a) + "*" + to_string(*e.b) + ")";
    case ExprKind::div: return "(" + to_string(*e.a) + "/" + to_string(*e.b) + ")";
    case ExprKind::neg: return "(-" + to_string(*e.a) + ")";
    case ExprKind::pow_int:
      return to_string(*e.a) + "^" + std::to_string(e.exponent);
    case ExprKind::fn_sqrt: return "sqrt(" + to_string(*e.a) + ")";
    case ExprKind::fn_exp: return "exp(" + to_string(*e.a) + ")";
    case ExprKind::fn_log: return "log(" + to_string(*e.a) + ")";
  }
  return "?";
}

bool references_var(const Expr& e, ExprKind var) {
  if (e.kind == var) return true;
  if (e.a && references_var(*e.a, var)) return true;
  if (e.b && references_var(*e.b, var)) return true;
  return false;
}

double eval_scalar(const Expr& e, double r, double s) {
  switch (e.kind) {
    case ExprKind::constant:
    case ExprKind::parameter: return e.number;
    case ExprKind::var_r: return r;
    case ExprKind::var_s: return s;
    case ExprKind::add: return eval_scalar(*e.a, r, s) + eval_scalar(*e.b, r, s);
    case ExprKind::sub: return eval_scalar(*e.a, r, s) - eval_scalar(*e.b, r, s);
    case ExprKind::mul: return eval_scalar(*e.a, r, s) * eval_scalar(*e.b, r, s);
    case ExprKind::div: {
      double denom = eval_scalar(*e.b, r, s);
      if (denom == 0.0) throw DomainError("profile domain error: division by zero");
      return eval_scalar(*e.a, r, s) / denom;
    }
    case ExprKind::neg: return -eval_scalar(*e.a, r, s);
    case ExprKind::pow_int: return std::pow(eval_scalar(*e.a, r, s), e.exponent);
    case ExprKind::fn_sqrt: {
      double v = eval_scalar(*e.a, r, s);
      if (!(v > 0.0)) throw DomainError("profile domain error: sqrt of non-positive value");
      return std::sqrt(v);
    }
    case ExprKind::fn_exp: return std::exp(eval_scalar(*e.a, r, s));
    case ExprKind::fn_log: {
      double v = eval_scalar(*e.a, r, s);
      if (!(v > 0.0)) throw DomainError("profile domain error: log of non-positive value");
      return std::log(v);
    }
  }
  throw Error("unreachable expression kind");
}

Jet eval_jet(const Expr& e, const JetVars& vars) {
  switch (e.kind) {
    case ExprKind::constant:
    case ExprKind::parameter: return Jet::constant(vars.s.space(), e.number);
    case ExprKind::var_r: return vars.r();
    case ExprKind::var_s: return vars.s;
    case ExprKind::add: return eval_jet(*e.a, vars) + eval_jet(*e.b, vars);
    case ExprKind::sub: return eval_jet(*e.a, vars) - eval_jet(*e.b, vars);
    case ExprKind::mul: return eval_jet(*e.a, vars) * eval_jet(*e.b, vars);
    case ExprKind::div: return eval_jet(*e.a, vars) / eval_jet(*e.b, vars);
    case ExprKind::neg: return -eval_jet(*e.a, vars);
    case ExprKind::pow_int:
      // Even powers of r route through r² so that evaluation stays regular
      // where the radial jet itself is undefined (x = 0).
      if (e.a->kind == ExprKind::var_r && e.exponent % 2 == 0)
        return pow_int(vars.r2, e.exponent / 2);
      return pow_int(eval_jet(*e.a, vars), e.exponent);
    case ExprKind::fn_sqrt: return sqrt(eval_jet(*e.a, vars));
    case ExprKind::fn_exp: return exp(eval_jet(*e.a, vars));
    case ExprKind::fn_log: return log(eval_jet(*e.a, vars));
  }
  throw Error("unreachable expression kind");
}

}  // namespace finslab
