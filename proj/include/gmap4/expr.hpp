/**
 * @file expr.hpp
 * @brief Expression AST, parser, printer and evaluator; surface definition
 *        files.
 *
 * Grammar (whitespace ignored):
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := ('-' | '+') unary | power
 *   power   := primary ('^' ['-' | '+'] integer)?
 *   primary := number | name | func '(' expr ')' | '(' expr ')'
 *   func    := sin | cos | exp | sqrt
 *
 * '^' binds tighter than unary minus, so -x^2 is -(x^2). Exponents are
 * integer literals and cannot be chained.
 */
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmap4/errors.hpp"
#include "gmap4/jet.hpp"

namespace gmap4 {

enum class NodeKind { constant, parameter, variable, unary, binary, power };
enum class UnaryOp { neg, sin, cos, exp, sqrt };
enum class BinaryOp { add, sub, mul, div };

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;  // constant
  int index = -1;      // variable slot or parameter slot
  int exponent = 0;    // power
  UnaryOp unary = UnaryOp::neg;
  BinaryOp binary = BinaryOp::add;
  int lhs = -1;  // unary/power operand, binary left
  int rhs = -1;  // binary right
  int line = 1;
  int column = 1;
};

using ParamTable = std::map<std::string, double>;

/// A parsed expression. Nodes live in a flat arena; children precede parents.
struct Expr {
  std::vector<Node> nodes;
  int root = -1;
  std::vector<std::string> variables;   // names bound to variable slots
  std::vector<std::string> parameters;  // names referenced, in first-use order
};

/// Parses one expression. Identifiers that are not variables become parameter
/// references; binding happens later via bind_parameters.
Expr parse_expression(std::string_view text, std::vector<std::string> variables, int line = 1,
                      int firstColumn = 1);

/// Fully parenthesised form; numbers keep 17 significant digits, so
/// re-parsing gives the same tree.
std::string to_string(const Expr& e);
std::string to_string(const Expr& e, int node);

bool structurally_equal(const Expr& a, const Expr& b);

/// Values of the expression's parameter slots. Throws ParseError at the first
/// reference to an undeclared name.
std::vector<double> bind_parameters(const Expr& e, const ParamTable& table);

namespace detail {

inline double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}
inline double checked_sqrt(double a) {
  if (!(a > 0.0)) {
    if (a == 0.0) return 0.0;
    throw DomainError("sqrt of negative value");
  }
  return std::sqrt(a);
}
inline double checked_pow(double a, int n) {
  if (n < 0 && a == 0.0) throw DomainError("division by zero");
  return std::pow(a, n);
}
template <class T>
T checked_div(const T& a, const T& b) {
  return a / b;
}
template <class T>
T checked_sqrt(const T& a) {
  return sqrt(a);
}
template <class T>
T checked_pow(const T& a, int n) {
  return pow(a, n);
}

template <class T, class MakeConst>
T eval_node(const Expr& e, int id, std::span<const T> vars, std::span<const double> params,
            const MakeConst& make) {
  const Node& n = e.nodes[static_cast<std::size_t>(id)];
  try {
    switch (n.kind) {
      case NodeKind::constant:
        return make(n.value);
      case NodeKind::parameter:
        return make(params[static_cast<std::size_t>(n.index)]);
      case NodeKind::variable:
        return vars[static_cast<std::size_t>(n.index)];
      case NodeKind::unary: {
        T a = eval_node(e, n.lhs, vars, params, make);
        switch (n.unary) {
          case UnaryOp::neg: return -a;
          case UnaryOp::sin: using std::sin; return sin(a);
          case UnaryOp::cos: using std::cos; return cos(a);
          case UnaryOp::exp: using std::exp; return exp(a);
          case UnaryOp::sqrt: return checked_sqrt(a);
        }
        break;
      }
      case NodeKind::power:
        return checked_pow(eval_node(e, n.lhs, vars, params, make), n.exponent);
      case NodeKind::binary: {
        T a = eval_node(e, n.lhs, vars, params, make);
        T b = eval_node(e, n.rhs, vars, params, make);
        switch (n.binary) {
          case BinaryOp::add: return a + b;
          case BinaryOp::sub: return a - b;
          case BinaryOp::mul: return a * b;
          case BinaryOp::div: return checked_div(a, b);
        }
        break;
      }
    }
  } catch (const DomainError& err) {
    throw EvalError(err.what(), to_string(e, id));
  }
  throw Error("corrupt expression node");
}

}  // namespace detail

/// Evaluates over any number type closed under + - * /, unary -, sin, cos,
/// exp, sqrt and integer pow. make(double) builds constants of that type.
template <class T, class MakeConst>
T evaluate(const Expr& e, std::span<const T> vars, std::span<const double> params,
           const MakeConst& make) {
  if (vars.size() != e.variables.size()) throw InputError("wrong number of variable values");
  if (params.size() != e.parameters.size()) throw InputError("wrong number of parameter values");
  return detail::eval_node<T>(e, e.root, vars, params, make);
}

inline double evaluate(const Expr& e, std::span<const double> vars,
                       std::span<const double> params) {
  return evaluate<double>(e, vars, params, [](double v) { return v; });
}

struct Domain {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  bool contains(Point2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

/// phi, psi over variables (x, y) with bound parameters.
struct SurfaceDef {
  Expr phi;
  Expr psi;
  ParamTable params;
  Domain domain;
  std::vector<double> phiParams;
  std::vector<double> psiParams;
};

SurfaceDef parse_surface(std::string_view text);
SurfaceDef load_surface(const std::string& path);
/// Builds a definition from expression strings (used by tests and bindings).
SurfaceDef make_surface(std::string_view phi, std::string_view psi, ParamTable params = {},
                        Domain domain = {});
/// Surface file text that parses back to an equal definition.
std::string to_surface_text(const SurfaceDef& def);

struct SurfaceJets {
  Jet phi;
  Jet psi;
  bool outside = false;  // point lies outside the declared domain
};

SurfaceJets eval_surface(const SurfaceDef& def, Point2 point, int order = 2);

}  // namespace gmap4
