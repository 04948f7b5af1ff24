#include "gmap4/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmap4 {

namespace {

struct Token {
  enum Kind { number, name, op, end } kind = end;
  std::string text;
  double value = 0.0;
  int column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view text, int line, int firstColumn)
      : text_(text), line_(line), first_(firstColumn) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text_.size()) {
      const char ch = text_[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      Token t;
      t.column = first_ + static_cast<int>(i);
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        std::size_t j = i;
        while (j < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[j])) || text_[j] == '.')) ++j;
        if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
          if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
            while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
            j = k;
          }
        }
        t.kind = Token::number;
        t.text = std::string(text_.substr(i, j - i));
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
          throw ParseError("malformed number '" + t.text + "'", line_, t.column);
        }
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        t.kind = Token::name;
        t.text = std::string(text_.substr(i, j - i));
        i = j;
      } else if (std::string_view("+-*/^()").find(ch) != std::string_view::npos) {
        t.kind = Token::op;
        t.text = std::string(1, ch);
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + ch + "'", line_, t.column);
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.column = first_ + static_cast<int>(text_.size());
    out.push_back(end);
    return out;
  }

 private:
  std::string_view text_;
  int line_;
  int first_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, Expr& out, int line) : toks_(std::move(tokens)), e_(out), line_(line) {}

  void run() {
    e_.root = expr();
    if (peek().kind != Token::end) fail("unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* s) const { return peek().kind == Token::op && peek().text == s; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Token::end ? msg + " (unexpected end of expression)" : msg, line_, t.column);
  }

  int add(Node n) {
    e_.nodes.push_back(n);
    return static_cast<int>(e_.nodes.size()) - 1;
  }

  int expr() {
    int lhs = term();
    while (is_op("+") || is_op("-")) {
      const Token t = take();
      Node n{.kind = NodeKind::binary, .binary = t.text == "+" ? BinaryOp::add : BinaryOp::sub, .lhs = lhs};
      n.rhs = term();
      n.line = line_;
      n.column = t.column;
      lhs = add(n);
    }
    return lhs;
  }

  int term() {
    int lhs = unary();
    while (is_op("*") || is_op("/")) {
      const Token t = take();
      Node n{.kind = NodeKind::binary, .binary = t.text == "*" ? BinaryOp::mul : BinaryOp::div, .lhs = lhs};
      n.rhs = unary();
      n.line = line_;
      n.column = t.column;
      lhs = add(n);
    }
    return lhs;
  }

  int unary() {
    if (is_op("+")) {
      take();
      return unary();
    }
    if (is_op("-")) {
      const Token t = take();
      Node n{.kind = NodeKind::unary, .unary = UnaryOp::neg};
      n.lhs = unary();
      n.line = line_;
      n.column = t.column;
      return add(n);
    }
    return power();
  }

  int power() {
    const int base = primary();
    if (!is_op("^")) return base;
    const Token caret = take();
    int sign = 1;
    if (is_op("-") || is_op("+")) sign = take().text == "-" ? -1 : 1;
    if (peek().kind != Token::number) fail("exponent must be an integer literal");
    const Token num = take();
    int exponent = 0;
    const auto res = std::from_chars(num.text.data(), num.text.data() + num.text.size(), exponent);
    if (res.ec != std::errc() || res.ptr != num.text.data() + num.text.size()) {
      throw ParseError("exponent must be an integer literal", line_, num.column);
    }
    if (is_op("^")) fail("chained '^' is not allowed; use parentheses");
    Node n{.kind = NodeKind::power, .exponent = sign * exponent, .lhs = base};
    n.line = line_;
    n.column = caret.column;
    return add(n);
  }

  int primary() {
    const Token& t = peek();
    if (t.kind == Token::number) {
      take();
      Node n{.kind = NodeKind::constant, .value = t.value};
      n.line = line_;
      n.column = t.column;
      return add(n);
    }
    if (t.kind == Token::name) {
      const Token name = take();
      static const std::map<std::string, UnaryOp> funcs{
          {"sin", UnaryOp::sin}, {"cos", UnaryOp::cos}, {"exp", UnaryOp::exp}, {"sqrt", UnaryOp::sqrt}};
      if (auto f = funcs.find(name.text); f != funcs.end()) {
        if (!is_op("(")) fail("expected '(' after " + name.text);
        take();
        Node n{.kind = NodeKind::unary, .unary = f->second};
        n.lhs = expr();
        if (!is_op(")")) fail("expected ')'");
        take();
        n.line = line_;
        n.column = name.column;
        return add(n);
      }
      Node n;
      n.line = line_;
      n.column = name.column;
      auto& vars = e_.variables;
      if (auto v = std::find(vars.begin(), vars.end(), name.text); v != vars.end()) {
        n.kind = NodeKind::variable;
        n.index = static_cast<int>(v - vars.begin());
      } else {
        auto& ps = e_.parameters;
        auto p = std::find(ps.begin(), ps.end(), name.text);
        if (p == ps.end()) p = ps.insert(ps.end(), name.text);
        n.kind = NodeKind::parameter;
        n.index = static_cast<int>(p - ps.begin());
      }
      return add(n);
    }
    if (is_op("(")) {
      take();
      const int inner = expr();
      if (!is_op(")")) fail("expected ')'");
      take();
      return inner;
    }
    fail(t.kind == Token::end ? "expected an operand" : "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Expr& e_;
  int line_;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool equal_nodes(const Expr& a, int ia, const Expr& b, int ib) {
  const Node& x = a.nodes[static_cast<std::size_t>(ia)];
  const Node& y = b.nodes[static_cast<std::size_t>(ib)];
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::constant: return x.value == y.value;
    case NodeKind::parameter:
      return a.parameters[static_cast<std::size_t>(x.index)] == b.parameters[static_cast<std::size_t>(y.index)];
    case NodeKind::variable:
      return a.variables[static_cast<std::size_t>(x.index)] == b.variables[static_cast<std::size_t>(y.index)];
    case NodeKind::unary: return x.unary == y.unary && equal_nodes(a, x.lhs, b, y.lhs);
    case NodeKind::power: return x.exponent == y.exponent && equal_nodes(a, x.lhs, b, y.lhs);
    case NodeKind::binary:
      return x.binary == y.binary && equal_nodes(a, x.lhs, b, y.lhs) && equal_nodes(a, x.rhs, b, y.rhs);
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

double parse_number(std::string_view s, int line, int column, const char* what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(std::string("expected a number for ") + what, line, column);
  }
  return v;
}

Domain parse_domain(std::string_view line, std::string_view rhs, int lineNo) {
  // [a, b] x [c, d]
  const int col = column_of(line, rhs);
  auto bad = [&](const std::string& why) -> ParseError {
    return ParseError("malformed domain (" + why + "); expected [a, b] x [c, d]", lineNo, col);
  };
  auto interval = [&](std::string_view& rest, double& lo, double& hi) {
    rest = trim(rest);
    if (rest.empty() || rest.front() != '[') throw bad("missing '['");
    const auto close = rest.find(']');
    if (close == std::string_view::npos) throw bad("missing ']'");
    const std::string_view inside = rest.substr(1, close - 1);
    const auto comma = inside.find(',');
    if (comma == std::string_view::npos) throw bad("missing ','");
    lo = parse_number(inside.substr(0, comma), lineNo, column_of(line, inside), "domain bound");
    hi = parse_number(inside.substr(comma + 1), lineNo, column_of(line, inside.substr(comma + 1)), "domain bound");
    rest.remove_prefix(close + 1);
  };
  Domain d;
  std::string_view rest = rhs;
  interval(rest, d.x0, d.x1);
  rest = trim(rest);
  if (rest.empty() || rest.front() != 'x') throw bad("missing 'x' between intervals");
  rest.remove_prefix(1);
  interval(rest, d.y0, d.y1);
  if (!trim(rest).empty()) throw bad("trailing text");
  if (!(d.x0 < d.x1) || !(d.y0 < d.y1)) throw bad("empty interval");
  return d;
}

bool valid_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

void finish_surface(SurfaceDef& def) {
  def.phiParams = bind_parameters(def.phi, def.params);
  def.psiParams = bind_parameters(def.psi, def.params);
}

}  // namespace

Expr parse_expression(std::string_view text, std::vector<std::string> variables, int line, int firstColumn) {
  Expr e;
  e.variables = std::move(variables);
  Parser(Lexer(text, line, firstColumn).run(), e, line).run();
  return e;
}

std::string to_string(const Expr& e, int id) {
  const Node& n = e.nodes[static_cast<std::size_t>(id)];
  switch (n.kind) {
    case NodeKind::constant: return format_number(n.value);
    case NodeKind::parameter: return e.parameters[static_cast<std::size_t>(n.index)];
    case NodeKind::variable: return e.variables[static_cast<std::size_t>(n.index)];
    case NodeKind::unary: {
      static const char* names[] = {"-", "sin", "cos", "exp", "sqrt"};
      const std::string inner = to_string(e, n.lhs);
      if (n.unary == UnaryOp::neg) return "(-" + inner + ")";
      return std::string(names[static_cast<int>(n.unary)]) + "(" + inner + ")";
    }
    case NodeKind::power: return "(" + to_string(e, n.lhs) + "^" + std::to_string(n.exponent) + ")";
    case NodeKind::binary: {
      static const char* ops[] = {" + ", " - ", " * ", " / "};
      return "(" + to_string(e, n.lhs) + ops[static_cast<int>(n.binary)] + to_string(e, n.rhs) + ")";
    }
  }
  return {};
}

std::string to_string(const Expr& e) { return e.root < 0 ? std::string() : to_string(e, e.root); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.root < 0 || b.root < 0) return a.root == b.root;
  return equal_nodes(a, a.root, b, b.root);
}

std::vector<double> bind_parameters(const Expr& e, const ParamTable& table) {
  std::vector<double> out(e.parameters.size());
  for (std::size_t k = 0; k < e.parameters.size(); ++k) {
    auto it = table.find(e.parameters[k]);
    if (it == table.end()) {
      const auto use = std::find_if(e.nodes.begin(), e.nodes.end(), [&](const Node& n) {
        return n.kind == NodeKind::parameter && n.index == static_cast<int>(k);
      });
      throw ParseError("undeclared parameter '" + e.parameters[k] + "'", use->line, use->column);
    }
    out[k] = it->second;
  }
  return out;
}

SurfaceDef parse_surface(std::string_view text) {
  SurfaceDef def;
  bool havePhi = false, havePsi = false, haveDomain = false;
  int lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view body = line.substr(0, line.find('#'));
    if (trim(body).empty()) continue;

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", lineNo, column_of(line, trim(body)));
    }
    const std::string_view lhs = trim(body.substr(0, eq));
    const std::string_view rhs = body.substr(eq + 1);
    const int lhsCol = column_of(line, lhs.empty() ? body : lhs);

    if (lhs.substr(0, 6) == "param " || lhs.substr(0, 6) == "param\t") {
      const std::string_view name = trim(lhs.substr(6));
      if (!valid_name(name)) throw ParseError("invalid parameter name", lineNo, column_of(line, name));
      static const char* reserved[] = {"x", "y", "sin", "cos", "exp", "sqrt", "param", "phi", "psi", "domain"};
      for (const char* r : reserved) {
        if (name == r) throw ParseError("reserved name '" + std::string(name) + "'", lineNo, column_of(line, name));
      }
      if (def.params.count(std::string(name))) {
        throw ParseError("duplicate parameter '" + std::string(name) + "'", lineNo, column_of(line, name));
      }
      def.params[std::string(name)] = parse_number(rhs, lineNo, column_of(line, rhs), "parameter value");
    } else if (lhs == "phi" || lhs == "psi") {
      bool& seen = lhs == "phi" ? havePhi : havePsi;
      if (seen) throw ParseError("duplicate " + std::string(lhs), lineNo, lhsCol);
      seen = true;
      (lhs == "phi" ? def.phi : def.psi) = parse_expression(rhs, {"x", "y"}, lineNo, column_of(line, rhs));
    } else if (lhs == "domain") {
      if (haveDomain) throw ParseError("duplicate domain", lineNo, lhsCol);
      haveDomain = true;
      def.domain = parse_domain(line, rhs, lineNo);
    } else {
      throw ParseError("unknown key '" + std::string(lhs) + "'", lineNo, lhsCol);
    }
  }
  if (!havePhi) throw ParseError("missing phi", lineNo, 1);
  if (!havePsi) throw ParseError("missing psi", lineNo, 1);
  finish_surface(def);
  return def;
}

SurfaceDef load_surface(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open surface file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_surface(ss.str());
}

SurfaceDef make_surface(std::string_view phi, std::string_view psi, ParamTable params, Domain domain) {
  if (!(domain.x0 < domain.x1) || !(domain.y0 < domain.y1)) throw InputError("empty domain");
  SurfaceDef def;
  def.phi = parse_expression(phi, {"x", "y"});
  def.psi = parse_expression(psi, {"x", "y"});
  def.params = std::move(params);
  def.domain = domain;
  finish_surface(def);
  return def;
}

std::string to_surface_text(const SurfaceDef& def) {
  std::string out;
  for (const auto& [name, value] : def.params) out += "param " + name + " = " + format_number(value) + "\n";
  out += "phi = " + to_string(def.phi) + "\n";
  out += "psi = " + to_string(def.psi) + "\n";
  const Domain& d = def.domain;
  out += "domain = [" + format_number(d.x0) + ", " + format_number(d.x1) + "] x [" + format_number(d.y0) + ", " +
         format_number(d.y1) + "]\n";
  return out;
}

SurfaceJets eval_surface(const SurfaceDef& def, Point2 point, int order) {
  const std::array<Jet, 2> vars{Jet::variable(Axis::x, point, order), Jet::variable(Axis::y, point, order)};
  auto make = [order](double v) { return Jet::constant(v, order); };
  return SurfaceJets{evaluate<Jet>(def.phi, vars, def.phiParams, make),
                     evaluate<Jet>(def.psi, vars, def.psiParams, make), !def.domain.contains(point)};
}

}  // namespace gmap4
