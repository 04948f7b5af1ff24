#include "gmap4/jet.hpp"

#include <string>

namespace gmap4 {

namespace {

constexpr std::array<double, 4> kFactorial{1.0, 1.0, 2.0, 6.0};

void check_order(int order) {
  if (order < 1 || order > Jet::kMaxOrder) {
    throw InputError("jet order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
  }
}

// Taylor-normalised coefficients: t[i,j] = c[i,j] / (i! j!).
using Taylor = std::array<double, Jet::kSlots>;

Taylor to_taylor(const Jet& f) {
  Taylor t{};
  for (int n = 0; n <= f.order(); ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      t[Jet::slot(i, j)] = f(i, j) / (kFactorial[i] * kFactorial[j]);
    }
  return t;
}

Jet from_taylor(const Taylor& t, int order) {
  Jet f(order);
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      f.set(i, j, t[Jet::slot(i, j)] * kFactorial[i] * kFactorial[j]);
    }
  return f;
}

Taylor taylor_mul(const Taylor& a, const Taylor& b, int order) {
  Taylor r{};
  for (int n1 = 0; n1 <= order; ++n1)
    for (int j1 = 0; j1 <= n1; ++j1) {
      const double av = a[Jet::slot(n1 - j1, j1)];
      if (av == 0.0) continue;
      for (int n2 = 0; n1 + n2 <= order; ++n2)
        for (int j2 = 0; j2 <= n2; ++j2)
          r[Jet::slot(n1 - j1 + n2 - j2, j1 + j2)] += av * b[Jet::slot(n2 - j2, j2)];
    }
  return r;
}

// g(f) given g^{(n)}(f0) for n = 0..order.
Jet compose(const Jet& f, const std::array<double, 4>& g) {
  const int order = f.order();
  Taylor delta = to_taylor(f);
  delta[0] = 0.0;
  Taylor power{};
  power[0] = 1.0;
  Taylor result{};
  for (int n = 0; n <= order; ++n) {
    const double coeff = g[n] / kFactorial[n];
    for (std::size_t k = 0; k < Jet::kSlots; ++k) result[k] += coeff * power[k];
    power = taylor_mul(power, delta, order);
  }
  return from_taylor(result, order);
}

}  // namespace

Jet::Jet(int order) : order_(order) { check_order(order); }

Jet Jet::constant(double value, int order) {
  Jet j(order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(Axis which, Point2 at, int order) {
  Jet j(order);
  if (which == Axis::x) {
    j.c_[0] = at.x;
    j.c_[slot(1, 0)] = 1.0;
  } else {
    j.c_[0] = at.y;
    j.c_[slot(0, 1)] = 1.0;
  }
  return j;
}

Jet Jet::from_derivatives(int order, std::span<const double> values) {
  Jet j(order);
  const std::size_t used = slot(0, order) + 1;
  for (std::size_t k = 0; k < used && k < values.size(); ++k) j.c_[k] = values[k];
  return j;
}

double Jet::operator()(int i, int j) const {
  if (i < 0 || j < 0) throw InputError("negative derivative index");
  if (i + j > order_) return 0.0;
  return c_[slot(i, j)];
}

void Jet::set(int i, int j, double v) {
  if (i < 0 || j < 0 || i + j > order_) throw InputError("derivative index exceeds jet order");
  c_[slot(i, j)] = v;
}

Jet Jet::truncated(int order) const {
  check_order(order);
  if (order > order_) throw InputError("cannot raise the order of a jet");
  Jet r(order);
  for (std::size_t k = 0; k <= slot(0, order); ++k) r.c_[k] = c_[k];
  return r;
}

Jet Jet::derivative(Axis which) const {
  if (order_ < 2) throw InputError("derivative of an order-1 jet has order 0");
  Jet r(order_ - 1);
  for (int n = 0; n <= order_ - 1; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      r.c_[slot(i, j)] = which == Axis::x ? c_[slot(i + 1, j)] : c_[slot(i, j + 1)];
    }
  return r;
}

void Jet::require_same_order(const Jet& other) const {
  if (other.order_ != order_) {
    throw InputError("jet order mismatch (" + std::to_string(order_) + " vs " +
                     std::to_string(other.order_) + ")");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_order(rhs);
  for (std::size_t k = 0; k < kSlots; ++k) c_[k] += rhs.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_order(rhs);
  for (std::size_t k = 0; k < kSlots; ++k) c_[k] -= rhs.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  require_same_order(rhs);
  *this = from_taylor(taylor_mul(to_taylor(*this), to_taylor(rhs), order_), order_);
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  require_same_order(rhs);
  return *this *= reciprocal(rhs);
}

Jet operator-(Jet arg) {
  for (auto& v : arg.c_) v = -v;
  return arg;
}

Jet reciprocal(const Jet& arg) {
  const double u = arg.value();
  if (u == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / u;
  return compose(arg, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet sin(const Jet& arg) {
  const double s = std::sin(arg.value()), c = std::cos(arg.value());
  return compose(arg, {s, c, -s, -c});
}

Jet cos(const Jet& arg) {
  const double s = std::sin(arg.value()), c = std::cos(arg.value());
  return compose(arg, {c, -s, -c, s});
}

Jet exp(const Jet& arg) {
  const double e = std::exp(arg.value());
  return compose(arg, {e, e, e, e});
}

Jet sqrt(const Jet& arg) {
  const double u = arg.value();
  if (!(u > 0.0)) throw DomainError("sqrt of non-positive value");
  const double s = std::sqrt(u);
  return compose(arg, {s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)});
}

Jet pow(const Jet& base, int exponent) {
  if (exponent < 0) return pow(reciprocal(base), -exponent);
  Jet result = Jet::constant(1.0, base.order());
  Jet square = base;
  for (int e = exponent; e > 0; e >>= 1) {
    if (e & 1) result *= square;
    if (e > 1) square *= square;
  }
  return result;
}

Jet jet_variable(Axis which, Point2 at, int order) { return Jet::variable(which, at, order); }

Jet jet_arith(const Jet& lhs, const Jet& rhs, JetOp op) {
  switch (op) {
    case JetOp::add: return lhs + rhs;
    case JetOp::sub: return lhs - rhs;
    case JetOp::mul: return lhs * rhs;
    case JetOp::div: return lhs / rhs;
  }
  throw InputError("unknown jet operation");
}

Jet jet_func(JetFunc f, const Jet& arg) {
  switch (f) {
    case JetFunc::neg: return -arg;
    case JetFunc::sin: return sin(arg);
    case JetFunc::cos: return cos(arg);
    case JetFunc::exp: return exp(arg);
    case JetFunc::sqrt: return sqrt(arg);
  }
  throw InputError("unknown jet function");
}

}  // namespace gmap4
