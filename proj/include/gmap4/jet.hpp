/**
 * @file jet.hpp
 * @brief Truncated bivariate Taylor arithmetic (order <= 3) and first-order
 *        multivariate jets.
 *
 * A Jet stores the raw partial derivatives d^{i+j} f / dx^i dy^j at a base
 * point for every i + j <= order. The factorials needed by the product and
 * composition rules are applied inside the kernel, so callers read
 * derivatives directly.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "gmap4/errors.hpp"

namespace gmap4 {

enum class Axis { x, y };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

class Jet {
 public:
  static constexpr int kMaxOrder = 3;
  static constexpr std::size_t kSlots = 10;

  /// Zero jet of the given order.
  explicit Jet(int order = 2);

  static Jet constant(double value, int order);
  static Jet variable(Axis which, Point2 at, int order);

  /// Builds a jet from derivative values listed in slot order
  /// (f, fx, fy, fxx, fxy, fyy, fxxx, fxxy, fxyy, fyyy), truncated to order.
  static Jet from_derivatives(int order, std::span<const double> values);

  int order() const noexcept { return order_; }

  /// d^{i+j} f / dx^i dy^j; zero when i + j exceeds the order.
  double operator()(int i, int j) const;
  void set(int i, int j, double v);

  double value() const noexcept { return c_[0]; }
  double dx() const noexcept { return c_[1]; }
  double dy() const noexcept { return c_[2]; }
  double dxx() const noexcept { return c_[3]; }
  double dxy() const noexcept { return c_[4]; }
  double dyy() const noexcept { return c_[5]; }

  Jet truncated(int order) const;

  /// The jet of a first partial derivative, one order lower.
  Jet derivative(Axis which) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(Jet lhs, const Jet& rhs) { return lhs *= rhs; }
  friend Jet operator/(Jet lhs, const Jet& rhs) { return lhs /= rhs; }
  friend Jet operator-(Jet arg);

  static constexpr std::size_t slot(int i, int j) {
    const int n = i + j;
    return static_cast<std::size_t>(n * (n + 1) / 2 + j);
  }

 private:
  void require_same_order(const Jet& other) const;

  int order_;
  std::array<double, kSlots> c_{};
};

enum class JetOp { add, sub, mul, div };
enum class JetFunc { neg, sin, cos, exp, sqrt };

Jet jet_variable(Axis which, Point2 at, int order);
Jet jet_arith(const Jet& lhs, const Jet& rhs, JetOp op);
Jet jet_func(JetFunc f, const Jet& arg);

Jet sin(const Jet& arg);
Jet cos(const Jet& arg);
Jet exp(const Jet& arg);
Jet sqrt(const Jet& arg);
Jet reciprocal(const Jet& arg);
Jet pow(const Jet& base, int exponent);

/// Value plus gradient in N variables. Used where a function of more than two
/// variables only needs first derivatives (characteristic fields).
template <std::size_t N>
struct FirstJet {
  double value = 0.0;
  std::array<double, N> grad{};

  static FirstJet constant(double v) { return FirstJet{v, {}}; }
  static FirstJet variable(std::size_t k, double v) {
    FirstJet r{v, {}};
    r.grad[k] = 1.0;
    return r;
  }

  friend FirstJet operator+(FirstJet a, const FirstJet& b) {
    a.value += b.value;
    for (std::size_t k = 0; k < N; ++k) a.grad[k] += b.grad[k];
    return a;
  }
  friend FirstJet operator-(FirstJet a, const FirstJet& b) {
    a.value -= b.value;
    for (std::size_t k = 0; k < N; ++k) a.grad[k] -= b.grad[k];
    return a;
  }
  friend FirstJet operator-(FirstJet a) {
    a.value = -a.value;
    for (auto& g : a.grad) g = -g;
    return a;
  }
  friend FirstJet operator*(const FirstJet& a, const FirstJet& b) {
    FirstJet r{a.value * b.value, {}};
    for (std::size_t k = 0; k < N; ++k) r.grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
    return r;
  }
  friend FirstJet operator/(const FirstJet& a, const FirstJet& b) {
    if (b.value == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / b.value;
    FirstJet r{a.value * inv, {}};
    for (std::size_t k = 0; k < N; ++k) r.grad[k] = (a.grad[k] - r.value * b.grad[k]) * inv;
    return r;
  }

  FirstJet chain(double f, double df) const {
    FirstJet r{f, {}};
    for (std::size_t k = 0; k < N; ++k) r.grad[k] = df * grad[k];
    return r;
  }
};

template <std::size_t N>
FirstJet<N> sin(const FirstJet<N>& a) {
  return a.chain(std::sin(a.value), std::cos(a.value));
}
template <std::size_t N>
FirstJet<N> cos(const FirstJet<N>& a) {
  return a.chain(std::cos(a.value), -std::sin(a.value));
}
template <std::size_t N>
FirstJet<N> exp(const FirstJet<N>& a) {
  const double e = std::exp(a.value);
  return a.chain(e, e);
}
template <std::size_t N>
FirstJet<N> sqrt(const FirstJet<N>& a) {
  if (!(a.value > 0.0)) throw DomainError("sqrt of non-positive value");
  const double s = std::sqrt(a.value);
  return a.chain(s, 0.5 / s);
}
template <std::size_t N>
FirstJet<N> pow(const FirstJet<N>& a, int n) {
  if (n == 0) return FirstJet<N>::constant(1.0);
  if (n < 0 && a.value == 0.0) throw DomainError("division by zero");
  return a.chain(std::pow(a.value, n), n * std::pow(a.value, n - 1));
}

/// Value, gradient and Hessian in N variables (variational equations of the
/// characteristic field need second derivatives of F).
template <std::size_t N>
struct SecondJet {
  double value = 0.0;
  std::array<double, N> grad{};
  std::array<std::array<double, N>, N> hess{};

  static SecondJet constant(double v) { return SecondJet{v, {}, {}}; }
  static SecondJet variable(std::size_t k, double v) {
    SecondJet r{v, {}, {}};
    r.grad[k] = 1.0;
    return r;
  }

  friend SecondJet operator+(SecondJet a, const SecondJet& b) {
    a.value += b.value;
    for (std::size_t i = 0; i < N; ++i) {
      a.grad[i] += b.grad[i];
      for (std::size_t j = 0; j < N; ++j) a.hess[i][j] += b.hess[i][j];
    }
    return a;
  }
  friend SecondJet operator-(const SecondJet& a) { return a.chain(-a.value, -1.0, 0.0); }
  friend SecondJet operator-(const SecondJet& a, const SecondJet& b) { return a + (-b); }
  friend SecondJet operator*(const SecondJet& a, const SecondJet& b) {
    SecondJet r{a.value * b.value, {}, {}};
    for (std::size_t i = 0; i < N; ++i) {
      r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
      for (std::size_t j = 0; j < N; ++j)
        r.hess[i][j] = a.hess[i][j] * b.value + a.value * b.hess[i][j] + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
    }
    return r;
  }
  friend SecondJet operator/(const SecondJet& a, const SecondJet& b) {
    if (b.value == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / b.value;
    return a * b.chain(inv, -inv * inv, 2 * inv * inv * inv);
  }

  /// f(this) given f, f' and f'' at the value.
  SecondJet chain(double f, double df, double d2f) const {
    SecondJet r{f, {}, {}};
    for (std::size_t i = 0; i < N; ++i) {
      r.grad[i] = df * grad[i];
      for (std::size_t j = 0; j < N; ++j) r.hess[i][j] = df * hess[i][j] + d2f * grad[i] * grad[j];
    }
    return r;
  }
};

template <std::size_t N>
SecondJet<N> sin(const SecondJet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return a.chain(s, c, -s);
}
template <std::size_t N>
SecondJet<N> cos(const SecondJet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return a.chain(c, -s, -c);
}
template <std::size_t N>
SecondJet<N> exp(const SecondJet<N>& a) {
  const double e = std::exp(a.value);
  return a.chain(e, e, e);
}
template <std::size_t N>
SecondJet<N> sqrt(const SecondJet<N>& a) {
  if (!(a.value > 0.0)) throw DomainError("sqrt of non-positive value");
  const double s = std::sqrt(a.value);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.value));
}
template <std::size_t N>
SecondJet<N> pow(const SecondJet<N>& a, int n) {
  if (n == 0) return SecondJet<N>::constant(1.0);
  if (n < 0 && a.value == 0.0) throw DomainError("division by zero");
  const double d2 = n == 1 ? 0.0 : n * (n - 1) * std::pow(a.value, n - 2);
  return a.chain(std::pow(a.value, n), n * std::pow(a.value, n - 1), d2);
}

}  // namespace gmap4
