// Random polynomials, vectors and rotations for property checks.
#pragma once

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gmap4/grassmann.hpp"

namespace gmap4 {

struct Monomial {
  double c;
  int i, j;
};

/// Polynomial in x, y kept both as text (for the parser) and as a coefficient
/// list (for independent evaluation).
struct Poly {
  std::vector<Monomial> terms;

  std::string text() const {
    if (terms.empty()) return "0";
    std::string s;
    char buf[64];
    for (const auto& t : terms) {
      std::snprintf(buf, sizeof buf, "(%.17g)", t.c);
      if (!s.empty()) s += " + ";
      s += buf;
      if (t.i) s += "*x^" + std::to_string(t.i);
      if (t.j) s += "*y^" + std::to_string(t.j);
    }
    return s;
  }

  template <class R>
  R value(R x, R y) const {
    R s = 0;
    for (const auto& t : terms) {
      R m = t.c;
      for (int k = 0; k < t.i; ++k) m *= x;
      for (int k = 0; k < t.j; ++k) m *= y;
      s += m;
    }
    return s;
  }

  /// Exact d^{a+b}/dx^a dy^b.
  double derivative(int a, int b, double x, double y) const {
    double s = 0;
    for (const auto& t : terms) {
      if (t.i < a || t.j < b) continue;
      double m = t.c;
      for (int k = 0; k < a; ++k) m *= t.i - k;
      for (int k = 0; k < b; ++k) m *= t.j - k;
      for (int k = 0; k < t.i - a; ++k) m *= x;
      for (int k = 0; k < t.j - b; ++k) m *= y;
      s += m;
    }
    return s;
  }

  /// The polynomial's partial derivative as a new polynomial.
  Poly partial(int a, int b) const {
    Poly p;
    for (const auto& t : terms) {
      if (t.i < a || t.j < b) continue;
      double m = t.c;
      for (int k = 0; k < a; ++k) m *= t.i - k;
      for (int k = 0; k < b; ++k) m *= t.j - k;
      p.terms.push_back({m, t.i - a, t.j - b});
    }
    return p;
  }
};

/// Dense random polynomial of total degree <= degree, coefficients in
/// [-scale, scale]; roughly a third of the terms are dropped.
inline Poly random_poly(std::mt19937_64& rng, int degree, double scale = 1.0, int minDegree = 0) {
  std::uniform_real_distribution<double> coef(-scale, scale);
  std::bernoulli_distribution keep(0.7);
  Poly p;
  for (int n = minDegree; n <= degree; ++n)
    for (int j = 0; j <= n; ++j)
      if (keep(rng)) p.terms.push_back({coef(rng), n - j, j});
  if (p.terms.empty()) p.terms.push_back({coef(rng), degree, 0});
  return p;
}

inline Vec4 random_vec4(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec4(n(rng), n(rng), n(rng), n(rng));
}

inline Vec3 random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

/// Haar-ish orthogonal matrix from QR of a Gaussian matrix; proper forces det = +1.
inline Rotation4 random_rotation(std::mt19937_64& rng, bool proper = true) {
  Mat4 g;
  for (int i = 0; i < 4; ++i) g.col(i) = random_vec4(rng);
  Mat4 q = Eigen::HouseholderQR<Mat4>(g).householderQ();
  if (proper && q.determinant() < 0) q.col(0) = -q.col(0);
  return Rotation4(q);
}

}  // namespace gmap4
