#include <cmath>
#include <random>

#include "doctest.h"
#include "gmap4/frames.hpp"
#include "random_surfaces.hpp"

using namespace gmap4;
using doctest::Approx;

namespace {

const SurfaceDef& example1() {
  static const SurfaceDef d = make_surface("x^2 - y^2", "a*x + b*y - 2*x*y", {{"a", 1}, {"b", 2}});
  return d;
}
const SurfaceDef& z2() {
  static const SurfaceDef d = make_surface("x^2 - y^2", "2*x*y");
  return d;
}
const SurfaceDef& flat() {
  static const SurfaceDef d = make_surface("0", "0");
  return d;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Tangent lines are compared up to sign.
bool same_line(const Vec4& u, const Vec4& v, double tol) { return std::min((u - v).norm(), (u + v).norm()) <= tol; }

}  // namespace

TEST_CASE("Monge frame examples") {
  const MongeFrame m = monge_frame(example1(), {0, 0});
  CHECK(m.T1 == Vec4(1, 0, 0, 1));
  CHECK(m.T2 == Vec4(0, 1, 0, 2));
  CHECK(m.E == 2);
  CHECK(m.F == 2);
  CHECK(m.G == 5);
  CHECK(m.W == 6);
  CHECK(m.Ehat == 1);
  CHECK(m.Fhat == 0);
  CHECK(m.Ghat == 6);

  const MongeFrame f = monge_frame(flat(), {0.3, -0.2});
  CHECK(f.E == 1);
  CHECK(f.G == 1);
  CHECK(f.F == 0);
  CHECK(f.W == 1);

  for (const Point2 p : {Point2{0.3, 0.4}, Point2{-0.7, 0.1}}) {
    const MongeFrame r = monge_frame(z2(), p);
    const double expect = 1 + 4 * p.x * p.x + 4 * p.y * p.y;
    CHECK(r.E == Approx(expect).epsilon(1e-15));
    CHECK(r.G == Approx(expect).epsilon(1e-15));
    CHECK(r.F == 0);
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pt(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const SurfaceDef d = make_surface(testing::random_poly(rng, 3, 2).text(), testing::random_poly(rng, 3, 2).text());
    const MongeFrame r = monge_frame(d, {pt(rng), pt(rng)});
    CHECK(r.W > 0);
    CHECK(rel(r.Ehat * r.Ghat - r.Fhat * r.Fhat, r.W) < 1e-10);
  }
}

TEST_CASE("adapted frame") {
  const AdaptedFrame id = adapted_frame(monge_frame(flat(), {0.1, 0.2}));
  for (int i = 0; i < 4; ++i) CHECK((id.e[i] - Vec4::Unit(i)).norm() == 0);
  CHECK((id.coframe - Mat2::Identity()).norm() == 0);

  const AdaptedFrame e1 = adapted_frame(monge_frame(example1(), {0, 0}));
  CHECK((e1.e[0] - Vec4(1, 0, 0, 1) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((e1.e[1] - Vec4(-1, 1, 0, 1) / std::sqrt(3.0)).norm() < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pt(-1, 1);
  for (int k = 0; k < 40; ++k) {
    const SurfaceDef d = make_surface(testing::random_poly(rng, 3, 2).text(), testing::random_poly(rng, 3, 2).text());
    const MongeFrame m = monge_frame(d, {pt(rng), pt(rng)});
    for (FrameOrder order : {FrameOrder::standard, FrameOrder::swapped}) {
      const AdaptedFrame f = adapted_frame(m, order);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(f.e[i].dot(f.e[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
      // e1, e2 are orthogonal to the normal plane, e3, e4 to the tangent plane.
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(f.e[i].dot(m.N1)) < 1e-12 * m.N1.norm());
        CHECK(std::abs(f.e[i].dot(m.N2)) < 1e-12 * m.N2.norm());
        CHECK(std::abs(f.e[i + 2].dot(m.T1)) < 1e-12 * m.T1.norm());
        CHECK(std::abs(f.e[i + 2].dot(m.T2)) < 1e-12 * m.T2.norm());
        const Vec4 rebuilt = f.tangentBasis(0, i) * m.T1 + f.tangentBasis(1, i) * m.T2;
        CHECK((rebuilt - f.e[i]).norm() < 1e-12);
      }
      CHECK((f.coframe * f.tangentBasis - Mat2::Identity()).norm() < 1e-12);
    }
  }
}

TEST_CASE("second form examples") {
  const SecondFormCoefficients s = second_form(z2(), {0, 0});
  CHECK(s.a == 2);
  CHECK(s.b == 0);
  CHECK(s.c == -2);
  CHECK(s.e == 0);
  CHECK(s.f == 2);
  CHECK(s.g == 0);
  const SecondFormCoefficients f = second_form(flat(), {0.5, 0.5});
  for (double v : {f.a, f.b, f.c, f.e, f.f, f.g}) CHECK(v == 0);
}

TEST_CASE("curvature report examples") {
  const CurvatureReport z = curvature_report(z2(), {0, 0});
  CHECK(z.K == Approx(-8).epsilon(1e-15));
  CHECK(z.kappa == Approx(8).epsilon(1e-15));
  CHECK(z.meanH[0] == 0);
  CHECK(z.meanH[1] == 0);
  CHECK(z.Delta == Approx(16).epsilon(1e-15));
  CHECK(z.DeltaResultant == Approx(16).epsilon(1e-14));
  CHECK(z.pointClass == PointClass::elliptic);
  CHECK(z.inflection == Inflection::none);
  CHECK(z.asymptoticDirs.empty());

  const CurvatureReport e = curvature_report(example1(), {0, 0});
  CHECK(e.hessian.Hphi == -4);
  CHECK(e.hessian.Hpsi == -4);
  CHECK(e.hessian.L == -4);
  CHECK(e.hessian.N == -4);
  CHECK(e.hessian.M == 0);
  CHECK(e.hessian.Q == 0);
  CHECK(e.K == Approx(-7.0 / 9).epsilon(1e-14));
  CHECK(e.kappa == Approx(-7.0 / 9).epsilon(1e-14));
  CHECK(e.KHessian == Approx(-7.0 / 9).epsilon(1e-15));
  CHECK(e.kappaHessian == Approx(-7.0 / 9).epsilon(1e-15));

  const CurvatureReport f = curvature_report(flat(), {0.2, 0.1});
  CHECK(f.K == 0);
  CHECK(f.kappa == 0);
  CHECK(f.Delta == 0);
  CHECK(f.meanH[0] == 0);
  CHECK(f.meanH[1] == 0);
  CHECK(f.pointClass == PointClass::parabolic);
  CHECK(f.inflection == Inflection::flat);
  CHECK(f.gaussSingular);
  CHECK(f.allAsymptotic);
}

TEST_CASE("inflection subtypes") {
  // Surfaces inside a hyperplane: every point is an inflection point.
  const CurvatureReport saddle = curvature_report(make_surface("x^2 - y^2", "0"), {0, 0});
  CHECK(saddle.pointClass == PointClass::parabolic);
  CHECK(saddle.inflection == Inflection::real);
  const CurvatureReport bowl = curvature_report(make_surface("x^2 + y^2", "0"), {0, 0});
  CHECK(bowl.inflection == Inflection::imaginary);
  const CurvatureReport cyl = curvature_report(make_surface("x^2", "3*x^2 + y^3"), {0, 0});
  CHECK(cyl.inflection == Inflection::flat);
  const CurvatureReport hyp = curvature_report(make_surface("x^2", "y^2"), {0, 0});
  CHECK(hyp.pointClass == PointClass::hyperbolic);
  CHECK(hyp.asymptoticDirs.size() == 2);
  const CurvatureReport par = curvature_report(make_surface("x^2", "x*y"), {0, 0});
  CHECK(par.pointClass == PointClass::parabolic);
  CHECK(par.inflection == Inflection::none);
  CHECK(par.asymptoticDirs.size() == 1);
}

TEST_CASE("dual routes agree on random polynomial surfaces") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int s = 0; s < 100; ++s) {
    const SurfaceDef d = make_surface(testing::random_poly(rng, 4, 1.5).text(), testing::random_poly(rng, 4, 1.5).text());
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const Point2 p{-0.8 + 0.4 * i, -0.8 + 0.4 * j};
        CurvatureReport r;
        REQUIRE_NOTHROW(r = curvature_report(d, p));
        const double s2 = r.tol.scale * r.tol.scale;
        CHECK(std::abs(r.K - r.KHessian) <= 1e-9 * std::max({std::abs(r.K), s2}));
        CHECK(std::abs(r.kappa - r.kappaHessian) <= 1e-9 * std::max({std::abs(r.kappa), s2}));
        CHECK(std::abs(r.Delta - r.DeltaResultant) <= 1e-9 * std::max({std::abs(r.Delta), s2 * s2}));
        CHECK(std::abs(r.K - (r.K1 + r.K2)) <= 1e-10 * std::max(std::abs(r.K), 1e-300));

        // classification follows the sign of Delta
        if (std::abs(r.Delta) <= r.tol.delta) CHECK(r.pointClass == PointClass::parabolic);
        else CHECK(r.pointClass == (r.Delta > 0 ? PointClass::elliptic : PointClass::hyperbolic));

        // Wong, both directions, at the stated tolerance
        const double band = r.tol.wong * std::max({std::abs(r.K), std::abs(r.kappa), 1.0});
        const bool near = std::min(std::abs(r.K - r.kappa), std::abs(r.K + r.kappa)) <= band;
        CHECK(near == !r.isoclinicDirs.empty());

        // asymptotic directions are roots of the asymptotic form
        const auto& c = r.sff;
        for (const auto& a : r.asymptoticDirs) {
          const double u = a.dir.x(), v = a.dir.y();
          const double val = (c.a * c.f - c.b * c.e) * u * u + (c.a * c.g - c.c * c.e) * u * v +
                             (c.b * c.g - c.c * c.f) * v * v;
                    CHECK(std::abs(val) <= 1e-9 * std::max(s2, 1e-300) * 10);
        }
        const std::size_t expected = r.pointClass == PointClass::elliptic ? 0 : r.pointClass == PointClass::parabolic ? 1 : 2;
        if (!r.allAsymptotic) CHECK(r.asymptoticDirs.size() == expected);
        ++checked;
      }
  }
  CHECK(checked == 2500);
}

TEST_CASE("invariants do not depend on the Gram-Schmidt order") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pt(-0.8, 0.8);
  for (int s = 0; s < 40; ++s) {
    const auto F = testing::random_poly(rng, 4, 1.0, 2);
    // Mix in isoclinic (gradient) surfaces so the direction sets are non-empty.
    const SurfaceDef d = s % 2 ? make_surface(F.partial(1, 0).text(), F.partial(0, 1).text())
                               : make_surface(testing::random_poly(rng, 3, 1).text(), testing::random_poly(rng, 3, 1).text());
    const Point2 p{pt(rng), pt(rng)};
    const CurvatureReport a = curvature_report(d, p, {}, FrameOrder::standard);
    const CurvatureReport b = curvature_report(d, p, {}, FrameOrder::swapped);
    const double s2 = std::max(1e-300, a.tol.scale * a.tol.scale);
    CHECK(std::abs(a.K - b.K) <= 1e-12 * s2 * 10);
    CHECK(std::abs(a.kappa - b.kappa) <= 1e-12 * s2 * 10);
    CHECK(std::abs(a.Delta - b.Delta) <= 1e-12 * s2 * s2 * 10);
    CHECK(a.pointClass == b.pointClass);
    CHECK(a.inflection == b.inflection);
    REQUIRE(a.isoclinicDirs.size() == b.isoclinicDirs.size());
    for (std::size_t k = 0; k < a.isoclinicDirs.size(); ++k) {
      CHECK(a.isoclinicDirs[k].branch == b.isoclinicDirs[k].branch);
      CHECK(a.isoclinicDirs[k].allDirections == b.isoclinicDirs[k].allDirections);
      if (!a.isoclinicDirs[k].allDirections) CHECK(same_line(a.isoclinicDirs[k].tangent, b.isoclinicDirs[k].tangent, 1e-8));
    }
    if (s % 2) CHECK_FALSE(a.isoclinicDirs.empty());
    REQUIRE(a.asymptoticDirs.size() == b.asymptoticDirs.size());
    for (const auto& u : a.asymptoticDirs) {
      bool found = false;
      for (const auto& v : b.asymptoticDirs) found = found || same_line(u.tangent, v.tangent, 1e-6);
      CHECK(found);
    }

    // Swapping only the tangent pair reverses orientation: kappa changes sign.
    const MongeFrame m = monge_frame(d, p);
    const Vec4 e1 = m.T2.normalized();
    const Vec4 e2 = (m.T1 - m.T1.dot(e1) * e1).normalized();
    Eigen::Matrix<double, 4, 2> T, En;
    T << m.T1, m.T2;
    En << e1, e2;
    Mat2 gram;
    gram << m.E, m.F, m.F, m.G;
    const AdaptedFrame std = adapted_frame(m);
    const SecondFormCoefficients c = second_form(m.jets, gram.inverse() * (T.transpose() * En), std.e[2], std.e[3]);
    const double kappa1 = (c.a - c.c) * c.f - (c.e - c.g) * c.b;
    CHECK(std::abs(kappa1 + a.kappa) <= 1e-12 * s2 * 10);
  }
}

TEST_CASE("normal-form surfaces satisfy K = kappa or K = -kappa") {
  std::mt19937_64 rng(31);
  for (int s = 0; s < 30; ++s) {
    const auto F = testing::random_poly(rng, 4, 1.0, 2);
    const SurfaceDef plus = make_surface(F.partial(1, 0).text(), F.partial(0, 1).text());
    auto Fy = F.partial(0, 1);
    for (auto& t : Fy.terms) t.c = -t.c;
    const SurfaceDef minus = make_surface(F.partial(1, 0).text(), Fy.text());
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const Point2 p{-0.6 + 0.3 * i, -0.6 + 0.3 * j};
        const CurvatureReport a = curvature_report(plus, p);
        const CurvatureReport b = curvature_report(minus, p);
        CHECK(std::abs(a.K - a.kappa) < 1e-10);
        CHECK(std::abs(b.K + b.kappa) < 1e-10);
      }
  }
}

TEST_CASE("flat inflection points have K1 = K2 = 0") {
  const char* surfaces[][2] = {{"x^2", "3*x^2 + y^3"}, {"x^2 + x*y^2", "x^3 - 2*x^2"}, {"x^2 - y^3", "x^2*y"},
                               {"(x - y)^2", "2*(x - y)^2 + x^3"}, {"x^3", "y^3"}};
  int flats = 0;
  for (const auto& s : surfaces) {
    const SurfaceDef d = make_surface(s[0], s[1]);
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        const CurvatureReport r = curvature_report(d, {0.25 * i, 0.25 * j});
        if (r.inflection != Inflection::flat) continue;
        ++flats;
        CHECK(std::abs(r.K1) <= r.tol.k);
        CHECK(std::abs(r.K2) <= r.tol.k);
      }
  }
  CHECK(flats >= 5);
}

TEST_CASE("isoclinic 1-form closedness") {
  CHECK(isoclinic_form_closedness(z2(), {0, 0}, 1e-3) < 1e-4);
  CHECK(isoclinic_form_closedness(flat(), {0.1, 0.1}, 1e-3) == 0);
  CHECK(isoclinic_form_closedness(example1(), {0.1, -0.1}, 1e-3) < 1e-4);
  // The per-point Gram-Schmidt frame does not give a closed form here.
  CHECK(isoclinic_form_closedness(example1(), {0.1, -0.1}, 1e-3, +1, Gauge::gramSchmidt) > 0.1);
  CHECK_THROWS_AS(isoclinic_form_closedness(example1(), {0.9999, 0}, 1e-3), InputError);
}

TEST_CASE("Delta Hessian diagnostic is reported") {
  const DeltaDiagnostic dd = delta_hessian_diagnostic(z2(), {0, 0});
  CHECK(std::isfinite(dd.hessianDet));
  CHECK(dd.K == Approx(-8));
  CHECK(std::isfinite(dd.ratio));
}
