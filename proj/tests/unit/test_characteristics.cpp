#include <doctest.h>

#include <cmath>

#include "gmap4/characteristics.hpp"
#include "gmap4/errors.hpp"

using namespace gmap4;

namespace {

const Pde& example_pde() {
  static const Pde pde{PdeProblem{}};
  return pde;
}

const ReconstructedSurface& example_surface() {
  static const ReconstructedSurface s = reconstruct_surface(example_pde());
  return s;
}

CharStrip start_at(const Pde& pde, double x0) { return strip_start(pde, x0, compatibility_solve(pde, x0).h); }

}  // namespace

TEST_CASE("field at the origin") {
  const Pde& pde = example_pde();
  CHECK(std::abs(pde.F(0, 0, 0, -1)) < 1e-15);
  const State5 f = characteristic_field(pde, {0, 0, 0, 0, -1});
  CHECK(std::abs(f[0]) < 1e-12);
  CHECK(std::abs(f[1] - 0.5) < 1e-12);
  CHECK(std::abs(f[2] + 0.5) < 1e-12);  // q F_q
  CHECK(std::abs(f[3] - 1) < 1e-12);
  CHECK(std::abs(f[4]) < 1e-12);
  // Along the strip through the origin x stays put, so p_y and q_y follow.
  CHECK(std::abs(f[3] / f[1] - 2) < 1e-12);
  CHECK(std::abs(f[4] / f[1]) < 1e-12);
}

TEST_CASE("F_jet matches finite differences") {
  const Pde& pde = example_pde();
  const double x = 0.13, y = -0.21, p = 0.3, q = -0.8, h = 1e-6;
  const FirstJet<4> j = pde.F_jet(x, y, p, q);
  CHECK(std::abs(j.value - pde.F(x, y, p, q)) < 1e-15);
  CHECK(std::abs(j.grad[0] - (pde.F(x + h, y, p, q) - pde.F(x - h, y, p, q)) / (2 * h)) < 1e-8);
  CHECK(std::abs(j.grad[1] - (pde.F(x, y + h, p, q) - pde.F(x, y - h, p, q)) / (2 * h)) < 1e-8);
  CHECK(std::abs(j.grad[2] - (pde.F(x, y, p + h, q) - pde.F(x, y, p - h, q)) / (2 * h)) < 1e-8);
  CHECK(std::abs(j.grad[3] - (pde.F(x, y, p, q + h) - pde.F(x, y, p, q - h)) / (2 * h)) < 1e-8);
}

TEST_CASE("F_hessian matches differences of F_jet") {
  const Pde& pde = example_pde();
  const std::array<double, 4> at{0.13, -0.21, 0.3, -0.8};
  const SecondJet<4> s = pde.F_hessian(at[0], at[1], at[2], at[3]);
  const FirstJet<4> f = pde.F_jet(at[0], at[1], at[2], at[3]);
  CHECK(std::abs(s.value - f.value) < 1e-15);
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    auto up = at, dn = at;
    up[j] += h;
    dn[j] -= h;
    const FirstJet<4> fu = pde.F_jet(up[0], up[1], up[2], up[3]), fd = pde.F_jet(dn[0], dn[1], dn[2], dn[3]);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(s.grad[i] - f.grad[i]) < 1e-15);
      CHECK(std::abs(s.hess[i][j] - (fu.grad[i] - fd.grad[i]) / (2 * h)) < 1e-7);
    }
  }
}

TEST_CASE("compatibility") {
  const Pde& pde = example_pde();
  const CompatibilityResult r0 = compatibility_solve(pde, 0.0);
  CHECK(std::abs(r0.h + 1) < 1e-12);
  CHECK(r0.branchContinuous);
  const CompatibilityResult r1 = compatibility_solve(pde, 0.1);
  CHECK(r1.residual < 1e-12);
  CHECK(r1.branchContinuous);
  CHECK(r1.h < 0);
  // The other root at the origin is +1.
  const CompatibilityResult other = compatibility_solve(pde, 0.0, 1.0);
  CHECK(std::abs(other.h - 1) < 1e-12);
  CHECK_FALSE(other.branchContinuous);

  const PdeProblem sc = small_circle_problem(0.5);
  CHECK(std::abs(sc.initialQSeed + std::sqrt(3.0)) < 1e-15);
  CHECK_THROWS_AS(small_circle_problem(1.0), InputError);

  PdeProblem none;
  none.F = "q^2 + 1";
  CHECK_THROWS_AS(compatibility_solve(Pde(none), 0.0), NumericalError);
}

TEST_CASE("bad problem text") {
  PdeProblem bad;
  bad.F = "p + * q";
  CHECK_THROWS_AS(Pde{bad}, ParseError);
  bad = PdeProblem{};
  bad.initialCurve = "y";
  CHECK_THROWS_AS(Pde{bad}, ParseError);
}

TEST_CASE("strip conserves F") {
  const Pde& pde = example_pde();
  for (double x0 : {-0.3, 0.0, 0.1, 0.35}) {
    const CharStrip st = start_at(pde, x0);
    for (double dir : {1.0, -1.0}) {
      const StripResult r = strip_integrate(pde, st, dir * 1e-3, 400);
      CHECK_FALSE(r.aborted);
      CHECK(r.states.size() == 401);
      CHECK(r.maxDrift < 1e-8);
      CHECK(std::abs(r.states.back().t - dir * 0.4) < 1e-12);
    }
  }
}

TEST_CASE("RK4 convergence") {
  const Pde& pde = example_pde();
  const CharStrip st = start_at(pde, 0.1);
  std::vector<double> drift, endQ;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    const StripResult r = strip_integrate(pde, st, dt, static_cast<int>(std::lround(0.4 / dt)));
    drift.push_back(r.maxDrift);
    endQ.push_back(r.states.back().q);
  }
  // State error: Richardson ratios of successive differences.
  for (int k = 0; k + 2 < 4; ++k) {
    const double ratio = std::abs(endQ[k] - endQ[k + 1]) / std::abs(endQ[k + 1] - endQ[k + 2]);
    CHECK(ratio > 14);
    CHECK(ratio < 18);
  }
  // The invariant drifts at least as fast as fourth order allows.
  for (int k = 0; k + 1 < 4; ++k) CHECK(drift[k] / drift[k + 1] > 14);
}

TEST_CASE("strip tangent is the derivative across initial points") {
  const Pde& pde = example_pde();
  const double x0 = 0.17, e = 1e-5;
  const StripResult mid = strip_integrate(pde, start_at(pde, x0), 1e-3, 300);
  const StripResult up = strip_integrate(pde, start_at(pde, x0 + e), 1e-3, 300);
  const StripResult dn = strip_integrate(pde, start_at(pde, x0 - e), 1e-3, 300);
  CHECK(std::abs(mid.states[0].ds[4] - (compatibility_solve(pde, x0 + e).h - compatibility_solve(pde, x0 - e).h) / (2 * e)) < 1e-8);
  for (std::size_t n : {0u, 100u, 300u}) {
    const CharStrip &m = mid.states[n], &u = up.states[n], &d = dn.states[n];
    const State5 fd{(u.x - d.x) / (2 * e), (u.y - d.y) / (2 * e), (u.z - d.z) / (2 * e), (u.p - d.p) / (2 * e),
                    (u.q - d.q) / (2 * e)};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(m.ds[i] - fd[i]) < 1e-7);
    // The strip condition dz = p dx + q dy holds across strips as well.
    CHECK(std::abs(m.ds[2] - (m.p * m.ds[0] + m.q * m.ds[1])) < 1e-12);
    const auto H = strip_hessian(pde, m);
    REQUIRE(H.has_value());
    CHECK(std::abs((*H)[1] - (*H)[2]) < 1e-12);
  }
  const auto H0 = strip_hessian(pde, start_at(pde, 0.0));
  REQUIRE(H0.has_value());
  CHECK(std::abs((*H0)[0] + 1) < 1e-14);
  CHECK(std::abs((*H0)[1] - 2) < 1e-14);
  CHECK(std::abs((*H0)[3]) < 1e-14);
}

TEST_CASE("transversality abort") {
  PdeProblem prob;
  prob.F = "p - x";
  const Pde pde(prob);
  const StripResult r = strip_integrate(pde, {}, 1e-3, 10);
  CHECK(r.aborted);
  CHECK(r.states.size() == 1);
  CHECK_THROWS_AS(strip_integrate(pde, {}, 1e-3, -1), InputError);
}

TEST_CASE("other small circles are isoclinic too") {
  for (double c : {0.3, 0.5, 0.9}) {
    const Pde pde(small_circle_problem(c));
    const VerificationReport r = verify_reconstruction(reconstruct_surface(pde), pde);
    CHECK(r.b1Pass());
    CHECK(r.driftPass());
    CHECK(r.maxIsoclinicResidual < 1e-6);
  }
}

TEST_CASE("reconstructed surface") {
  const Pde& pde = example_pde();
  const ReconstructedSurface& s = example_surface();
  CHECK(s.nCurves == 41);
  CHECK(s.nSteps == 400);
  CHECK(s.samples.size() == 41u * 801u);
  CHECK(s.maxDrift < 1e-8);
  for (int i = 0; i < s.nCurves; ++i) {
    const SurfaceSample& a = s.at(i, 0);
    CHECK(a.curve == i);
    CHECK(a.step == 0);
    CHECK(std::abs(a.y) < 1e-15);
    CHECK(std::abs(a.phi + a.x * a.x / 2) < 1e-15);
    CHECK(std::abs(a.phi_x + a.x) < 1e-15);
    CHECK(std::abs(pde.F(a.x, a.y, a.phi_x, a.phi_y)) < 1e-12);
  }
  for (const SurfaceSample& a : s.samples) {
    const Jet psi = pde.psi_jet({a.x, a.y}, 1);
    const double px = a.phi_x, py = a.phi_y, sx = psi.dx(), sy = psi.dy();
    const double W = (1 + px * px + py * py) * (1 + sx * sx + sy * sy) - (px * sx + py * sy) * (px * sx + py * sy);
    const double b1 = (1 - (px * sy - py * sx)) / std::sqrt(W);
    CHECK(std::abs(b1 - pde.problem().c) < 1e-12);
  }

  ReconstructOptions bad;
  bad.nCurves = 3;
  CHECK_THROWS_AS(reconstruct_surface(pde, bad), InputError);
}

TEST_CASE("lattice derivatives recover smooth fields") {
  // Cross-curve spacing is 0.02, so the fourth-order stencil leaves ~1e-7.
  const ReconstructedSurface& s = example_surface();
  const int i = 20, j = 100;
  const SurfaceSample& a = s.at(i, j);
  const Eigen::Vector2d g = lattice_gradient(s, i, j, [](const SurfaceSample& b) { return b.x * b.x * b.y + b.y; });
  CHECK(std::abs(g[0] - 2 * a.x * a.y) < 1e-6);
  CHECK(std::abs(g[1] - (a.x * a.x + 1)) < 1e-6);
  const Eigen::Vector2d gz = lattice_gradient(s, i, j, [](const SurfaceSample& b) { return b.phi; });
  CHECK(std::abs(gz[0] - a.phi_x) < 1e-6);
  CHECK(std::abs(gz[1] - a.phi_y) < 1e-6);
  CHECK_THROWS_AS(lattice_gradient(s, 1, 0, [](const SurfaceSample& b) { return b.x; }), InputError);
  CHECK_THROWS_AS(lattice_gradient(s, 20, 399, [](const SurfaceSample& b) { return b.x; }), InputError);
}

TEST_CASE("verification of the reconstruction") {
  const VerificationReport r = verify_reconstruction(example_surface(), example_pde());
  CHECK(r.driftPass());
  CHECK(r.b1Pass());
  CHECK(r.maxFResidual < 1e-12);
  CHECK(r.circlePass());
  CHECK(r.secondDerivativePass());
  CHECK(std::abs(r.phi_xy - 2) < 1e-12);
  CHECK(std::abs(r.phi_yy) < 1e-12);
  CHECK(r.maxHessianAsymmetry < 1e-10);
  CHECK(r.isoclinicPass());
  CHECK(r.maxIsoclinicResidual < 1e-12);
  CHECK(r.isoclinicSamples == r.sampleCount);
  // Lattice differences agree with the tangent route to their own accuracy.
  CHECK(std::abs(r.phi_xyLattice - 2) < 1e-5);
  CHECK(std::abs(r.phi_yxLattice - 2) < 1e-5);
  CHECK(std::abs(r.phi_yyLattice) < 1e-5);
  CHECK(r.maxIsoclinicLattice < 1e-5);
  // Closed-formula relabeling of the Klein first factor at the origin.
  const double h = std::sqrt(0.5);
  CHECK(std::abs(r.gamma1Origin[0] - h) < 1e-12);
  CHECK(std::abs(r.gamma1Origin[1]) < 1e-12);
  CHECK(std::abs(r.gamma1Origin[2] - h) < 1e-12);
  CHECK(std::abs(r.gamma1OriginKlein[0] - h) < 1e-12);
  CHECK(std::abs(r.gamma1OriginKlein[1] + h) < 1e-12);
  CHECK(std::abs(r.gamma1OriginKlein[2]) < 1e-12);
  const Vec3 dx(std::sqrt(2.0), h, -std::sqrt(2.0)), dy(0, -h, 0);
  CHECK((r.gamma1OriginDx - dx).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((r.gamma1OriginDy - dy).cwiseAbs().maxCoeff() < 1e-4);
}
