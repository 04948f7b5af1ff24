#include "gmap4/characteristics.hpp"

#include <cmath>
#include <string>

namespace gmap4 {

namespace {

constexpr double kTransversality = 1e-6;
constexpr double kNewtonTol = 1e-12;

double newton_h(const Pde& pde, double x, double seed) {
  const double p = pde.p0(x);
  double h = seed;
  for (int it = 0; it < 60; ++it) {
    const FirstJet<4> f = pde.F_jet(x, 0.0, p, h);
    const double fq = f.grad[3];
    if (!std::isfinite(f.value) || std::abs(fq) < 1e-14) break;
    const double step = f.value / fq;
    h -= step;
    if (!std::isfinite(h)) break;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(h))) {
      if (std::abs(pde.F(x, 0.0, p, h)) < kNewtonTol) return h;
    }
  }
  const double res = std::isfinite(h) ? std::abs(pde.F(x, 0.0, p, h)) : INFINITY;
  if (res < kNewtonTol) return h;
  throw NumericalError("compatibility Newton iteration did not converge at x = " + std::to_string(x));
}

State5 to_state(const CharStrip& s) { return {s.x, s.y, s.z, s.p, s.q}; }

State5 axpy(const State5& a, double h, const State5& k) {
  State5 r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] + h * k[i];
  return r;
}

// Fourth-order central difference weights for offsets -2..2.
double d4(double fm2, double fm1, double fp1, double fp2, double h) {
  return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
}

}  // namespace

PdeProblem small_circle_problem(double c) {
  if (!(c > 0 && c < 1)) throw InputError("c must lie in (0, 1)");
  PdeProblem p;
  p.c = c;
  p.initialQSeed = -std::sqrt(1 / (c * c) - 1);
  return p;
}

Pde::Pde(const PdeProblem& problem) : problem_(problem) {
  ParamTable params = problem.params;
  params["c"] = problem.c;
  F_ = parse_expression(problem.F, {"x", "y", "p", "q"});
  phi0_ = parse_expression(problem.initialCurve, {"x"});
  p0_ = parse_expression(problem.initialP, {"x"});
  psi_ = parse_expression(problem.psi, {"x", "y"});
  Fp_ = bind_parameters(F_, params);
  phi0p_ = bind_parameters(phi0_, params);
  p0p_ = bind_parameters(p0_, params);
  psip_ = bind_parameters(psi_, params);
}

double Pde::F(double x, double y, double p, double q) const {
  const std::array<double, 4> v{x, y, p, q};
  return evaluate(F_, v, Fp_);
}

FirstJet<4> Pde::F_jet(double x, double y, double p, double q) const {
  using J = FirstJet<4>;
  const std::array<J, 4> v{J::variable(0, x), J::variable(1, y), J::variable(2, p), J::variable(3, q)};
  return evaluate<J>(F_, v, Fp_, [](double c) { return J::constant(c); });
}

double Pde::phi0(double x) const {
  const std::array<double, 1> v{x};
  return evaluate(phi0_, v, phi0p_);
}

double Pde::p0(double x) const {
  const std::array<double, 1> v{x};
  return evaluate(p0_, v, p0p_);
}

SecondJet<4> Pde::F_hessian(double x, double y, double p, double q) const {
  using J = SecondJet<4>;
  const std::array<J, 4> v{J::variable(0, x), J::variable(1, y), J::variable(2, p), J::variable(3, q)};
  return evaluate<J>(F_, v, Fp_, [](double c) { return J::constant(c); });
}

double Pde::phi0_prime(double x) const {
  using J = FirstJet<1>;
  const std::array<J, 1> v{J::variable(0, x)};
  return evaluate<J>(phi0_, v, phi0p_, [](double c) { return J::constant(c); }).grad[0];
}

double Pde::p0_prime(double x) const {
  using J = FirstJet<1>;
  const std::array<J, 1> v{J::variable(0, x)};
  return evaluate<J>(p0_, v, p0p_, [](double c) { return J::constant(c); }).grad[0];
}

Jet Pde::psi_jet(Point2 at, int order) const {
  const std::array<Jet, 2> v{Jet::variable(Axis::x, at, order), Jet::variable(Axis::y, at, order)};
  return evaluate<Jet>(psi_, v, psip_, [order](double c) { return Jet::constant(c, order); });
}

State5 characteristic_field(const Pde& pde, const State5& s) {
  const FirstJet<4> f = pde.F_jet(s[0], s[1], s[3], s[4]);
  const double Fx = f.grad[0], Fy = f.grad[1], Fp = f.grad[2], Fq = f.grad[3];
  return {Fp, Fq, s[3] * Fp + s[4] * Fq, -Fx, -Fy};
}

State5 characteristic_field_tangent(const Pde& pde, const State5& s, const State5& v) {
  const SecondJet<4> f = pde.F_hessian(s[0], s[1], s[3], s[4]);
  const std::array<double, 4> w{v[0], v[1], v[3], v[4]};
  std::array<double, 4> Hw{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Hw[i] += f.hess[i][j] * w[j];
  const double Fp = f.grad[2], Fq = f.grad[3];
  return {Hw[2], Hw[3], v[3] * Fp + s[3] * Hw[2] + v[4] * Fq + s[4] * Hw[3], -Hw[0], -Hw[1]};
}

CharStrip strip_start(const Pde& pde, double x0, double h) {
  const double p = pde.p0(x0), dp = pde.p0_prime(x0);
  const FirstJet<4> f = pde.F_jet(x0, 0.0, p, h);
  if (std::abs(f.grad[3]) < kTransversality) {
    throw NumericalError("initial point x0 = " + std::to_string(x0) + " is characteristic");
  }
  const double dh = -(f.grad[0] + f.grad[2] * dp) / f.grad[3];
  return {0.0, x0, 0.0, pde.phi0(x0), p, h, {1.0, 0.0, pde.phi0_prime(x0), dp, dh}};
}

std::optional<std::array<double, 4>> strip_hessian(const Pde& pde, const CharStrip& s) {
  const State5 f = characteristic_field(pde, to_state(s));
  Mat2 J, P;
  J << f[0], s.ds[0], f[1], s.ds[1];
  P << f[3], s.ds[3], f[4], s.ds[4];
  const double scale = std::max(J.cwiseAbs().maxCoeff(), 1e-300);
  if (std::abs(J.determinant()) <= 1e-12 * scale * scale) return std::nullopt;
  const Mat2 H = P * J.inverse();  // rows: grad p, grad q
  return std::array<double, 4>{H(0, 0), H(0, 1), H(1, 0), H(1, 1)};
}

CompatibilityResult compatibility_solve(const Pde& pde, double x, std::optional<double> seed) {
  const double reference = newton_h(pde, 0.0, pde.problem().initialQSeed);
  CompatibilityResult r;
  double h = newton_h(pde, 0.0, seed.value_or(pde.problem().initialQSeed));
  r.branchContinuous = std::abs(h - reference) <= 1e-9 * std::max(1.0, std::abs(reference));
  const int n = static_cast<int>(std::ceil(std::abs(x) / 0.02));
  for (int k = 1; k <= n; ++k) h = newton_h(pde, x * k / n, h);
  r.h = h;
  r.residual = std::abs(pde.F(x, 0.0, pde.p0(x), h));
  return r;
}

StripResult strip_integrate(const Pde& pde, const CharStrip& start, double dt, int steps) {
  if (steps < 0) throw InputError("negative step count");
  StripResult out;
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  out.states.push_back(start);
  const double F0 = pde.F(start.x, start.y, start.p, start.q);
  State5 s = to_state(start), v = start.ds;
  for (int n = 0; n < steps; ++n) {
    if (std::abs(pde.F_jet(s[0], s[1], s[3], s[4]).grad[3]) < kTransversality) {
      out.aborted = true;
      return out;
    }
    const State5 k1 = characteristic_field(pde, s), l1 = characteristic_field_tangent(pde, s, v);
    const State5 s2 = axpy(s, dt / 2, k1), v2 = axpy(v, dt / 2, l1);
    const State5 k2 = characteristic_field(pde, s2), l2 = characteristic_field_tangent(pde, s2, v2);
    const State5 s3 = axpy(s, dt / 2, k2), v3 = axpy(v, dt / 2, l2);
    const State5 k3 = characteristic_field(pde, s3), l3 = characteristic_field_tangent(pde, s3, v3);
    const State5 s4 = axpy(s, dt, k3), v4 = axpy(v, dt, l3);
    const State5 k4 = characteristic_field(pde, s4), l4 = characteristic_field_tangent(pde, s4, v4);
    for (int i = 0; i < 5; ++i) {
      s[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      v[i] += dt / 6 * (l1[i] + 2 * l2[i] + 2 * l3[i] + l4[i]);
    }
    for (int i = 0; i < 5; ++i)
      if (!std::isfinite(s[i]) || !std::isfinite(v[i])) throw NumericalError("characteristic strip left the finite range");
    out.states.push_back({start.t + (n + 1) * dt, s[0], s[1], s[2], s[3], s[4], v});
    out.maxDrift = std::max(out.maxDrift, std::abs(pde.F(s[0], s[1], s[3], s[4]) - F0));
  }
  if (std::abs(pde.F_jet(s[0], s[1], s[3], s[4]).grad[3]) < kTransversality) out.aborted = true;
  return out;
}

ReconstructedSurface reconstruct_surface(const Pde& pde, const ReconstructOptions& opt) {
  if (opt.nCurves < 5) throw InputError("need at least 5 initial points");
  if (!(opt.dt > 0) || !(opt.tMax > 0) || !(opt.x0Max > opt.x0Min)) throw InputError("invalid reconstruction ranges");
  ReconstructedSurface out;
  out.nCurves = opt.nCurves;
  out.nSteps = static_cast<int>(std::lround(opt.tMax / opt.dt));
  out.dt = opt.dt;
  out.dx0 = (opt.x0Max - opt.x0Min) / (opt.nCurves - 1);
  out.samples.resize(static_cast<std::size_t>(opt.nCurves * (2 * out.nSteps + 1)));

  for (int i = 0; i < opt.nCurves; ++i) {
    const double x0 = opt.x0Min + out.dx0 * i;
    const CompatibilityResult h = compatibility_solve(pde, x0);
    out.h.push_back(h.h);
    const CharStrip start = strip_start(pde, x0, h.h);
    for (double dir : {1.0, -1.0}) {
      const StripResult strip = strip_integrate(pde, start, dir * opt.dt, out.nSteps);
      if (strip.aborted) {
        throw NumericalError("strip from x0 = " + std::to_string(x0) + " reached a characteristic point");
      }
      out.maxDrift = std::max(out.maxDrift, strip.maxDrift);
      for (int n = 0; n <= out.nSteps; ++n) {
        const CharStrip& c = strip.states[static_cast<std::size_t>(n)];
        const int step = dir > 0 ? n : -n;
        SurfaceSample a{c.x, c.y, c.z, c.p, c.q};
        a.curve = i;
        a.step = step;
        if (const auto H = strip_hessian(pde, c)) {
          a.phi_xx = (*H)[0];
          a.phi_xy = (*H)[1];
          a.phi_yx = (*H)[2];
          a.phi_yy = (*H)[3];
          a.hessianValid = true;
        }
        out.samples[static_cast<std::size_t>(i * (2 * out.nSteps + 1) + step + out.nSteps)] = a;
      }
    }
  }
  return out;
}

Eigen::Vector2d lattice_gradient(const ReconstructedSurface& s, int i, int j,
                                 const std::function<double(const SurfaceSample&)>& f) {
  if (i < 2 || i > s.nCurves - 3 || j < -s.nSteps + 2 || j > s.nSteps - 2) {
    throw InputError("lattice stencil leaves the sample set");
  }
  auto along_t = [&](const std::function<double(const SurfaceSample&)>& g) {
    return d4(g(s.at(i, j - 2)), g(s.at(i, j - 1)), g(s.at(i, j + 1)), g(s.at(i, j + 2)), s.dt);
  };
  auto along_s = [&](const std::function<double(const SurfaceSample&)>& g) {
    return d4(g(s.at(i - 2, j)), g(s.at(i - 1, j)), g(s.at(i + 1, j)), g(s.at(i + 2, j)), s.dx0);
  };
  auto X = [](const SurfaceSample& a) { return a.x; };
  auto Y = [](const SurfaceSample& a) { return a.y; };
  Mat2 J;
  J << along_t(X), along_s(X), along_t(Y), along_s(Y);
  const Eigen::RowVector2d ft(along_t(f), along_s(f));
  return (ft * J.inverse()).transpose();
}

std::array<double, 4> lattice_hessian(const ReconstructedSurface& s, int i, int j) {
  const Eigen::Vector2d gp = lattice_gradient(s, i, j, [](const SurfaceSample& a) { return a.phi_x; });
  const Eigen::Vector2d gq = lattice_gradient(s, i, j, [](const SurfaceSample& a) { return a.phi_y; });
  return {gp[0], gp[1], gq[0], gq[1]};
}

VerificationReport verify_reconstruction(const ReconstructedSurface& s, const Pde& pde, const VerifyTolerances& tol) {
  if (s.samples.size() < 100) throw InputError("verification needs at least 100 samples");
  VerificationReport r;
  r.tol = tol;
  r.sampleCount = s.samples.size();
  r.maxDrift = s.maxDrift;

  std::vector<Vec3> g1, g2;
  g1.reserve(s.samples.size());
  g2.reserve(s.samples.size());
  for (const SurfaceSample& a : s.samples) {
    const Jet psi = pde.psi_jet({a.x, a.y}, 1);
    const MongeFrame mf = monge_frame(
        SurfaceJets{Jet::from_derivatives(1, std::array{a.phi, a.phi_x, a.phi_y}), psi, false});
    const KleinPoint k = gauss_map(mf).klein;
    g1.push_back(k.a);
    g2.push_back(k.b);
    r.maxB1Deviation = std::max(r.maxB1Deviation, std::abs(k.b[0] - pde.problem().c));
    r.maxFResidual = std::max(r.maxFResidual, std::abs(pde.F(a.x, a.y, a.phi_x, a.phi_y)));
  }
  r.circleResidualGamma1 = great_circle_fit(g1).residual;
  r.circleResidualGamma2 = great_circle_fit(g2).residual;

  int origin = -1;
  for (int i = 0; i < s.nCurves; ++i)
    if (std::abs(s.at(i, 0).x) < 1e-12) origin = i;
  if (origin < 2 || origin > s.nCurves - 3 || s.nSteps < 3) {
    throw InputError("insufficient samples near the origin");
  }
  const std::size_t o = static_cast<std::size_t>(origin * (2 * s.nSteps + 1) + s.nSteps);
  r.gamma1OriginKlein = g1[o];
  r.gamma1Origin = Vec3(g1[o][0], g1[o][2], -g1[o][1]);
  r.phi_xx = pde.p0_prime(0.0);
  const SurfaceSample& o0 = s.at(origin, 0);
  if (!o0.hessianValid) throw NumericalError("no second derivatives at the origin");
  r.phi_xy = o0.phi_xy;
  r.phi_yx = o0.phi_yx;
  r.phi_yy = o0.phi_yy;
  const auto H0 = lattice_hessian(s, origin, 0);
  r.phi_xxLattice = H0[0];
  r.phi_xyLattice = H0[1];
  r.phi_yxLattice = H0[2];
  r.phi_yyLattice = H0[3];
  // Derivatives of the closed-formula Gamma1 along the lattice.
  const int nRow = 2 * s.nSteps + 1;
  for (int comp = 0; comp < 3; ++comp) {
    const auto field = [&, comp](const SurfaceSample& a) {
      const Vec3& v = g1[static_cast<std::size_t>(a.curve * nRow + a.step + s.nSteps)];
      const Vec3 cf(v[0], v[2], -v[1]);
      return cf[comp];
    };
    const Eigen::Vector2d g = lattice_gradient(s, origin, 0, field);
    r.gamma1OriginDx[comp] = g[0];
    r.gamma1OriginDy[comp] = g[1];
  }

  auto k_minus_kappa = [&](const SurfaceSample& a, double xx, double xy, double yy) {
    const Jet phi = Jet::from_derivatives(2, std::array{a.phi, a.phi_x, a.phi_y, xx, xy, yy});
    const CurvatureReport c = curvature_report(SurfaceJets{phi, pde.psi_jet({a.x, a.y}, 2), false});
    return std::abs(c.K - c.kappa);
  };
  for (const SurfaceSample& a : s.samples) {
    if (!a.hessianValid) continue;
    r.maxHessianAsymmetry = std::max(r.maxHessianAsymmetry, std::abs(a.phi_xy - a.phi_yx));
    r.maxIsoclinicResidual =
        std::max(r.maxIsoclinicResidual, k_minus_kappa(a, a.phi_xx, 0.5 * (a.phi_xy + a.phi_yx), a.phi_yy));
    ++r.isoclinicSamples;
  }
  // Lattice cross-check on interior points, every 10th step.
  for (int i = 2; i <= s.nCurves - 3; ++i)
    for (int j = -s.nSteps + 2; j <= s.nSteps - 2; j += 10) {
      const auto H = lattice_hessian(s, i, j);
      r.maxIsoclinicLattice = std::max(r.maxIsoclinicLattice, k_minus_kappa(s.at(i, j), H[0], 0.5 * (H[1] + H[2]), H[3]));
      ++r.latticeSamples;
    }
  return r;
}

}  // namespace gmap4
