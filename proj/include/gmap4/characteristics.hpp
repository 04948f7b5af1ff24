/**
 * @file characteristics.hpp
 * @brief Method of characteristics for F(x, y, p, q) = 0 with p = phi_x,
 *        q = phi_y, used to build an isoclinic surface whose second Gauss
 *        component lies on the small circle b1 = c.
 */
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmap4/expr.hpp"
#include "gmap4/grassmann.hpp"

namespace gmap4 {

struct PdeProblem {
  std::string F = "1 - y*p + x*q - c*sqrt(1 + p^2 + q^2 + x^2 + y^2 + (y*p - x*q)^2)";
  double c = 0.70710678118654752;
  std::string initialCurve = "-x^2/2";  // phi(x, 0)
  std::string initialP = "-x";          // phi_x(x, 0)
  std::string psi = "(x^2 + y^2)/2";
  double initialQSeed = -1.0;  // Newton seed for phi_y(0, 0)
  ParamTable params;           // extra parameters; c is added automatically
};

/// The small-circle problem for a given c in (0, 1), seeded on the negative
/// root -sqrt(1/c^2 - 1).
PdeProblem small_circle_problem(double c);

using State5 = std::array<double, 5>;

/// (x, y, z, p, q) with z = phi, plus the derivative ds of that state with
/// respect to the initial-curve parameter (variational equations).
struct CharStrip {
  double t = 0, x = 0, y = 0, z = 0, p = 0, q = 0;
  State5 ds{};
};

class Pde {
 public:
  explicit Pde(const PdeProblem& problem);

  const PdeProblem& problem() const noexcept { return problem_; }
  double F(double x, double y, double p, double q) const;
  /// F and (F_x, F_y, F_p, F_q).
  FirstJet<4> F_jet(double x, double y, double p, double q) const;
  double phi0(double x) const;
  double p0(double x) const;
  /// F with first and second derivatives in (x, y, p, q).
  SecondJet<4> F_hessian(double x, double y, double p, double q) const;
  /// d/dx of phi0 and p0, exact.
  double phi0_prime(double x) const;
  double p0_prime(double x) const;
  /// Jets of psi at a point.
  Jet psi_jet(Point2 at, int order) const;

 private:
  PdeProblem problem_;
  Expr F_, phi0_, p0_, psi_;
  std::vector<double> Fp_, phi0p_, p0p_, psip_;
};

/// (dx, dy, dz, dp, dq)/dt = (F_p, F_q, p F_p + q F_q, -F_x, -F_y).
State5 characteristic_field(const Pde& pde, const State5& s);
/// Derivative of the field along a tangent v at s.
State5 characteristic_field_tangent(const Pde& pde, const State5& s, const State5& v);

/// Strip start at (x0, 0) with its tangent (1, 0, phi0', p0', h'), where h'
/// follows from differentiating F(x, 0, p0(x), h(x)) = 0.
CharStrip strip_start(const Pde& pde, double x0, double h);

struct CompatibilityResult {
  double h = 0;
  double residual = 0;
  /// False when the seed lands on a different branch at x = 0 than the
  /// problem's own seed.
  bool branchContinuous = true;
};

/// Solves F(x, 0, p0(x), h) = 0 by Newton, continuing from x = 0 in steps of
/// at most 0.02.
CompatibilityResult compatibility_solve(const Pde& pde, double x, std::optional<double> seed = std::nullopt);

struct StripResult {
  std::vector<CharStrip> states;  // states[0] is the start
  bool aborted = false;           // |F_q| fell below 1e-6
  double maxDrift = 0;            // max |F - F(start)|
};

/// Classical RK4 on the state and its tangent; dt may be negative.
StripResult strip_integrate(const Pde& pde, const CharStrip& start, double dt, int steps);

struct SurfaceSample {
  double x = 0, y = 0, phi = 0, phi_x = 0, phi_y = 0;
  /// Second derivatives from the tangent: phi_xy comes from p, phi_yx from q.
  double phi_xx = 0, phi_xy = 0, phi_yx = 0, phi_yy = 0;
  bool hessianValid = false;  // the (t, x0) -> (x, y) Jacobian is invertible
  int curve = 0;  // index of the initial point
  int step = 0;   // signed step count along the strip
};

/// Second derivatives of phi at a strip state; nullopt when the projection
/// to (x, y) is singular.
std::optional<std::array<double, 4>> strip_hessian(const Pde& pde, const CharStrip& s);

struct ReconstructOptions {
  double x0Min = -0.4, x0Max = 0.4;
  int nCurves = 41;
  double tMax = 0.4;  // integrate over [-tMax, tMax]
  double dt = 1e-3;
};

/// Samples on the (curve, step) lattice: sample(curve, step) is at
/// samples[curve * (2 nSteps + 1) + step + nSteps].
struct ReconstructedSurface {
  std::vector<SurfaceSample> samples;
  int nCurves = 0;
  int nSteps = 0;  // per direction
  double dt = 0;
  double dx0 = 0;
  double maxDrift = 0;
  std::vector<double> h;  // phi_y on the initial curve

  const SurfaceSample& at(int curve, int step) const {
    return samples[static_cast<std::size_t>(curve * (2 * nSteps + 1) + step + nSteps)];
  }
};

/// Throws NumericalError naming x0 if a strip hits a characteristic point.
ReconstructedSurface reconstruct_surface(const Pde& pde, const ReconstructOptions& opt = {});

struct VerifyTolerances {
  double b1 = 1e-6;
  double circle = 0.01;  // residuals must exceed this
  double gammaOrigin = 1e-6;
  double secondDerivative = 1e-3;
  double isoclinic = 1e-4;
  double drift = 1e-8;
};

struct VerificationReport {
  std::size_t sampleCount = 0;
  double maxDrift = 0;
  double maxFResidual = 0;
  double maxB1Deviation = 0;
  double circleResidualGamma1 = 0, circleResidualGamma2 = 0;
  Vec3 gamma1Origin = Vec3::Zero();  // closed-formula relabeling
  Vec3 gamma1OriginKlein = Vec3::Zero();
  Vec3 gamma1OriginDx = Vec3::Zero(), gamma1OriginDy = Vec3::Zero();  // closed-formula relabeling
  double phi_xx = 0;                 // from the initial data
  double phi_xy = 0, phi_yx = 0, phi_yy = 0;  // variational
  double phi_xxLattice = 0, phi_xyLattice = 0, phi_yxLattice = 0, phi_yyLattice = 0;
  double maxIsoclinicResidual = 0;   // max |K - kappa| over samples with a valid Hessian
  std::size_t isoclinicSamples = 0;
  double maxIsoclinicLattice = 0;    // the same from lattice differences, interior samples
  std::size_t latticeSamples = 0;
  double maxHessianAsymmetry = 0;    // max |phi_xy - phi_yx|
  VerifyTolerances tol;

  bool b1Pass() const { return maxB1Deviation <= tol.b1; }
  bool driftPass() const { return maxDrift <= tol.drift; }
  bool circlePass() const { return circleResidualGamma1 > tol.circle && circleResidualGamma2 > tol.circle; }
  bool gammaOriginPass(const Vec3& expected) const { return (gamma1Origin - expected).cwiseAbs().maxCoeff() <= tol.gammaOrigin; }
  bool secondDerivativePass() const {
    return std::abs(phi_xx + 1) <= 1e-12 && std::abs(phi_xy - 2) <= tol.secondDerivative &&
           std::abs(phi_yy) <= tol.secondDerivative;
  }
  bool isoclinicPass() const { return isoclinicSamples > 0 && maxIsoclinicResidual < tol.isoclinic; }
};

/// Lattice derivatives of a sampled field at (curve, step): fourth-order
/// central differences in (t, x0), mapped to (x, y) through the inverse
/// Jacobian of (t, x0) -> (x, y).
Eigen::Vector2d lattice_gradient(const ReconstructedSurface& s, int curve, int step,
                                 const std::function<double(const SurfaceSample&)>& field);

/// Second derivatives (phi_xx, phi_xy from p, phi_yx from q, phi_yy) at a
/// lattice point.
std::array<double, 4> lattice_hessian(const ReconstructedSurface& s, int curve, int step);

VerificationReport verify_reconstruction(const ReconstructedSurface& s, const Pde& pde,
                                         const VerifyTolerances& tol = {});

}  // namespace gmap4
