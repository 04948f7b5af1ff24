/**
 * @file frames.hpp
 * @brief Pointwise metric and curvature machinery for Monge surfaces
 *        (x, y, phi, psi) in R^4.
 */
#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gmap4/expr.hpp"

namespace gmap4 {

using Vec4 = Eigen::Vector4d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct MongeFrame {
  Vec4 T1, T2, N1, N2;
  double E = 0, F = 0, G = 0, W = 0;
  double Ehat = 0, Fhat = 0, Ghat = 0;
  SurfaceJets jets;
};

MongeFrame monge_frame(const SurfaceJets& jets);
MongeFrame monge_frame(const SurfaceDef& def, Point2 p);

/// standard: Gram-Schmidt of (T1, T2) and (N1, N2). swapped: (T2, T1) and
/// (N2, N1); swapping both pairs keeps the orientation, so kappa keeps its
/// sign.
enum class FrameOrder { standard, swapped };

struct AdaptedFrame {
  std::array<Vec4, 4> e;
  /// Columns are the (d/dx, d/dy) coordinates of e1 and e2.
  Mat2 tangentBasis;
  /// Rows express omega1, omega2 in (dx, dy); the inverse of tangentBasis.
  Mat2 coframe;
  FrameOrder order = FrameOrder::standard;
};

AdaptedFrame adapted_frame(const MongeFrame& mf, FrameOrder order = FrameOrder::standard);

struct SecondFormCoefficients {
  double a = 0, b = 0, c = 0;  // II1 = a u1^2 + 2b u1u2 + c u2^2
  double e = 0, f = 0, g = 0;  // II2
  AdaptedFrame frame;
};

/// Coefficients in an arbitrary orthonormal frame: tangentBasis gives e1, e2
/// in coordinates, n3 and n4 are the normal vectors.
SecondFormCoefficients second_form(const SurfaceJets& jets, const Mat2& tangentBasis, const Vec4& n3,
                                   const Vec4& n4);
SecondFormCoefficients second_form(const MongeFrame& mf, const AdaptedFrame& frame);
SecondFormCoefficients second_form(const SurfaceDef& def, Point2 p, FrameOrder order = FrameOrder::standard);

struct HessianInvariants {
  double Hphi = 0, Hpsi = 0, Q = 0, L = 0, M = 0, N = 0;
};

HessianInvariants hessian_invariants(const SurfaceJets& jets);

double delta_expanded(const SecondFormCoefficients& s);
double delta_resultant(const SecondFormCoefficients& s);

/// Relative bands. Curvature bands scale with the norm of the second
/// fundamental form, sqrt(a^2 + 2b^2 + c^2 + e^2 + 2f^2 + g^2), which does
/// not depend on the adapted frame; the rank band scales with the largest raw
/// second derivative of phi and psi.
struct ClassificationTolerances {
  double delta = 1e-9;  // x scale^4
  double kappa = 1e-8;  // x scale^2
  double k = 1e-8;      // x scale^2
  double rank = 1e-8;   // x scale
  double wong = 1e-8;   // x max(|K|, |kappa|, 1)
  double dual = 1e-9;   // relative agreement of the two routes
};

struct ResolvedTolerances {
  double scale = 0, rawScale = 0;
  double delta = 0, kappa = 0, k = 0, rank = 0, wong = 0;
};

enum class PointClass { hyperbolic, parabolic, elliptic };
enum class Inflection { none, real, flat, imaginary };

const char* to_string(PointClass c);
const char* to_string(Inflection i);

struct AsymptoticDirection {
  Vec2 dir;  // unit, in (omega1, omega2) coordinates
  Vec4 tangent;
};

struct IsoclinicDirection {
  int branch = +1;  // +1: K = kappa, -1: K = -kappa
  bool allDirections = false;
  Vec2 dir = Vec2::Zero();  // unit, in (omega1, omega2) coordinates
  Vec4 tangent = Vec4::Zero();
};

struct CurvatureReport {
  double K = 0, kappa = 0;
  std::array<double, 2> meanH{};
  double K1 = 0, K2 = 0;
  double Delta = 0;
  PointClass pointClass = PointClass::parabolic;
  Inflection inflection = Inflection::none;
  std::vector<AsymptoticDirection> asymptoticDirs;
  bool allAsymptotic = false;
  std::vector<IsoclinicDirection> isoclinicDirs;
  bool gaussSingular = false;

  // Second routes, kept for inspection.
  double KHessian = 0, kappaHessian = 0, DeltaResultant = 0;
  HessianInvariants hessian;
  Eigen::Vector2d gaussSingularValues;  // of [[pxx,sxx,pxy,sxy],[pxy,sxy,pyy,syy]]
  Eigen::Vector2d sffSingularValues;    // of [[a,b,c],[e,f,g]]
  Eigen::Vector2d sffPairSingularValues;  // of [[a,b,e,f],[b,c,f,g]]
  MongeFrame monge;
  SecondFormCoefficients sff;
  ResolvedTolerances tol;
};

ResolvedTolerances resolve(const ClassificationTolerances& tol, const SurfaceJets& jets,
                           const SecondFormCoefficients& sff);

CurvatureReport curvature_report(const SurfaceJets& jets, const ClassificationTolerances& tol = {},
                                 FrameOrder order = FrameOrder::standard);
CurvatureReport curvature_report(const SurfaceDef& def, Point2 p, const ClassificationTolerances& tol = {},
                                 FrameOrder order = FrameOrder::standard);

/// parallelAtBase rotates the Gram-Schmidt tangent and normal frames by
/// angles linear in (q - p) so that both connection forms vanish at p;
/// gramSchmidt uses the Gram-Schmidt frame at every stencil point.
enum class Gauge { parallelAtBase, gramSchmidt };

/// |d((a+-f) w1 + (b+-g) w2)| at p by central differences of the (dx, dy)
/// components. branch selects + or -.
double isoclinic_form_closedness(const SurfaceDef& def, Point2 p, double h = 1e-3, int branch = +1,
                                 Gauge gauge = Gauge::parallelAtBase);

struct DeltaDiagnostic {
  Vec2 gradient;
  Mat2 hessian;
  double hessianDet = 0;  // H_Delta
  double K = 0;
  double ratio = 0;  // H_Delta / K, NaN when K = 0
};

/// Central differences of the Delta field; reported, never asserted.
DeltaDiagnostic delta_hessian_diagnostic(const SurfaceDef& def, Point2 p, double h = 1e-3);

}  // namespace gmap4
