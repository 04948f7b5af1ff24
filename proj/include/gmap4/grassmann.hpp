/**
 * @file grassmann.hpp
 * @brief Plücker and Klein coordinates on G(2,4), the Gauss map, isoclinic
 *        planes and the SO(4) action lifted to wedge coordinates.
 *
 * Plücker order is (p12, p13, p14, p34, p42, p23). Klein coordinates are
 * a = (p12+p34, p13+p42, p14+p23), b = (p12-p34, p13-p42, p14-p23), and the
 * Gauss map components are Gamma1 = a, Gamma2 = b.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gmap4/frames.hpp"

namespace gmap4 {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct PluckerPoint {
  Vec6 p = Vec6::Zero();
};

struct KleinPoint {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

/// Unnormalised wedge product in Plücker order.
Vec6 wedge(const Vec4& v1, const Vec4& v2);
PluckerPoint plucker_from_pair(const Vec4& v1, const Vec4& v2);

double sphere_relation(const PluckerPoint& P);  // sum p_ij^2 - 1
double klein_relation(const PluckerPoint& P);   // p12 p34 + p13 p42 + p14 p23

/// Throws InputError unless both vectors are unit within tol; never
/// renormalises.
KleinPoint klein_from_plucker(const PluckerPoint& P, double tol = 1e-10);
PluckerPoint plucker_from_klein(const KleinPoint& k);

struct GaussSample {
  PluckerPoint plucker;
  KleinPoint klein;
};

GaussSample gauss_map(const MongeFrame& mf);
GaussSample gauss_map_at(const SurfaceDef& def, Point2 p);

/// Components as printed by the closed Monge-form formulas, which relabel
/// the Klein axes: closed Gamma1 = (a1, a3, -a2), closed Gamma2 = (b1, -b3, -b2).
Vec3 closed_form_gamma1(const KleinPoint& k);
Vec3 closed_form_gamma2(const KleinPoint& k);
/// The same closed formulas evaluated directly from first derivatives.
Vec3 closed_form_gamma1(double px, double py, double sx, double sy);
Vec3 closed_form_gamma2(double px, double py, double sx, double sy);

struct BlaschkeResult {
  double t1 = 0, t2 = 0;  // (dxG x dyG) . G for each factor
  double K = 0, kappa = 0, sqrtW = 0;
  double residual1 = 0;  // | |t1| - |K+kappa| sqrtW |
  double residual2 = 0;  // | |t2| - |K-kappa| sqrtW |
};

/// Central differences of the Klein vectors with step h.
BlaschkeResult blaschke_check(const SurfaceDef& def, Point2 p, double h = 1e-4);

/// Orthonormal oriented basis (u, v) with u ^ v = P.
std::pair<Vec4, Vec4> plane_basis(const PluckerPoint& P);
/// Cosines of the principal angles, descending.
Eigen::Vector2d principal_cosines(const PluckerPoint& P1, const PluckerPoint& P2);
bool planes_isoclinic(const PluckerPoint& P1, const PluckerPoint& P2, double tol = 1e-9);

/// span{(1, 0, alpha1, alpha2), (0, 1, beta1, beta2)}.
PluckerPoint graph_plane(const Eigen::Vector2d& alpha, const Eigen::Vector2d& beta);
/// |alpha|^2 = |beta|^2 and alpha . beta = 0 within tol.
bool isoclinic_to_base(const Eigen::Vector2d& alpha, const Eigen::Vector2d& beta, double tol = 1e-9);

class Rotation4 {
 public:
  /// Throws InputError unless m m^T = I within tol.
  explicit Rotation4(const Mat4& m, double tol = 1e-10);
  static Rotation4 identity() { return Rotation4(Mat4::Identity()); }

  const Mat4& matrix() const noexcept { return m_; }
  double det() const noexcept { return det_; }
  Rotation4 transpose() const { return Rotation4(m_.transpose()); }
  Rotation4 operator*(const Rotation4& o) const { return Rotation4(m_ * o.m_); }
  Vec4 operator*(const Vec4& v) const { return m_ * v; }

 private:
  Mat4 m_;
  double det_;
};

struct Lift6 {
  Mat6 m = Mat6::Identity();
  PluckerPoint operator*(const PluckerPoint& P) const { return {m * P.p}; }
};

/// Columns are wedges of column pairs of A in Plücker order. The sampled
/// equivariance postcondition is checked on every call.
Lift6 lift_so4(const Rotation4& A);

/// Swap of the third and fourth coordinates.
Rotation4 swap_map_C();

/// The matrix A-hat with lift(A-hat) (0,1,0,0,-1,0) = (alpha, alpha). Near
/// the poles alpha1^2 + alpha2^2 < 1e-12 a fixed quarter turn in the
/// (x3, x4) plane moves alpha off the pole first.
Rotation4 rotation_from_alpha(const Vec3& alpha);
/// The printed matrix itself; requires alpha1^2 + alpha2^2 > 0.
Mat4 alpha_hat_matrix(const Vec3& alpha);

/// A rotation taking plane P1 to P2 (orientation preserved).
Rotation4 rotation_between_planes(const PluckerPoint& P1, const PluckerPoint& P2);

struct GreatCircleFit {
  Vec3 alpha = Vec3::UnitZ();
  double residual = 0;  // max |alpha . s|
  bool degenerate = false;
};

GreatCircleFit great_circle_fit(std::span<const Vec3> samples);

}  // namespace gmap4
