/**
 * @file lagrangian.hpp
 * @brief Lagrangean tests and the construction of a rotation taking a surface
 *        with great-circle Gauss image to a Lagrangean one.
 *
 * Rotated surfaces are handled intrinsically: a placement R means the
 * surface R(x, y, phi, psi), and every check runs on rotated tangent vectors.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmap4/grassmann.hpp"

namespace gmap4 {

/// Constant 2-form on R^4 with coordinates (x, y, u, v).
struct SymplecticForm {
  Mat4 m = Mat4::Zero();
  std::string name;

  double operator()(const Vec4& v, const Vec4& w) const { return v.dot(m * w); }

  static SymplecticForm standard();  // dx^du + dy^dv
  static SymplecticForm omega1();    // dx^du - dy^dv
  static SymplecticForm omega2();    // dx^dv + dy^du
};

struct GridSpec {
  int nx = 15, ny = 15;
  Domain box;
  std::vector<Point2> points() const;
};

/// nx x ny grid over the domain with 5% trimmed from each side.
GridSpec default_grid(const SurfaceDef& def, int nx = 15, int ny = 15);

/// max |w(R T1, R T2)| / (|T1| |T2|) over the grid.
double symplectic_residual(const SurfaceDef& def, const SymplecticForm& form, const GridSpec& grid,
                           const std::optional<Rotation4>& rotation = std::nullopt);

/// max |phi_y - sign psi_x| over the grid.
double normal_form_residual(const SurfaceDef& def, const GridSpec& grid, int sign = +1);

enum class CircleFactor { none, gamma1, gamma2 };
enum class MatchedForm { none, standard, orientationReversed };

const char* to_string(CircleFactor f);
const char* to_string(MatchedForm f);

struct CongruenceReport {
  CircleFactor circleFactor = CircleFactor::none;
  Vec3 alpha = Vec3::Zero();
  double fitResidual = 0;
  double fitResidualGamma1 = 0, fitResidualGamma2 = 0;
  Vec3 alphaGamma1 = Vec3::Zero(), alphaGamma2 = Vec3::Zero();
  Rotation4 rotation = Rotation4::identity();
  double symplecticResidual = 0;
  double residualStandard = 0, residualReversed = 0;
  MatchedForm matchedForm = MatchedForm::none;
  double tolCircle = 0, tolSymp = 0;
  GridSpec grid;
};

/// placement, if given, is the rotation already applied to the surface; the
/// returned rotation acts after it.
CongruenceReport congruence_to_lagrangean(const SurfaceDef& def, const GridSpec& grid, double tolCircle = 1e-6,
                                          double tolSymp = 1e-8,
                                          const std::optional<Rotation4>& placement = std::nullopt);

/// Gauss-map samples of the placed surface over the grid.
std::vector<GaussSample> gauss_samples(const SurfaceDef& def, const GridSpec& grid,
                                       const std::optional<Rotation4>& placement = std::nullopt);

}  // namespace gmap4
