#include "gmap4/lagrangian.hpp"

#include <algorithm>
#include <cmath>

namespace gmap4 {

namespace {

SymplecticForm make_form(std::string name, std::initializer_list<std::array<int, 3>> terms) {
  SymplecticForm f;
  f.name = std::move(name);
  for (const auto& [i, j, s] : terms) {
    f.m(i, j) += s;
    f.m(j, i) -= s;
  }
  return f;
}

}  // namespace

SymplecticForm SymplecticForm::standard() { return make_form("standard", {{0, 2, 1}, {1, 3, 1}}); }
SymplecticForm SymplecticForm::omega1() { return make_form("omega1", {{0, 2, 1}, {1, 3, -1}}); }
SymplecticForm SymplecticForm::omega2() { return make_form("omega2", {{0, 3, 1}, {1, 2, 1}}); }

std::vector<Point2> GridSpec::points() const {
  if (nx < 1 || ny < 1) throw InputError("grid needs at least one point per axis");
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? 0.5 * (box.x0 + box.x1) : box.x0 + (box.x1 - box.x0) * i / (nx - 1);
      const double y = ny == 1 ? 0.5 * (box.y0 + box.y1) : box.y0 + (box.y1 - box.y0) * j / (ny - 1);
      out.push_back({x, y});
    }
  return out;
}

GridSpec default_grid(const SurfaceDef& def, int nx, int ny) {
  const Domain& d = def.domain;
  const double mx = 0.05 * (d.x1 - d.x0), my = 0.05 * (d.y1 - d.y0);
  return GridSpec{nx, ny, Domain{d.x0 + mx, d.x1 - mx, d.y0 + my, d.y1 - my}};
}

double symplectic_residual(const SurfaceDef& def, const SymplecticForm& form, const GridSpec& grid,
                           const std::optional<Rotation4>& rotation) {
  const Mat4 R = rotation ? rotation->matrix() : Mat4::Identity();
  double worst = 0;
  for (const Point2& p : grid.points()) {
    const MongeFrame mf = monge_frame(eval_surface(def, p, 1));
    const double v = std::abs(form(R * mf.T1, R * mf.T2)) / (mf.T1.norm() * mf.T2.norm());
    worst = std::max(worst, v);
  }
  return worst;
}

double normal_form_residual(const SurfaceDef& def, const GridSpec& grid, int sign) {
  double worst = 0;
  for (const Point2& p : grid.points()) {
    const SurfaceJets j = eval_surface(def, p, 1);
    worst = std::max(worst, std::abs(j.phi.dy() - sign * j.psi.dx()));
  }
  return worst;
}

const char* to_string(CircleFactor f) {
  switch (f) {
    case CircleFactor::none: return "none";
    case CircleFactor::gamma1: return "gamma1";
    case CircleFactor::gamma2: return "gamma2";
  }
  return "?";
}

const char* to_string(MatchedForm f) {
  switch (f) {
    case MatchedForm::none: return "none";
    case MatchedForm::standard: return "standard";
    case MatchedForm::orientationReversed: return "orientationReversed";
  }
  return "?";
}

std::vector<GaussSample> gauss_samples(const SurfaceDef& def, const GridSpec& grid,
                                       const std::optional<Rotation4>& placement) {
  std::vector<GaussSample> out;
  const Mat4 R = placement ? placement->matrix() : Mat4::Identity();
  for (const Point2& p : grid.points()) {
    const MongeFrame mf = monge_frame(eval_surface(def, p, 1));
    GaussSample g;
    g.plucker = plucker_from_pair(R * mf.T1, R * mf.T2);
    g.klein = klein_from_plucker(g.plucker);
    out.push_back(g);
  }
  return out;
}

CongruenceReport congruence_to_lagrangean(const SurfaceDef& def, const GridSpec& grid, double tolCircle,
                                          double tolSymp, const std::optional<Rotation4>& placement) {
  if (grid.nx < 3 || grid.ny < 3) throw InputError("congruence needs at least a 3x3 grid");
  CongruenceReport rep;
  rep.tolCircle = tolCircle;
  rep.tolSymp = tolSymp;
  rep.grid = grid;

  const auto samples = gauss_samples(def, grid, placement);
  std::vector<Vec3> g1, g2;
  for (const auto& s : samples) {
    g1.push_back(s.klein.a);
    g2.push_back(s.klein.b);
  }
  const GreatCircleFit f1 = great_circle_fit(g1), f2 = great_circle_fit(g2);
  rep.fitResidualGamma1 = f1.residual;
  rep.fitResidualGamma2 = f2.residual;
  rep.alphaGamma1 = f1.alpha;
  rep.alphaGamma2 = f2.alpha;

  const bool use2 = f2.residual <= f1.residual;
  const GreatCircleFit& best = use2 ? f2 : f1;
  if (best.residual > tolCircle) {
    rep.fitResidual = std::min(f1.residual, f2.residual);
    rep.symplecticResidual = symplectic_residual(def, SymplecticForm::standard(), grid, placement);
    rep.residualStandard = rep.symplecticResidual;
    rep.residualReversed = symplectic_residual(def, SymplecticForm::omega1(), grid, placement);
    return rep;
  }
  rep.circleFactor = use2 ? CircleFactor::gamma2 : CircleFactor::gamma1;
  rep.alpha = best.alpha;
  rep.fitResidual = best.residual;

  if (use2) {
    rep.rotation = rotation_from_alpha(best.alpha).transpose();
  } else {
    // C exchanges the sphere factors: a' = (b1, b3, b2), b' = (a1, a3, a2).
    const Vec3 swapped(best.alpha[0], best.alpha[2], best.alpha[1]);
    rep.rotation = rotation_from_alpha(swapped).transpose() * swap_map_C();
  }
  const Rotation4 total = placement ? rep.rotation * *placement : rep.rotation;
  rep.residualStandard = symplectic_residual(def, SymplecticForm::standard(), grid, total);
  rep.residualReversed = symplectic_residual(def, SymplecticForm::omega1(), grid, total);
  if (rep.residualStandard <= tolSymp) {
    rep.matchedForm = MatchedForm::standard;
    rep.symplecticResidual = rep.residualStandard;
  } else if (rep.residualReversed <= tolSymp) {
    rep.matchedForm = MatchedForm::orientationReversed;
    rep.symplecticResidual = rep.residualReversed;
  } else {
    rep.symplecticResidual = std::min(rep.residualStandard, rep.residualReversed);
  }
  return rep;
}

}  // namespace gmap4
