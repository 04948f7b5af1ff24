#include "gmap4/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gmap4/errors.hpp"
#include "gmap4/frames.hpp"
#include "gmap4/lagrangian.hpp"
#include "gmap4/random.hpp"

namespace gmap4 {

namespace {

// Running max of a residual against a fixed bound.
struct Tracker {
  SuiteCheck c;
  Tracker(std::string name, double threshold) {
    c.name = std::move(name);
    c.threshold = threshold;
  }
  void add(double r) {
    ++c.count;
    if (!(r < c.threshold)) c.passed = false;
    if (std::isnan(r) || r > c.worst) c.worst = r;
  }
  // Counts mismatches; passes when there are none.
  void flag(bool ok) {
    ++c.count;
    if (!ok) {
      c.passed = false;
      c.worst += 1;
    }
  }
};

SurfaceDef gradient_graph(const Poly& F, Domain box) {
  return make_surface(F.partial(1, 0).text(), F.partial(0, 1).text(), {}, box);
}

double max_abs(const auto& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

SuiteResult plucker_suite(const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  Tracker sphere("sphere relation", 1e-12), quadric("Klein quadric", 1e-12), unit("Klein vectors unit", 1e-12),
      round("Klein round trip", 1e-12);
  for (int k = 0; k < opt.planes; ++k) {
    const PluckerPoint P = plucker_from_pair(random_vec4(rng), random_vec4(rng));
    sphere.add(std::abs(sphere_relation(P)));
    quadric.add(std::abs(klein_relation(P)));
    const KleinPoint kp = klein_from_plucker(P);
    unit.add(std::max(std::abs(kp.a.norm() - 1), std::abs(kp.b.norm() - 1)));
    round.add(max_abs(plucker_from_klein(kp).p - P.p));
  }
  return {"plucker", {sphere.c, quadric.c, unit.c, round.c}};
}

SuiteResult blaschke_suite(const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> pt(-0.6, 0.6);
  Tracker t1("|t1| = |K+kappa| sqrtW", opt.blaschkeTol), t2("|t2| = |K-kappa| sqrtW", opt.blaschkeTol);
  Tracker signs("constant signs (eps1 +1, eps2 -1)", 0.5);
  // Signs are only meaningful where the product is clear of the FD noise.
  const double clear = 1e-3;
  for (int s = 0; s < opt.surfaces; ++s) {
    const SurfaceDef d = make_surface(random_poly(rng, 3).text(), random_poly(rng, 3).text());
    for (int k = 0; k < opt.pointsPerSurface; ++k) {
      const BlaschkeResult r = blaschke_check(d, {pt(rng), pt(rng)}, opt.blaschkeStep);
      t1.add(r.residual1);
      t2.add(r.residual2);
      const double s1 = (r.K + r.kappa) * r.sqrtW, s2 = (r.K - r.kappa) * r.sqrtW;
      if (std::abs(s1) > clear) signs.flag(r.t1 * s1 > 0);
      if (std::abs(s2) > clear) signs.flag(r.t2 * s2 < 0);
    }
  }
  signs.c.note = "sign checks skipped where |K +- kappa| sqrtW <= 1e-3";
  return {"blaschke", {t1.c, t2.c, signs.c}};
}

SuiteResult wong_suite(const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  const Domain half{-0.5, 0.5, -0.5, 0.5};
  std::vector<SurfaceDef> surfaces{
      make_surface("x^2 - y^2", "a*x + b*y - 2*x*y", {{"a", 1}, {"b", 2}}),
      make_surface("x^2 - y^2", "2*x*y", {}, half),
      make_surface("x^3 - 3*x*y^2", "3*x^2*y - y^3", {}, half),
  };
  std::vector<SurfaceDef> kEqualsKappa{surfaces[0]};
  for (int k = 0; k < opt.wongSurfaces; ++k)
    surfaces.push_back(make_surface(random_poly(rng, 3).text(), random_poly(rng, 3).text()));
  for (int k = 0; k < opt.closednessSurfaces; ++k) {
    const SurfaceDef g = gradient_graph(random_poly(rng, 4, 0.5, 2), half);
    surfaces.push_back(g);
    kEqualsKappa.push_back(g);
  }

  Tracker wong("direction exists iff min(|K-kappa|,|K+kappa|) <= band", 0.5);
  std::size_t withDirection = 0;
  for (const SurfaceDef& d : surfaces) {
    const GridSpec g = default_grid(d, 9, 9);
    for (const Point2& p : g.points()) {
      const CurvatureReport r = curvature_report(d, p);
      const double band = r.tol.wong * std::max({std::abs(r.K), std::abs(r.kappa), 1.0});
      const bool expect = std::min(std::abs(r.K - r.kappa), std::abs(r.K + r.kappa)) <= band;
      wong.flag(expect == !r.isoclinicDirs.empty());
      withDirection += !r.isoclinicDirs.empty();
    }
  }
  wong.c.note = std::to_string(withDirection) + " points carry a direction";

  Tracker closed("isoclinic 1-form closedness", 1e-4);
  const int side = static_cast<int>(std::lround(std::sqrt(opt.closednessPoints)));
  for (const SurfaceDef& d : kEqualsKappa) {
    const Domain& b = d.domain;
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        const double u = side == 1 ? 0.5 : 0.1 + 0.8 * i / (side - 1), v = side == 1 ? 0.5 : 0.1 + 0.8 * j / (side - 1);
        closed.add(isoclinic_form_closedness(d, {b.x0 + u * (b.x1 - b.x0), b.y0 + v * (b.y1 - b.y0)}));
      }
  }

  std::normal_distribution<double> n;
  std::bernoulli_distribution coin(0.5);
  const Lift6 C = lift_so4(swap_map_C());
  Tracker swap("I+ = C I-", 1e-10);
  for (int k = 0; k < opt.isoclinicPlanes; ++k) {
    const Eigen::Vector2d alpha(n(rng), n(rng));
    const PluckerPoint P = graph_plane(alpha, {alpha[1], -alpha[0]});
    swap.add(std::max((klein_from_plucker(P).b - Vec3::UnitX()).norm(),
                      (klein_from_plucker(C * P).a - Vec3::UnitX()).norm()));
  }

  Tracker isosup("isosup agrees with principal angles", 0.5);
  const PluckerPoint xy = plucker_from_pair(Vec4::Unit(0), Vec4::Unit(1));
  std::size_t positives = 0;
  for (int k = 0; k < opt.isosupPlanes; ++k) {
    const Eigen::Vector2d alpha(n(rng), n(rng));
    Eigen::Vector2d beta(n(rng), n(rng));
    if (coin(rng)) beta = (coin(rng) ? 1.0 : -1.0) * Eigen::Vector2d(-alpha[1], alpha[0]);
    const bool alg = isoclinic_to_base(alpha, beta);
    isosup.flag(alg == planes_isoclinic(xy, graph_plane(alpha, beta)));
    positives += alg;
  }
  isosup.c.note = std::to_string(positives) + " isoclinic";
  return {"wong", {wong.c, closed.c, swap.c, isosup.c}};
}

SuiteResult lagrangean_suite(const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed + 3);
  const Domain box{-0.5, 0.5, -0.5, 0.5};
  Tracker b2("|b2| on gradient graphs", 1e-10), kk("|K - kappa| on gradient graphs", 1e-9),
      symp("symplectic residual after congruence", 1e-8);
  for (int k = 0; k < opt.gradientGraphs; ++k) {
    const SurfaceDef d = gradient_graph(random_poly(rng, 4, 1.0, 2), box);
    const GridSpec g = default_grid(d);
    for (const GaussSample& s : gauss_samples(d, g)) b2.add(std::abs(s.klein.b[1]));
    for (const Point2& p : g.points()) {
      const CurvatureReport r = curvature_report(d, p);
      kk.add(std::abs(r.K - r.kappa));
    }
    const CongruenceReport r = congruence_to_lagrangean(d, g, 1e-6, 1e-8, random_rotation(rng));
    symp.add(r.circleFactor == CircleFactor::none ? INFINITY : r.symplecticResidual);
  }
  return {"lagrangean", {b2.c, kk.c, symp.c}};
}

SuiteResult lift_suite(const SuiteOptions& opt) {
  std::mt19937_64 rng(opt.seed + 4);
  Tracker hom("lift(AB) = lift(A) lift(B)", 1e-10), orth("lift orthogonal", 1e-10), equi("wedge equivariance", 1e-10),
      post("lift(A-hat) beta = (alpha, alpha)", 1e-10);
  for (int k = 0; k < opt.rotationPairs; ++k) {
    const Rotation4 A = random_rotation(rng, k % 2 == 0), B = random_rotation(rng);
    const Lift6 LA = lift_so4(A), LB = lift_so4(B), LAB = lift_so4(A * B);
    hom.add(max_abs(LAB.m - LA.m * LB.m));
    orth.add(max_abs(LA.m * LA.m.transpose() - Mat6::Identity()));
    const Vec4 v1 = random_vec4(rng), v2 = random_vec4(rng);
    equi.add(max_abs(plucker_from_pair(A * v1, A * v2).p - (LA * plucker_from_pair(v1, v2)).p));
  }
  Vec6 beta;
  beta << 0, 1, 0, 0, -1, 0;
  std::size_t capped = 0;
  for (int k = 0; k < opt.alphas; ++k) {
    const Vec3 a = random_unit3(rng);
    if (a[0] * a[0] + a[1] * a[1] < 1e-12) ++capped;
    Vec6 aa;
    aa << a, a;
    post.add(max_abs(lift_so4(rotation_from_alpha(a)).m * beta - aa));
  }
  post.c.note = std::to_string(capped) + " samples in the pole cap";
  return {"lift", {hom.c, orth.c, equi.c, post.c}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"plucker", "blaschke", "wong", "lagrangean", "lift"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "plucker") return plucker_suite(opt);
  if (name == "blaschke") return blaschke_suite(opt);
  if (name == "wong") return wong_suite(opt);
  if (name == "lagrangean") return lagrangean_suite(opt);
  if (name == "lift") return lift_suite(opt);
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace gmap4
