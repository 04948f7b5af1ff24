#include "gmap4/grassmann.hpp"

#include <array>
#include <cmath>
#include <random>

namespace gmap4 {

namespace {

// Index pairs for (p12, p13, p14, p34, p42, p23), zero-based.
constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};

Mat4 bivector_matrix(const PluckerPoint& P) {
  Mat4 B = Mat4::Zero();
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    B(i, j) += P.p[k];
    B(j, i) -= P.p[k];
  }
  return B;
}

double triple(const Vec3& dx, const Vec3& dy, const Vec3& g) { return dx.cross(dy).dot(g); }

}  // namespace

Vec6 wedge(const Vec4& c, const Vec4& d) {
  Vec6 w;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    w[k] = c[i] * d[j] - c[j] * d[i];
  }
  return w;
}

PluckerPoint plucker_from_pair(const Vec4& v1, const Vec4& v2) {
  const Vec6 w = wedge(v1, v2);
  const double n = w.norm();
  if (!(n > 1e-12)) throw InputError("plane vectors are linearly dependent");
  return {w / n};
}

double sphere_relation(const PluckerPoint& P) { return P.p.squaredNorm() - 1.0; }

double klein_relation(const PluckerPoint& P) {
  const Vec6& p = P.p;
  return p[0] * p[3] + p[1] * p[4] + p[2] * p[5];
}

KleinPoint klein_from_plucker(const PluckerPoint& P, double tol) {
  const Vec6& p = P.p;
  KleinPoint k;
  k.a = Vec3(p[0] + p[3], p[1] + p[4], p[2] + p[5]);
  k.b = Vec3(p[0] - p[3], p[1] - p[4], p[2] - p[5]);
  if (std::abs(k.a.norm() - 1.0) > tol || std::abs(k.b.norm() - 1.0) > tol) {
    throw InputError("Klein vectors are not unit; input is not a normalised decomposable bivector");
  }
  return k;
}

PluckerPoint plucker_from_klein(const KleinPoint& k) {
  PluckerPoint P;
  const Vec3 s = 0.5 * (k.a + k.b), d = 0.5 * (k.a - k.b);
  P.p << s[0], s[1], s[2], d[0], d[1], d[2];
  return P;
}

GaussSample gauss_map(const MongeFrame& mf) {
  GaussSample g;
  g.plucker = plucker_from_pair(mf.T1, mf.T2);
  g.klein = klein_from_plucker(g.plucker);
  return g;
}

GaussSample gauss_map_at(const SurfaceDef& def, Point2 p) { return gauss_map(monge_frame(eval_surface(def, p, 1))); }

Vec3 closed_form_gamma1(const KleinPoint& k) { return Vec3(k.a[0], k.a[2], -k.a[1]); }
Vec3 closed_form_gamma2(const KleinPoint& k) { return Vec3(k.b[0], -k.b[2], -k.b[1]); }

Vec3 closed_form_gamma1(double px, double py, double sx, double sy) {
  const double W = (1 + px * px + sx * sx) * (1 + py * py + sy * sy) - std::pow(px * py + sx * sy, 2);
  return Vec3(1 + px * sy - py * sx, -px + sy, -py - sx) / std::sqrt(W);
}

Vec3 closed_form_gamma2(double px, double py, double sx, double sy) {
  const double W = (1 + px * px + sx * sx) * (1 + py * py + sy * sy) - std::pow(px * py + sx * sy, 2);
  return Vec3(1 - px * sy + py * sx, -px - sy, -py + sx) / std::sqrt(W);
}

BlaschkeResult blaschke_check(const SurfaceDef& def, Point2 p, double h) {
  const Domain& d = def.domain;
  if (p.x - h < d.x0 || p.x + h > d.x1 || p.y - h < d.y0 || p.y + h > d.y1) {
    throw InputError("Blaschke stencil leaves the domain");
  }
  const KleinPoint k0 = gauss_map_at(def, p).klein;
  const KleinPoint xp = gauss_map_at(def, {p.x + h, p.y}).klein, xm = gauss_map_at(def, {p.x - h, p.y}).klein;
  const KleinPoint yp = gauss_map_at(def, {p.x, p.y + h}).klein, ym = gauss_map_at(def, {p.x, p.y - h}).klein;
  BlaschkeResult r;
  r.t1 = triple((xp.a - xm.a) / (2 * h), (yp.a - ym.a) / (2 * h), k0.a);
  r.t2 = triple((xp.b - xm.b) / (2 * h), (yp.b - ym.b) / (2 * h), k0.b);
  const CurvatureReport c = curvature_report(def, p);
  r.K = c.K;
  r.kappa = c.kappa;
  r.sqrtW = std::sqrt(c.monge.W);
  r.residual1 = std::abs(std::abs(r.t1) - std::abs(r.K + r.kappa) * r.sqrtW);
  r.residual2 = std::abs(std::abs(r.t2) - std::abs(r.K - r.kappa) * r.sqrtW);
  return r;
}

std::pair<Vec4, Vec4> plane_basis(const PluckerPoint& P) {
  const Mat4 B = bivector_matrix(P);
  const Mat4 proj = -B * B;
  const Eigen::SelfAdjointEigenSolver<Mat4> es(proj);
  const Vec4 u = es.eigenvectors().col(3).normalized();
  const Vec4 v = (-B * u).normalized();
  return {u, v};
}

Eigen::Vector2d principal_cosines(const PluckerPoint& P1, const PluckerPoint& P2) {
  const auto [u1, v1] = plane_basis(P1);
  const auto [u2, v2] = plane_basis(P2);
  Mat2 M;
  M << u1.dot(u2), u1.dot(v2), v1.dot(u2), v1.dot(v2);
  return Eigen::JacobiSVD<Mat2>(M).singularValues();
}

bool planes_isoclinic(const PluckerPoint& P1, const PluckerPoint& P2, double tol) {
  klein_from_plucker(P1);
  klein_from_plucker(P2);
  const Eigen::Vector2d s = principal_cosines(P1, P2);
  return std::abs(s[0] - s[1]) <= tol;
}

PluckerPoint graph_plane(const Eigen::Vector2d& alpha, const Eigen::Vector2d& beta) {
  return plucker_from_pair(Vec4(1, 0, alpha[0], alpha[1]), Vec4(0, 1, beta[0], beta[1]));
}

bool isoclinic_to_base(const Eigen::Vector2d& alpha, const Eigen::Vector2d& beta, double tol) {
  return std::abs(alpha.squaredNorm() - beta.squaredNorm()) <= tol && std::abs(alpha.dot(beta)) <= tol;
}

Rotation4::Rotation4(const Mat4& m, double tol) : m_(m), det_(m.determinant()) {
  if ((m * m.transpose() - Mat4::Identity()).cwiseAbs().maxCoeff() > tol) {
    throw InputError("matrix is not orthogonal");
  }
}

Lift6 lift_so4(const Rotation4& A) {
  const Mat4& m = A.matrix();
  Lift6 L;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    L.m.col(k) = wedge(m.col(i), m.col(j));
  }
  if ((L.m * L.m.transpose() - Mat6::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InconsistencyError("lifted matrix is not orthogonal");
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> n01;
  for (int s = 0; s < 20; ++s) {
    Vec4 v1, v2;
    for (int k = 0; k < 4; ++k) {
      v1[k] = n01(rng);
      v2[k] = n01(rng);
    }
    if ((wedge(m * v1, m * v2) - L.m * wedge(v1, v2)).cwiseAbs().maxCoeff() > 1e-10 * (1 + v1.norm() * v2.norm())) {
      throw InconsistencyError("lift does not commute with the wedge product");
    }
  }
  return L;
}

Rotation4 swap_map_C() {
  Mat4 m = Mat4::Identity();
  m(2, 2) = m(3, 3) = 0;
  m(2, 3) = m(3, 2) = 1;
  return Rotation4(m);
}

Mat4 alpha_hat_matrix(const Vec3& a) {
  const double s = std::hypot(a[0], a[1]);
  if (!(s > 0)) throw InputError("alpha lies on the pole; use rotation_from_alpha");
  Mat4 m;
  m << 1, 0, 0, 0,                                    //
      0, a[1] / s, a[0], a[0] * a[2] / s,             //
      0, -a[0] / s, a[1], a[1] * a[2] / s,            //
      0, 0, a[2], -s;
  return m;
}

Rotation4 rotation_from_alpha(const Vec3& alphaIn) {
  if (std::abs(alphaIn.norm() - 1.0) > 1e-10) throw InputError("alpha must be a unit vector");
  const Vec3 alpha = alphaIn;
  Vec6 beta;
  beta << 0, 1, 0, 0, -1, 0;
  Rotation4 result = Rotation4::identity();
  if (alpha[0] * alpha[0] + alpha[1] * alpha[1] < 1e-12) {
    // Quarter turn in the (x3, x4) plane; its lift rotates both sphere
    // factors the same way, so (alpha, alpha) goes to (alpha', alpha').
    Mat4 q = Mat4::Identity();
    q(2, 2) = q(3, 3) = 0;
    q(2, 3) = -1;
    q(3, 2) = 1;
    const Rotation4 B(q);
    Vec6 aa;
    aa << alpha, alpha;
    const Vec6 moved = lift_so4(B).m * aa;
    const Vec3 a2 = moved.head<3>();
    result = B.transpose() * Rotation4(alpha_hat_matrix(a2));
  } else {
    result = Rotation4(alpha_hat_matrix(alpha));
  }
  Vec6 target;
  target << alpha, alpha;
  if ((lift_so4(result).m * beta - target).cwiseAbs().maxCoeff() > 1e-10) {
    throw InconsistencyError("rotation_from_alpha postcondition failed");
  }
  return result;
}

Rotation4 rotation_between_planes(const PluckerPoint& P1, const PluckerPoint& P2) {
  auto complete = [](const PluckerPoint& P) {
    const auto [u, v] = plane_basis(P);
    Eigen::Matrix<double, 4, 6> M;
    M << u, v, Mat4::Identity();
    const Eigen::HouseholderQR<Eigen::Matrix<double, 4, 6>> qr(M);
    Mat4 Q = qr.householderQ();
    // Householder may flip the signs of the first two columns.
    if (Q.col(0).dot(u) < 0) Q.col(0) = -Q.col(0);
    if (Q.col(1).dot(v) < 0) Q.col(1) = -Q.col(1);
    if (Q.determinant() < 0) Q.col(3) = -Q.col(3);
    return Q;
  };
  return Rotation4(complete(P2) * complete(P1).transpose(), 1e-9);
}

GreatCircleFit great_circle_fit(std::span<const Vec3> samples) {
  if (samples.size() < 3) throw InputError("great-circle fit needs at least 3 samples");
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  for (const Vec3& s : samples) gram += s * s.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gram);
  GreatCircleFit fit;
  fit.alpha = es.eigenvectors().col(0).normalized();
  fit.degenerate = es.eigenvalues()[1] <= 1e-12 * static_cast<double>(samples.size());
  for (int k = 0; k < 3; ++k) {
    if (std::abs(fit.alpha[k]) > 1e-12) {
      if (fit.alpha[k] < 0) fit.alpha = -fit.alpha;
      break;
    }
  }
  for (const Vec3& s : samples) fit.residual = std::max(fit.residual, std::abs(fit.alpha.dot(s)));
  return fit;
}

}  // namespace gmap4
