#include "gmap4/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmap4 {

namespace {

bool agree(double a, double b, double rel, double floor) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), floor});
}

std::vector<AsymptoticDirection> asymptotic_roots(double A, double B, double C, PointClass cls) {
  // A u1^2 + B u1 u2 + C u2^2 = 0
  std::vector<Vec2> dirs;
  const bool useA = std::abs(A) >= std::abs(C);
  const double lead = useA ? A : C;
  auto make = [&](double t) { return useA ? Vec2(t, 1.0) : Vec2(1.0, t); };
  if (cls == PointClass::parabolic) {
    // Double root: the null direction of the (nearly singular) form.
    Mat2 S;
    S << A, 0.5 * B, 0.5 * B, C;
    const Eigen::SelfAdjointEigenSolver<Mat2> es(S);
    const int k = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
    dirs.push_back(es.eigenvectors().col(k));
  } else if (cls == PointClass::hyperbolic) {
    if (lead == 0) {
      dirs = {Vec2(1, 0), Vec2(0, 1)};
    } else {
      const double disc = std::sqrt(std::max(0.0, B * B - 4 * A * C));
      // Stable pair of roots.
      const double qv = -0.5 * (B + std::copysign(disc, B == 0 ? 1.0 : B));
      const double other = useA ? C : A;
      dirs.push_back(make(qv / lead));
      dirs.push_back(make(other / qv));
    }
  }
  std::vector<AsymptoticDirection> out;
  for (auto& d : dirs) out.push_back({d.normalized(), Vec4::Zero()});
  return out;
}

Vec4 tangent_of(const MongeFrame& mf, const AdaptedFrame& fr, const Vec2& u) {
  const Vec2 xy = fr.tangentBasis * u;
  return (xy.x() * mf.T1 + xy.y() * mf.T2).normalized();
}

}  // namespace

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::hyperbolic: return "hyperbolic";
    case PointClass::parabolic: return "parabolic";
    case PointClass::elliptic: return "elliptic";
  }
  return "?";
}

const char* to_string(Inflection i) {
  switch (i) {
    case Inflection::none: return "none";
    case Inflection::real: return "real";
    case Inflection::flat: return "flat";
    case Inflection::imaginary: return "imaginary";
  }
  return "?";
}

MongeFrame monge_frame(const SurfaceJets& jets) {
  const double px = jets.phi.dx(), py = jets.phi.dy(), sx = jets.psi.dx(), sy = jets.psi.dy();
  MongeFrame mf;
  mf.T1 = Vec4(1, 0, px, sx);
  mf.T2 = Vec4(0, 1, py, sy);
  mf.N1 = Vec4(-px, -py, 1, 0);
  mf.N2 = Vec4(-sx, -sy, 0, 1);
  mf.E = mf.T1.squaredNorm();
  mf.F = mf.T1.dot(mf.T2);
  mf.G = mf.T2.squaredNorm();
  mf.W = mf.E * mf.G - mf.F * mf.F;
  mf.Ehat = mf.N1.squaredNorm();
  mf.Fhat = mf.N1.dot(mf.N2);
  mf.Ghat = mf.N2.squaredNorm();
  mf.jets = jets;
  return mf;
}

MongeFrame monge_frame(const SurfaceDef& def, Point2 p) { return monge_frame(eval_surface(def, p, 2)); }

AdaptedFrame adapted_frame(const MongeFrame& mf, FrameOrder order) {
  const bool sw = order == FrameOrder::swapped;
  const Vec4& t1 = sw ? mf.T2 : mf.T1;
  const Vec4& t2 = sw ? mf.T1 : mf.T2;
  const Vec4& n1 = sw ? mf.N2 : mf.N1;
  const Vec4& n2 = sw ? mf.N1 : mf.N2;
  AdaptedFrame fr;
  fr.order = order;
  fr.e[0] = t1.normalized();
  fr.e[1] = (t2 - t2.dot(fr.e[0]) * fr.e[0]).normalized();
  fr.e[2] = n1.normalized();
  fr.e[3] = (n2 - n2.dot(fr.e[2]) * fr.e[2]).normalized();

  Eigen::Matrix<double, 4, 2> T;
  T << mf.T1, mf.T2;
  Eigen::Matrix<double, 4, 2> En;
  En << fr.e[0], fr.e[1];
  Mat2 gram;
  gram << mf.E, mf.F, mf.F, mf.G;
  fr.tangentBasis = gram.inverse() * (T.transpose() * En);
  fr.coframe = fr.tangentBasis.inverse();
  return fr;
}

SecondFormCoefficients second_form(const SurfaceJets& jets, const Mat2& M, const Vec4& n3, const Vec4& n4) {
  const Jet& p = jets.phi;
  const Jet& s = jets.psi;
  Mat2 h3, h4;
  h3 << p.dxx() * n3[2] + s.dxx() * n3[3], p.dxy() * n3[2] + s.dxy() * n3[3],  //
      p.dxy() * n3[2] + s.dxy() * n3[3], p.dyy() * n3[2] + s.dyy() * n3[3];
  h4 << p.dxx() * n4[2] + s.dxx() * n4[3], p.dxy() * n4[2] + s.dxy() * n4[3],  //
      p.dxy() * n4[2] + s.dxy() * n4[3], p.dyy() * n4[2] + s.dyy() * n4[3];
  const Mat2 A3 = M.transpose() * h3 * M;
  const Mat2 A4 = M.transpose() * h4 * M;
  SecondFormCoefficients out;
  out.a = A3(0, 0);
  out.b = 0.5 * (A3(0, 1) + A3(1, 0));
  out.c = A3(1, 1);
  out.e = A4(0, 0);
  out.f = 0.5 * (A4(0, 1) + A4(1, 0));
  out.g = A4(1, 1);
  return out;
}

SecondFormCoefficients second_form(const MongeFrame& mf, const AdaptedFrame& frame) {
  SecondFormCoefficients s = second_form(mf.jets, frame.tangentBasis, frame.e[2], frame.e[3]);
  s.frame = frame;
  return s;
}

SecondFormCoefficients second_form(const SurfaceDef& def, Point2 p, FrameOrder order) {
  const MongeFrame mf = monge_frame(def, p);
  return second_form(mf, adapted_frame(mf, order));
}

HessianInvariants hessian_invariants(const SurfaceJets& jets) {
  const double pxx = jets.phi.dxx(), pxy = jets.phi.dxy(), pyy = jets.phi.dyy();
  const double sxx = jets.psi.dxx(), sxy = jets.psi.dxy(), syy = jets.psi.dyy();
  HessianInvariants h;
  h.Hphi = pxx * pyy - pxy * pxy;
  h.Hpsi = sxx * syy - sxy * sxy;
  h.Q = (pxx * syy - pxy * sxy) - (pxy * sxy - pyy * sxx);
  h.L = pxy * syy - pyy * sxy;
  h.M = pxx * syy - pyy * sxx;
  h.N = pxx * sxy - pxy * sxx;
  return h;
}

double delta_expanded(const SecondFormCoefficients& s) {
  const double t = s.a * s.g - s.c * s.e;
  return (s.a * s.f - s.b * s.e) * (s.b * s.g - s.c * s.f) - 0.25 * t * t;
}

double delta_resultant(const SecondFormCoefficients& s) {
  Eigen::Matrix4d R;
  R << s.a, 2 * s.b, s.c, 0,  //
      s.e, 2 * s.f, s.g, 0,   //
      0, s.a, 2 * s.b, s.c,   //
      0, s.e, 2 * s.f, s.g;
  return 0.25 * R.determinant();
}

ResolvedTolerances resolve(const ClassificationTolerances& tol, const SurfaceJets& jets,
                           const SecondFormCoefficients& s) {
  const double raw = std::max({std::abs(jets.phi.dxx()), std::abs(jets.phi.dxy()), std::abs(jets.phi.dyy()),
                                 std::abs(jets.psi.dxx()), std::abs(jets.psi.dxy()), std::abs(jets.psi.dyy())});
  const double scale = std::sqrt(s.a * s.a + 2 * s.b * s.b + s.c * s.c + s.e * s.e + 2 * s.f * s.f + s.g * s.g);
  ResolvedTolerances r;
  r.scale = scale;
  r.rawScale = raw;
  r.delta = tol.delta * std::pow(scale, 4);
  r.kappa = tol.kappa * scale * scale;
  r.k = tol.k * scale * scale;
  r.rank = tol.rank * raw;
  r.wong = tol.wong;
  return r;
}

CurvatureReport curvature_report(const SurfaceJets& jets, const ClassificationTolerances& tol, FrameOrder order) {
  CurvatureReport r;
  r.monge = monge_frame(jets);
  const MongeFrame& mf = r.monge;
  const AdaptedFrame fr = adapted_frame(mf, order);
  r.sff = second_form(mf, fr);
  r.tol = resolve(tol, jets, r.sff);
  const auto& s = r.sff;
  const double scale = r.tol.scale;

  r.K1 = s.a * s.c - s.b * s.b;
  r.K2 = s.e * s.g - s.f * s.f;
  r.K = r.K1 + r.K2;
  r.kappa = (s.a - s.c) * s.f - (s.e - s.g) * s.b;
  r.meanH = {0.5 * (s.a + s.c), 0.5 * (s.e + s.g)};
  r.Delta = delta_expanded(s);

  r.hessian = hessian_invariants(jets);
  const auto& h = r.hessian;
  const double W2 = mf.W * mf.W;
  r.KHessian = (mf.Ehat * h.Hpsi - mf.Fhat * h.Q + mf.Ghat * h.Hphi) / W2;
  r.kappaHessian = (mf.E * h.L - mf.F * h.M + mf.G * h.N) / W2;
  r.DeltaResultant = delta_resultant(s);

  // Curvatures are quadratic in second derivatives, Delta quartic; the floors
  // keep cancellation near zero from reading as disagreement.
  const double floor2 = scale * scale, floor4 = floor2 * floor2;
  if (!agree(r.K, r.KHessian, tol.dual, floor2)) {
    throw InconsistencyError("Gaussian curvature routes disagree: " + std::to_string(r.K) + " vs " +
                             std::to_string(r.KHessian));
  }
  if (!agree(r.kappa, r.kappaHessian, tol.dual, floor2)) {
    throw InconsistencyError("normal curvature routes disagree: " + std::to_string(r.kappa) + " vs " +
                             std::to_string(r.kappaHessian));
  }
  if (!agree(r.Delta, r.DeltaResultant, tol.dual, floor4)) {
    throw InconsistencyError("Delta routes disagree: " + std::to_string(r.Delta) + " vs " +
                             std::to_string(r.DeltaResultant));
  }

  if (std::abs(r.Delta) <= r.tol.delta) {
    r.pointClass = PointClass::parabolic;
    if (std::abs(r.kappa) <= r.tol.kappa) {
      r.inflection = r.K < -r.tol.k ? Inflection::real : r.K > r.tol.k ? Inflection::imaginary : Inflection::flat;
    }
  } else {
    r.pointClass = r.Delta > 0 ? PointClass::elliptic : PointClass::hyperbolic;
  }

  const double A = s.a * s.f - s.b * s.e, B = s.a * s.g - s.c * s.e, C = s.b * s.g - s.c * s.f;
  if (std::max({std::abs(A), std::abs(B), std::abs(C)}) <= r.tol.kappa) {
    r.allAsymptotic = true;
  } else {
    r.asymptoticDirs = asymptotic_roots(A, B, C, r.pointClass);
    for (auto& d : r.asymptoticDirs) d.tangent = tangent_of(mf, fr, d.dir);
  }

  const double band = r.tol.wong * std::max({std::abs(r.K), std::abs(r.kappa), 1.0});
  for (int branch : {+1, -1}) {
    const double gap = branch > 0 ? std::abs(r.K - r.kappa) : std::abs(r.K + r.kappa);
    if (gap > band) continue;
    IsoclinicDirection d;
    d.branch = branch;
    const Vec2 cov(s.a + branch * s.f, s.b + branch * s.g);
    if (cov.norm() <= tol.rank * scale) {
      d.allDirections = true;
    } else {
      d.dir = Vec2(-cov.y(), cov.x()).normalized();
      d.tangent = tangent_of(mf, fr, d.dir);
    }
    r.isoclinicDirs.push_back(d);
  }

  Eigen::Matrix<double, 2, 4> D;
  D << jets.phi.dxx(), jets.psi.dxx(), jets.phi.dxy(), jets.psi.dxy(),  //
      jets.phi.dxy(), jets.psi.dxy(), jets.phi.dyy(), jets.psi.dyy();
  r.gaussSingularValues = Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>>(D).singularValues();
  r.gaussSingular = r.gaussSingularValues[1] <= r.tol.rank;

  Eigen::Matrix<double, 2, 3> S3;
  S3 << s.a, s.b, s.c, s.e, s.f, s.g;
  r.sffSingularValues = Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>>(S3).singularValues();
  Eigen::Matrix<double, 2, 4> S4;
  S4 << s.a, s.b, s.e, s.f, s.b, s.c, s.f, s.g;
  r.sffPairSingularValues = Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>>(S4).singularValues();
  return r;
}

CurvatureReport curvature_report(const SurfaceDef& def, Point2 p, const ClassificationTolerances& tol,
                                 FrameOrder order) {
  return curvature_report(eval_surface(def, p, 2), tol, order);
}

double isoclinic_form_closedness(const SurfaceDef& def, Point2 p, double h, int branch, Gauge gauge) {
  if (!(h > 0)) throw InputError("closedness step must be positive");
  if (branch != 1 && branch != -1) throw InputError("branch must be +1 or -1");
  const Domain& d = def.domain;
  if (p.x - h < d.x0 || p.x + h > d.x1 || p.y - h < d.y0 || p.y + h > d.y1) {
    throw InputError("closedness stencil leaves the domain");
  }

  auto frame_at = [&](Point2 q) {
    const MongeFrame mf = monge_frame(def, q);
    return std::pair{mf, adapted_frame(mf)};
  };

  // Connection forms of the Gram-Schmidt frame at p: w12_k = <d_k e1, e2>,
  // w34_k = <d_k e3, e4>.
  Vec2 w12 = Vec2::Zero(), w34 = Vec2::Zero();
  if (gauge == Gauge::parallelAtBase) {
    const auto [mf0, f0] = frame_at(p);
    for (int k = 0; k < 2; ++k) {
      const Point2 qp{p.x + (k == 0 ? h : 0), p.y + (k == 1 ? h : 0)};
      const Point2 qm{p.x - (k == 0 ? h : 0), p.y - (k == 1 ? h : 0)};
      const auto fp = frame_at(qp).second, fm = frame_at(qm).second;
      w12[k] = ((fp.e[0] - fm.e[0]) / (2 * h)).dot(f0.e[1]);
      w34[k] = ((fp.e[2] - fm.e[2]) / (2 * h)).dot(f0.e[3]);
    }
  }

  // (dx, dy) components of the 1-form at q.
  auto components = [&](Point2 q) {
    const auto [mf, fr] = frame_at(q);
    const Vec2 dq(q.x - p.x, q.y - p.y);
    const double theta = -w12.dot(dq), chi = -w34.dot(dq);
    Mat2 R;
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Mat2 M = fr.tangentBasis * R;
    const Vec4 n3 = std::cos(chi) * fr.e[2] + std::sin(chi) * fr.e[3];
    const Vec4 n4 = -std::sin(chi) * fr.e[2] + std::cos(chi) * fr.e[3];
    const SecondFormCoefficients s = second_form(mf.jets, M, n3, n4);
    const Vec2 u(s.a + branch * s.f, s.b + branch * s.g);
    return Vec2(M.inverse().transpose() * u);
  };

  const Vec2 xp = components({p.x + h, p.y}), xm = components({p.x - h, p.y});
  const Vec2 yp = components({p.x, p.y + h}), ym = components({p.x, p.y - h});
  return std::abs((xp.y() - xm.y()) / (2 * h) - (yp.x() - ym.x()) / (2 * h));
}

DeltaDiagnostic delta_hessian_diagnostic(const SurfaceDef& def, Point2 p, double h) {
  auto delta = [&](double dx, double dy) { return curvature_report(def, {p.x + dx, p.y + dy}).Delta; };
  const double f0 = delta(0, 0);
  const double fxp = delta(h, 0), fxm = delta(-h, 0), fyp = delta(0, h), fym = delta(0, -h);
  DeltaDiagnostic out;
  out.gradient = Vec2((fxp - fxm) / (2 * h), (fyp - fym) / (2 * h));
  const double fxx = (fxp - 2 * f0 + fxm) / (h * h);
  const double fyy = (fyp - 2 * f0 + fym) / (h * h);
  const double fxy = (delta(h, h) - delta(h, -h) - delta(-h, h) + delta(-h, -h)) / (4 * h * h);
  out.hessian << fxx, fxy, fxy, fyy;
  out.hessianDet = fxx * fyy - fxy * fxy;
  out.K = curvature_report(def, p).K;
  out.ratio = out.K != 0 ? out.hessianDet / out.K : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace gmap4
