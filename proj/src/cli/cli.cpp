#include "gmap4/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "gmap4/characteristics.hpp"
#include "gmap4/errors.hpp"
#include "gmap4/frames.hpp"
#include "gmap4/lagrangian.hpp"
#include "gmap4/suites.hpp"

namespace gmap4::cli {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0) v = 0;  // drop the sign of zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_json(const ordered_json& j, std::string& s, int level) {
  const std::string pad(2 * (level + 1), ' '), close(2 * level, ' ');
  switch (j.type()) {
    case ordered_json::value_t::number_float:
      s += format_number(j.get<double>());
      return;
    case ordered_json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) s += ",\n";
        first = false;
        s += pad + ordered_json(it.key()).dump() + ": ";
        write_json(it.value(), s, level + 1);
      }
      s += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      // Short numeric arrays stay on one line.
      const bool flat = j.size() <= 16 && std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
      if (j.empty()) {
        s += "[]";
        return;
      }
      s += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) s += flat ? ", " : ",\n";
        first = false;
        if (!flat) s += pad;
        write_json(e, s, level + 1);
      }
      s += flat ? "]" : "\n" + close + "]";
      return;
    }
    default:
      s += j.dump();
  }
}

std::string to_json_text(const ordered_json& j) {
  std::string s;
  write_json(j, s, 0);
  return s + "\n";
}

ordered_json vec(const auto& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json domain_json(const Domain& d) { return ordered_json::array({d.x0, d.x1, d.y0, d.y1}); }

ordered_json grid_json(const GridSpec& g) {
  ordered_json j;
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["box"] = domain_json(g.box);
  return j;
}

ordered_json fit_json(const std::vector<Vec3>& samples) {
  if (samples.size() < 3) return nullptr;
  const GreatCircleFit f = great_circle_fit(samples);
  ordered_json j;
  j["alpha"] = vec(f.alpha);
  j["residual"] = f.residual;
  j["degenerate"] = f.degenerate;
  return j;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int nx = 0, ny = 0;
  char comma = 0, extra = 0;
  std::istringstream in(text);
  if (!(in >> nx >> comma >> ny) || comma != ',' || (in >> extra) || nx < 1 || ny < 1) {
    throw InputError("--grid expects NX,NY with positive integers, got '" + text + "'");
  }
  return {nx, ny};
}

// Runs f over [0, n) on up to `threads` workers; results land in index order
// and the first failure by index is rethrown, so output is thread-count
// independent.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errs(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) {
        try {
          out[i] = f(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct PointRecord {
  Point2 p;
  CurvatureReport r;
  KleinPoint g;
};

void write_out(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InputError("failed writing '" + path + "'");
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + "\n";
}

std::string n17(double v) { return format_number(v) == "null" ? "nan" : format_number(v); }

struct GridArgs {
  std::string surface;
  std::string grid = "15,15";
  unsigned threads = default_threads();
};

void add_grid_args(CLI::App* c, GridArgs& a) {
  c->add_option("--surface", a.surface, "surface file")->required();
  c->add_option("--grid", a.grid, "grid size NX,NY over the domain trimmed 5% per side")->capture_default_str();
  c->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
}

struct AnalyzeArgs : GridArgs {
  std::string out, format = "json";
  ClassificationTolerances tol;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
  const SurfaceDef def = load_surface(a.surface);
  const auto [nx, ny] = parse_grid(a.grid);
  const GridSpec grid = default_grid(def, nx, ny);
  const std::vector<Point2> pts = grid.points();
  const auto recs = parallel_map<PointRecord>(pts.size(), a.threads, [&](std::size_t i) {
    const CurvatureReport r = curvature_report(def, pts[i], a.tol);
    return PointRecord{pts[i], r, gauss_map(r.monge).klein};
  });

  if (a.format == "csv") {
    std::string s = "x,y,K,kappa,K1,K2,Delta,class,inflection,singular,g1x,g1y,g1z,g2x,g2y,g2z\n";
    for (const auto& rec : recs) {
      const auto& r = rec.r;
      s += csv_row({n17(rec.p.x), n17(rec.p.y), n17(r.K), n17(r.kappa), n17(r.K1), n17(r.K2), n17(r.Delta),
                    to_string(r.pointClass), to_string(r.inflection), r.gaussSingular ? "1" : "0", n17(rec.g.a[0]),
                    n17(rec.g.a[1]), n17(rec.g.a[2]), n17(rec.g.b[0]), n17(rec.g.b[1]), n17(rec.g.b[2])});
    }
    write_out(a.out, s, out);
    return ok;
  }

  ordered_json j;
  j["surface"] = {{"file", a.surface},
                  {"phi", to_string(def.phi)},
                  {"psi", to_string(def.psi)},
                  {"params", ordered_json::object()},
                  {"domain", domain_json(def.domain)}};
  for (const auto& [k, v] : def.params) j["surface"]["params"][k] = v;
  j["grid"] = grid_json(grid);
  j["tolerances"] = {{"delta", a.tol.delta}, {"kappa", a.tol.kappa}, {"k", a.tol.k},
                     {"rank", a.tol.rank},   {"wong", a.tol.wong},   {"dual", a.tol.dual}};
  ordered_json points = ordered_json::array();
  std::map<std::string, int> classes{{"elliptic", 0}, {"hyperbolic", 0}, {"parabolic", 0}};
  std::map<std::string, int> inflections{{"none", 0}, {"real", 0}, {"flat", 0}, {"imaginary", 0}};
  int singular = 0;
  double minMinus = INFINITY, maxMinus = 0, minPlus = INFINITY, maxPlus = 0;
  std::vector<Vec3> g1, g2;
  for (const auto& rec : recs) {
    const auto& r = rec.r;
    ordered_json p;
    p["x"] = rec.p.x;
    p["y"] = rec.p.y;
    p["K"] = r.K;
    p["kappa"] = r.kappa;
    p["meanH"] = ordered_json::array({r.meanH[0], r.meanH[1]});
    p["K1"] = r.K1;
    p["K2"] = r.K2;
    p["Delta"] = r.Delta;
    p["pointClass"] = to_string(r.pointClass);
    p["inflection"] = to_string(r.inflection);
    p["gaussSingular"] = r.gaussSingular;
    p["Gamma1"] = vec(rec.g.a);
    p["Gamma2"] = vec(rec.g.b);
    ordered_json asym = ordered_json::array();
    for (const auto& d : r.asymptoticDirs) asym.push_back(vec(d.dir));
    p["asymptoticDirs"] = asym;
    p["allAsymptotic"] = r.allAsymptotic;
    ordered_json iso = ordered_json::array();
    for (const auto& d : r.isoclinicDirs)
      iso.push_back({{"branch", d.branch > 0 ? "+" : "-"}, {"allDirections", d.allDirections}, {"dir", vec(d.dir)}});
    p["isoclinicDirs"] = iso;
    points.push_back(p);
    ++classes[to_string(r.pointClass)];
    ++inflections[to_string(r.inflection)];
    singular += r.gaussSingular;
    const double dm = std::abs(r.K - r.kappa), dp = std::abs(r.K + r.kappa);
    minMinus = std::min(minMinus, dm);
    maxMinus = std::max(maxMinus, dm);
    minPlus = std::min(minPlus, dp);
    maxPlus = std::max(maxPlus, dp);
    g1.push_back(rec.g.a);
    g2.push_back(rec.g.b);
  }
  j["points"] = points;
  ordered_json summary;
  summary["count"] = recs.size();
  summary["classCounts"] = classes;
  summary["inflectionCounts"] = inflections;
  summary["gaussSingular"] = singular;
  summary["absKMinusKappa"] = {{"min", minMinus}, {"max", maxMinus}};
  summary["absKPlusKappa"] = {{"min", minPlus}, {"max", maxPlus}};
  summary["circleFit"] = {{"gamma1", fit_json(g1)}, {"gamma2", fit_json(g2)}};
  j["summary"] = summary;
  write_out(a.out, to_json_text(j), out);
  return ok;
}

int gaussmap(const GridArgs& a, const std::string& path, std::ostream& out) {
  const SurfaceDef def = load_surface(a.surface);
  const auto [nx, ny] = parse_grid(a.grid);
  const std::vector<Point2> pts = default_grid(def, nx, ny).points();
  const auto gs = parallel_map<GaussSample>(pts.size(), a.threads, [&](std::size_t i) { return gauss_map_at(def, pts[i]); });
  std::string s = "x,y,g1x,g1y,g1z,g2x,g2y,g2z\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const KleinPoint& k = gs[i].klein;
    s += csv_row({n17(pts[i].x), n17(pts[i].y), n17(k.a[0]), n17(k.a[1]), n17(k.a[2]), n17(k.b[0]), n17(k.b[1]),
                  n17(k.b[2])});
  }
  write_out(path, s, out);
  return ok;
}

int congruence(const GridArgs& a, double tolCircle, double tolSymp, std::ostream& out) {
  const SurfaceDef def = load_surface(a.surface);
  const auto [nx, ny] = parse_grid(a.grid);
  const CongruenceReport r = congruence_to_lagrangean(def, default_grid(def, nx, ny), tolCircle, tolSymp);
  ordered_json j;
  j["circleFactor"] = to_string(r.circleFactor);
  j["alpha"] = vec(r.alpha);
  j["fitResidual"] = r.fitResidual;
  j["fitResidualGamma1"] = r.fitResidualGamma1;
  j["fitResidualGamma2"] = r.fitResidualGamma2;
  j["alphaGamma1"] = vec(r.alphaGamma1);
  j["alphaGamma2"] = vec(r.alphaGamma2);
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) rows.push_back(vec(r.rotation.matrix().row(i)));
  j["rotation"] = rows;
  j["symplecticResidual"] = r.symplecticResidual;
  j["residualStandard"] = r.residualStandard;
  j["residualReversed"] = r.residualReversed;
  j["matchedForm"] = to_string(r.matchedForm);
  j["tolCircle"] = r.tolCircle;
  j["tolSymp"] = r.tolSymp;
  j["grid"] = grid_json(r.grid);
  out << to_json_text(j);
  const bool found = r.circleFactor != CircleFactor::none && r.symplecticResidual <= r.tolSymp;
  return found ? ok : propertyFailure;
}

struct ReconstructArgs {
  double c = 0;
  std::string out;
  ReconstructOptions opt;
  VerifyTolerances tol;
};

int reconstruct(const ReconstructArgs& a, std::ostream& out) {
  const Pde pde(small_circle_problem(a.c));
  const ReconstructedSurface s = reconstruct_surface(pde, a.opt);
  const VerificationReport v = verify_reconstruction(s, pde, a.tol);
  if (!a.out.empty()) {
    std::string csv = "x,y,phi,phi_x,phi_y\n";
    for (const auto& p : s.samples) csv += csv_row({n17(p.x), n17(p.y), n17(p.phi), n17(p.phi_x), n17(p.phi_y)});
    write_out(a.out, csv, out);
  }
  ordered_json j;
  j["c"] = a.c;
  j["options"] = {{"x0Min", a.opt.x0Min}, {"x0Max", a.opt.x0Max}, {"nCurves", a.opt.nCurves},
                  {"tMax", a.opt.tMax},   {"dt", a.opt.dt}};
  j["tolerances"] = {{"b1", a.tol.b1}, {"circle", a.tol.circle}, {"isoclinic", a.tol.isoclinic}, {"drift", a.tol.drift}};
  j["sampleCount"] = v.sampleCount;
  j["h0"] = s.h[static_cast<std::size_t>(s.nCurves / 2)];
  j["maxDrift"] = v.maxDrift;
  j["maxFResidual"] = v.maxFResidual;
  j["maxB1Deviation"] = v.maxB1Deviation;
  j["circleResidualGamma1"] = v.circleResidualGamma1;
  j["circleResidualGamma2"] = v.circleResidualGamma2;
  j["gamma1Origin"] = vec(v.gamma1Origin);
  j["gamma1OriginKlein"] = vec(v.gamma1OriginKlein);
  j["gamma1OriginDx"] = vec(v.gamma1OriginDx);
  j["gamma1OriginDy"] = vec(v.gamma1OriginDy);
  j["phi_xx"] = v.phi_xx;
  j["phi_xy"] = v.phi_xy;
  j["phi_yx"] = v.phi_yx;
  j["phi_yy"] = v.phi_yy;
  j["latticeHessianOrigin"] = ordered_json::array({v.phi_xxLattice, v.phi_xyLattice, v.phi_yxLattice, v.phi_yyLattice});
  j["maxHessianAsymmetry"] = v.maxHessianAsymmetry;
  j["maxIsoclinicResidual"] = v.maxIsoclinicResidual;
  j["isoclinicSamples"] = v.isoclinicSamples;
  j["maxIsoclinicLattice"] = v.maxIsoclinicLattice;
  j["latticeSamples"] = v.latticeSamples;
  const bool passed = v.driftPass() && v.b1Pass() && v.isoclinicPass();
  j["checks"] = {{"drift", v.driftPass()},
                 {"b1", v.b1Pass()},
                 {"isoclinic", v.isoclinicPass()},
                 {"notGreatCircle", v.circlePass()}};
  j["passed"] = passed;
  out << to_json_text(j);
  return passed ? ok : propertyFailure;
}

int verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  SuiteOptions opt;
  opt.seed = seed;
  bool all = true;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-11s %-56s %-6s %-12s %-10s %s\n", "suite", "check", "result", "worst", "bound", "n");
  out << buf;
  for (const auto& n : names) {
    const SuiteResult r = run_suite(n, opt);
    for (const auto& c : r.checks) {
      std::snprintf(buf, sizeof buf, "%-11s %-56s %-6s %-12.4g %-10.3g %zu\n", n.c_str(), c.name.c_str(),
                    c.passed ? "PASS" : "FAIL", c.worst, c.threshold, c.count);
      out << buf;
    }
    all = all && r.passed();
  }
  out << (all ? "all checks passed\n" : "some checks FAILED\n");
  return all ? ok : propertyFailure;
}

void add_classification_tolerances(CLI::App* c, ClassificationTolerances& t) {
  c->add_option("--tol-delta", t.delta, "parabolic band, relative to scale^4")->capture_default_str();
  c->add_option("--tol-kappa", t.kappa, "normal-curvature band, relative to scale^2")->capture_default_str();
  c->add_option("--tol-k", t.k, "Gauss-curvature band, relative to scale^2")->capture_default_str();
  c->add_option("--tol-rank", t.rank, "Gauss-map rank band, relative")->capture_default_str();
  c->add_option("--tol-wong", t.wong, "isoclinic band, relative to max(|K|,|kappa|,1)")->capture_default_str();
  c->add_option("--tol-dual", t.dual, "agreement of the two computation routes")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauss map and curvature analysis of surfaces in R^4", "gmap4"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  AnalyzeArgs an;
  CLI::App* cAnalyze = app.add_subcommand("analyze", "per-point curvature report over a grid");
  add_grid_args(cAnalyze, an);
  cAnalyze->add_option("--out", an.out, "output file (default stdout)");
  cAnalyze->add_option("--format", an.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_classification_tolerances(cAnalyze, an.tol);

  GridArgs gm;
  std::string gmOut;
  CLI::App* cGauss = app.add_subcommand("gaussmap", "CSV of Gauss-map samples");
  add_grid_args(cGauss, gm);
  cGauss->add_option("--out", gmOut, "output CSV file")->required();

  GridArgs cg;
  double tolCircle = 1e-6, tolSymp = 1e-8;
  CLI::App* cCong = app.add_subcommand("congruence", "rotation to a Lagrangean surface");
  add_grid_args(cCong, cg);
  cCong->add_option("--tol-circle", tolCircle, "great-circle residual bound")->capture_default_str();
  cCong->add_option("--tol-symp", tolSymp, "symplectic residual bound")->capture_default_str();

  ReconstructArgs rc;
  CLI::App* cRec = app.add_subcommand("reconstruct", "surface with b1 = c by characteristics");
  cRec->add_option("--c", rc.c, "small-circle level in (0, 1)")->required();
  cRec->add_option("--out", rc.out, "sample CSV file");
  cRec->add_option("--dt", rc.opt.dt, "RK4 step")->capture_default_str();
  cRec->add_option("--t-max", rc.opt.tMax, "strip half-length")->capture_default_str();
  cRec->add_option("--curves", rc.opt.nCurves, "initial points on y = 0")->capture_default_str();
  cRec->add_option("--tol-b1", rc.tol.b1)->capture_default_str();
  cRec->add_option("--tol-drift", rc.tol.drift)->capture_default_str();
  cRec->add_option("--tol-isoclinic", rc.tol.isoclinic)->capture_default_str();

  std::string suite;
  std::uint64_t seed = SuiteOptions{}.seed;
  CLI::App* cVer = app.add_subcommand("verify", "randomised property suites");
  cVer->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"plucker", "blaschke", "wong", "lagrangean", "lift", "all"}));
  cVer->add_option("--seed", seed)->capture_default_str();

  std::vector<const char*> argv{"gmap4"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : inputError;
  }

  try {
    if (*cAnalyze) return analyze(an, out);
    if (*cGauss) return gaussmap(gm, gmOut, out);
    if (*cCong) return congruence(cg, tolCircle, tolSymp, out);
    if (*cRec) return reconstruct(rc, out);
    if (*cVer) return verify(suite, seed, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return inputError;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return inputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return inputError;
  } catch (const Error& e) {
    err << "failure: " << e.what() << "\n";
    return propertyFailure;
  }
  return inputError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gmap4::cli
