#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gmap4/characteristics.hpp"
#include "gmap4/cli.hpp"
#include "gmap4/errors.hpp"
#include "gmap4/frames.hpp"
#include "gmap4/lagrangian.hpp"
#include "gmap4/suites.hpp"

namespace py = pybind11;
using namespace gmap4;

namespace {

py::tuple domain_tuple(const Domain& d) { return py::make_tuple(d.x0, d.x1, d.y0, d.y1); }

Domain domain_from(const std::optional<std::array<double, 4>>& d) {
  if (!d) return Domain{};
  return Domain{(*d)[0], (*d)[1], (*d)[2], (*d)[3]};
}

GridSpec grid_for(const SurfaceDef& def, int nx, int ny) { return default_grid(def, nx, ny); }

py::dict report_dict(const CurvatureReport& r) {
  py::dict d;
  d["K"] = r.K;
  d["kappa"] = r.kappa;
  d["meanH"] = py::make_tuple(r.meanH[0], r.meanH[1]);
  d["K1"] = r.K1;
  d["K2"] = r.K2;
  d["Delta"] = r.Delta;
  d["pointClass"] = to_string(r.pointClass);
  d["inflection"] = to_string(r.inflection);
  d["gaussSingular"] = r.gaussSingular;
  py::list asym;
  for (const auto& a : r.asymptoticDirs) asym.append(Vec2(a.dir));
  d["asymptoticDirs"] = asym;
  d["allAsymptotic"] = r.allAsymptotic;
  py::list iso;
  for (const auto& i : r.isoclinicDirs) {
    py::dict e;
    e["branch"] = i.branch;
    e["allDirections"] = i.allDirections;
    e["dir"] = Vec2(i.dir);
    iso.append(e);
  }
  d["isoclinicDirs"] = iso;
  d["sff"] = py::make_tuple(r.sff.a, r.sff.b, r.sff.c, r.sff.e, r.sff.f, r.sff.g);
  return d;
}

py::dict suite_dict(const SuiteResult& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["passed"] = r.passed();
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["worst"] = c.worst;
    e["threshold"] = c.threshold;
    e["count"] = c.count;
    e["note"] = c.note;
    checks.append(e);
  }
  d["checks"] = checks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gauss map of surfaces in R^4: curvature, Klein coordinates, Lagrangean congruence";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", input.ptr());
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<InconsistencyError>(m, "InconsistencyError", base.ptr());

  py::class_<SurfaceDef>(m, "Surface")
      .def_property_readonly("phi", [](const SurfaceDef& d) { return to_string(d.phi); })
      .def_property_readonly("psi", [](const SurfaceDef& d) { return to_string(d.psi); })
      .def_property_readonly("params", [](const SurfaceDef& d) { return d.params; })
      .def_property_readonly("domain", [](const SurfaceDef& d) { return domain_tuple(d.domain); })
      .def("text", [](const SurfaceDef& d) { return to_surface_text(d); })
      .def("__repr__", [](const SurfaceDef& d) { return "<Surface phi=" + to_string(d.phi) + " psi=" + to_string(d.psi) + ">"; });

  m.def("parse_surface", [](const std::string& text) { return parse_surface(text); }, py::arg("text"));
  m.def("load_surface", &load_surface, py::arg("path"));
  m.def(
      "make_surface",
      [](const std::string& phi, const std::string& psi, const ParamTable& params,
         const std::optional<std::array<double, 4>>& domain) { return make_surface(phi, psi, params, domain_from(domain)); },
      py::arg("phi"), py::arg("psi"), py::arg("params") = ParamTable{}, py::arg("domain") = py::none());

  m.def(
      "curvature_report", [](const SurfaceDef& d, double x, double y) { return report_dict(curvature_report(d, {x, y})); },
      py::arg("surface"), py::arg("x"), py::arg("y"));

  m.def(
      "gauss_map",
      [](const SurfaceDef& d, double x, double y) {
        const GaussSample g = gauss_map_at(d, {x, y});
        py::dict r;
        r["plucker"] = Vec6(g.plucker.p);
        r["gamma1"] = Vec3(g.klein.a);
        r["gamma2"] = Vec3(g.klein.b);
        return r;
      },
      py::arg("surface"), py::arg("x"), py::arg("y"));

  m.def(
      "blaschke_check",
      [](const SurfaceDef& d, double x, double y, double h) {
        const BlaschkeResult b = blaschke_check(d, {x, y}, h);
        py::dict r;
        r["t1"] = b.t1;
        r["t2"] = b.t2;
        r["K"] = b.K;
        r["kappa"] = b.kappa;
        r["sqrtW"] = b.sqrtW;
        r["residual1"] = b.residual1;
        r["residual2"] = b.residual2;
        return r;
      },
      py::arg("surface"), py::arg("x"), py::arg("y"), py::arg("h") = 1e-4);

  m.def(
      "great_circle_fit",
      [](const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>& pts) {
        std::vector<Vec3> v;
        for (Eigen::Index i = 0; i < pts.rows(); ++i) v.emplace_back(pts.row(i).transpose());
        const GreatCircleFit f = great_circle_fit(v);
        py::dict r;
        r["alpha"] = Vec3(f.alpha);
        r["residual"] = f.residual;
        r["degenerate"] = f.degenerate;
        return r;
      },
      py::arg("points"));

  m.def(
      "congruence",
      [](const SurfaceDef& d, int nx, int ny, double tolCircle, double tolSymp) {
        const CongruenceReport c = congruence_to_lagrangean(d, grid_for(d, nx, ny), tolCircle, tolSymp);
        py::dict r;
        r["circleFactor"] = to_string(c.circleFactor);
        r["alpha"] = Vec3(c.alpha);
        r["fitResidual"] = c.fitResidual;
        r["fitResidualGamma1"] = c.fitResidualGamma1;
        r["fitResidualGamma2"] = c.fitResidualGamma2;
        r["rotation"] = Mat4(c.rotation.matrix());
        r["symplecticResidual"] = c.symplecticResidual;
        r["matchedForm"] = to_string(c.matchedForm);
        return r;
      },
      py::arg("surface"), py::arg("nx") = 15, py::arg("ny") = 15, py::arg("tol_circle") = 1e-6,
      py::arg("tol_symp") = 1e-8);

  m.def(
      "reconstruct",
      [](double c, int curves, double tMax, double dt) {
        const Pde pde(small_circle_problem(c));
        ReconstructOptions opt;
        opt.nCurves = curves;
        opt.tMax = tMax;
        opt.dt = dt;
        const ReconstructedSurface s = reconstruct_surface(pde, opt);
        const VerificationReport v = verify_reconstruction(s, pde);
        py::array_t<double> samples({static_cast<py::ssize_t>(s.samples.size()), py::ssize_t{5}});
        auto a = samples.mutable_unchecked<2>();
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
          const auto& p = s.samples[i];
          a(i, 0) = p.x;
          a(i, 1) = p.y;
          a(i, 2) = p.phi;
          a(i, 3) = p.phi_x;
          a(i, 4) = p.phi_y;
        }
        py::dict r;
        r["samples"] = samples;
        r["maxDrift"] = v.maxDrift;
        r["maxB1Deviation"] = v.maxB1Deviation;
        r["circleResidualGamma1"] = v.circleResidualGamma1;
        r["circleResidualGamma2"] = v.circleResidualGamma2;
        r["gamma1Origin"] = Vec3(v.gamma1Origin);
        r["phi_xx"] = v.phi_xx;
        r["phi_xy"] = v.phi_xy;
        r["phi_yy"] = v.phi_yy;
        r["maxIsoclinicResidual"] = v.maxIsoclinicResidual;
        return r;
      },
      py::arg("c"), py::arg("curves") = 41, py::arg("t_max") = 0.4, py::arg("dt") = 1e-3);

  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed) {
        SuiteOptions opt;
        opt.seed = seed;
        return suite_dict(run_suite(name, opt));
      },
      py::arg("name"), py::arg("seed") = SuiteOptions{}.seed);
  m.def("suite_names", &suite_names);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line front end in-process; returns (exit code, stdout, stderr).");
}
