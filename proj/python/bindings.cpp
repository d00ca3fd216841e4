// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include <polar_derham/cli_io.hpp>
#include <polar_derham/errors.hpp>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <sstream>

namespace py = pybind11;
using namespace polar_derham;

namespace
{

Triple to_triple(const std::array<int, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<int, 3> from_triple(const Triple& t) { return {t.r, t.s, t.t}; }

MapChoice to_map(const std::string& m)
{
  if (m == "polar" || m == "F")
    return MapChoice::polar;
  if (m == "smooth" || m == "G")
    return MapChoice::smooth;
  throw std::invalid_argument("map must be 'polar' or 'smooth'");
}

py::object json_to_py(const nlohmann::json& j)
{
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict rank_dict(const RankInfo& r)
{
  py::dict d;
  d["rows"] = r.rows;
  d["cols"] = r.cols;
  d["rank"] = r.rank;
  d["sigma_max"] = r.sigma_max;
  d["threshold"] = r.threshold;
  d["sigma_kept"] = r.sigma_kept;
  d["sigma_dropped"] = r.sigma_dropped;
  d["gap_ratio"] = r.gap_ratio;
  return d;
}

py::dict counts_dict(const PolarCounts& c)
{
  py::dict d;
  d["nbar0"] = c.nbar0;
  d["nbar1"] = c.nbar1;
  d["nbar2"] = c.nbar2;
  d["n0"] = c.n0;
  d["n1"] = c.n1;
  d["n2"] = c.n2;
  d["n3"] = c.n3;
  return d;
}

RankPolicy policy(const std::string& method, std::optional<double> tol)
{
  RankPolicy p;
  if (method == "qr")
    p.method = RankPolicy::Method::sparse_qr;
  else if (method != "svd")
    throw std::invalid_argument("method must be 'svd' or 'qr'");
  p.tolerance = tol;
  return p;
}

} // namespace

PYBIND11_MODULE(_polar_derham, m)
{
  m.doc() = "Polar spline de Rham complexes on the solid torus";

  static py::exception<ConstructionError> construction(m, "ConstructionError",
                                                       PyExc_ValueError);
  static py::exception<SingularityError> singular(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try
    {
      if (p)
        std::rethrow_exception(p);
    }
    catch (const ConstructionError& e)
    {
      py::set_error(construction, e.what());
    }
    catch (const SingularityError& e)
    {
      py::set_error(singular, e.what());
    }
  });

  py::class_<KnotVector>(m, "KnotVector")
      .def(py::init<int, std::vector<double>>(), py::arg("degree"), py::arg("knots"))
      .def_property_readonly("degree", &KnotVector::degree)
      .def_property_readonly("knots", &KnotVector::knots)
      .def("multiplicity", &KnotVector::multiplicity)
      .def("greville", &KnotVector::greville);

  py::class_<SplineSpace>(m, "SplineSpace")
      .def(py::init<KnotVector, bool>(), py::arg("knots"), py::arg("periodic"))
      .def_property_readonly("degree", &SplineSpace::degree)
      .def_property_readonly("periodic", &SplineSpace::periodic)
      .def_property_readonly("dim", &SplineSpace::dim)
      .def_property_readonly("derivative_dim", &SplineSpace::derivative_dim)
      .def("H0", &SplineSpace::H0)
      .def("H1", &SplineSpace::H1)
      .def("eval_basis", &SplineSpace::eval_basis, py::arg("x"))
      .def("eval_derivative_basis", &SplineSpace::eval_derivative_basis, py::arg("x"))
      .def("eval", &SplineSpace::eval, py::arg("coeffs"), py::arg("x"))
      .def("eval_derivative", &SplineSpace::eval_derivative, py::arg("coeffs"), py::arg("x"))
      .def("greville", &SplineSpace::greville);

  m.def("make_uniform_open_knots", &make_uniform_open_knots, py::arg("degree"),
        py::arg("num_distinct"), py::arg("a") = 0.0, py::arg("b") = 1.0);
  m.def("polar_counts", [](int nr, int ns, int nt) { return counts_dict(polar_counts(nr, ns, nt)); },
        py::arg("nr"), py::arg("ns"), py::arg("nt"));
  m.def(
      "is_dta_compatible",
      [](const SparseMatrix& M, double tol) {
        const auto d = is_dta_compatible(M, tol);
        py::dict r;
        r["compatible"] = d.compatible;
        r["rank"] = d.rank;
        r["max_column_sum_error"] = d.max_column_sum_error;
        r["min_entry"] = d.min_entry;
        r["violations"] = d.violations;
        return r;
      },
      py::arg("matrix"), py::arg("tol") = 1e-12);

  py::class_<PolarComplex>(m, "PolarComplex")
      .def_property_readonly("sizes", [](const PolarComplex& c) { return from_triple(c.sizes()); })
      .def_property_readonly("degrees",
                             [](const PolarComplex& c) { return from_triple(c.seq.degrees()); })
      .def_property_readonly("counts", [](const PolarComplex& c) { return counts_dict(c.counts()); })
      .def_property_readonly("D0", [](const PolarComplex& c) { return c.inc.D0; })
      .def_property_readonly("D1", [](const PolarComplex& c) { return c.inc.D1; })
      .def_property_readonly("D2", [](const PolarComplex& c) { return c.inc.D2; })
      .def("matrices", &named_matrices)
      .def("control_net",
           [](const PolarComplex& c, const std::string& map) {
             return Eigen::MatrixXd(to_map(map) == MapChoice::polar ? c.F.points : c.G.points);
           },
           py::arg("map") = "polar")
      .def("commutation_residuals",
           [](const PolarComplex& c) {
             py::dict d;
             for (const auto& id : verify_commutation(c).identities)
               d[py::str(id.name)] = id.residual;
             return d;
           })
      .def("complex_residuals",
           [](const PolarComplex& c) {
             const auto r = complex_residuals(c.inc);
             return py::make_tuple(r.curl_grad, r.div_curl);
           })
      .def("cohomology",
           [](const PolarComplex& c, const std::string& method, std::optional<double> tol) {
             const auto rep = cohomology_dimensions(c, policy(method, tol));
             py::dict d;
             d["dims"] = rep.dims;
             py::list ranks;
             for (const auto& r : rep.ranks)
               ranks.append(rank_dict(r));
             d["ranks"] = ranks;
             d["warnings"] = rep.warnings;
             return d;
           },
           py::arg("method") = "svd", py::arg("tolerance") = py::none())
      .def("divergence_preimage",
           py::overload_cast<const PolarComplex&, const Eigen::VectorXd&, double>(
               &divergence_preimage),
           py::arg("m"), py::arg("beta") = 0.0)
      .def("reduced_basis",
           [](const PolarComplex& c, int level, double r, double s, double t) {
             return reduced_basis_all(c.seq, c.ext, level, r, s, t);
           },
           py::arg("level"), py::arg("r"), py::arg("s"), py::arg("t"))
      .def("eval_field",
           [](const PolarComplex& c, int level, const Eigen::VectorXd& coeffs, double r, double s,
              double t) { return reduced_field_eval(c.seq, c.ext, level, coeffs, r, s, t); },
           py::arg("level"), py::arg("coeffs"), py::arg("r"), py::arg("s"), py::arg("t"))
      .def("pushforward",
           [](const PolarComplex& c, int level, const Eigen::VectorXd& coeffs, double r, double s,
              double t, const std::string& map) {
             const auto v = pushforward_eval(c, level, coeffs, r, s, t, to_map(map));
             return py::make_tuple(Eigen::Vector3d(v.x), Eigen::VectorXd(v.value));
           },
           py::arg("level"), py::arg("coeffs"), py::arg("r"), py::arg("s"), py::arg("t"),
           py::arg("map") = "polar")
      .def("smoothness_probe",
           [](const PolarComplex& c, const Eigen::VectorXd& f, double t,
              const std::vector<double>& eps, const std::string& map) {
             const auto p = polar_smoothness_probe(c, f, t, eps, to_map(map));
             py::dict d;
             d["value_discrepancy"] = p.value_discrepancy;
             std::vector<double> spread;
             for (const auto& row : p.rows)
               spread.push_back(row.gradient_spread);
             d["gradient_spread"] = spread;
             d["c1_decreasing"] = p.c1_decreasing;
             return d;
           },
           py::arg("f"), py::arg("t"), py::arg("eps") = std::vector<double>{1e-2, 1e-3, 1e-4},
           py::arg("map") = "polar");

  m.def(
      "build_complex",
      [](std::array<int, 3> sizes, std::array<int, 3> degrees, double rho_bar,
         std::array<double, 3> lengths, double ebar_perturbation) {
        TorusComplexSpec spec;
        spec.sizes = to_triple(sizes);
        spec.degrees = to_triple(degrees);
        spec.rho_bar = rho_bar;
        spec.lengths = lengths;
        spec.ebar_perturbation = ebar_perturbation;
        return build_complex(spec);
      },
      py::arg("sizes") = std::array<int, 3>{4, 4, 3},
      py::arg("degrees") = std::array<int, 3>{2, 2, 2}, py::arg("rho_bar") = 3.0,
      py::arg("lengths") = std::array<double, 3>{1.0, 1.0, 1.0},
      py::arg("ebar_perturbation") = 0.0);

  m.def(
      "verify",
      [](const std::string& config_json, double tol, const std::string& method) {
        const auto cfg = parse_config(nlohmann::json::parse(config_json));
        VerifyOptions opt;
        opt.tol = tol;
        opt.rank = policy(method, cfg.rank_tolerance);
        py::gil_scoped_release release;
        auto res = run_verification(cfg, opt);
        py::gil_scoped_acquire acquire;
        return json_to_py(res.report);
      },
      py::arg("config_json") = "{}", py::arg("tol") = 1e-12, py::arg("method") = "svd");
}
