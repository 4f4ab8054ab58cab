#include <random>
#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "membrane/cli.hpp"
#include "membrane/evolver.hpp"
#include "membrane/extremal_ops.hpp"
#include "membrane/inequality_lab.hpp"
#include "membrane/traveling_waves.hpp"
#include "membrane/vector_fields.hpp"

namespace py = pybind11;
using namespace membrane;

namespace {

py::array_t<double> as_array(const ScalarField& f) {
  const Grid2D& g = f.grid();
  py::array_t<double> out({g.n1, g.n2});
  auto v = f.values();
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ScalarField from_array(const Grid2D& g, py::array_t<double, py::array::c_style | py::array::forcecast> a, double t) {
  if (a.ndim() != 2 || a.shape(0) != g.n1 || a.shape(1) != g.n2)
    throw std::invalid_argument("array shape does not match the grid");
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()), t);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the membrane_lab C++ library";
  m.attr("__version__") = MEMBRANE_VERSION;

  py::register_exception<DegenerateSurfaceError>(m, "DegenerateSurfaceError", PyExc_RuntimeError);

  py::class_<Grid2D>(m, "Grid2D")
      .def(py::init<double, double, double, double, int, int>(), py::arg("x1_lo"), py::arg("x1_hi"), py::arg("x2_lo"),
           py::arg("x2_hi"), py::arg("n1"), py::arg("n2"))
      .def_static("square", &Grid2D::square, py::arg("half_width"), py::arg("n"))
      .def_readonly("n1", &Grid2D::n1)
      .def_readonly("n2", &Grid2D::n2)
      .def_property_readonly("h1", &Grid2D::h1)
      .def_property_readonly("h2", &Grid2D::h2)
      .def_property_readonly("half_width", &Grid2D::half_width)
      .def("__repr__", [](const Grid2D& g) {
        std::ostringstream os;
        os << "Grid2D([" << g.x1_min << ", " << g.x1_max << "] x [" << g.x2_min << ", " << g.x2_max << "], " << g.n1
           << " x " << g.n2 << ")";
        return os.str();
      });

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init(&from_array), py::arg("grid"), py::arg("values"), py::arg("time") = 0.0)
      .def_static("sample", &ScalarField::sample, py::arg("grid"), py::arg("f"), py::arg("time") = 0.0)
      .def_property_readonly("grid", &ScalarField::grid)
      .def_property_readonly("time", &ScalarField::time_label)
      .def("values", &as_array)
      .def("max_abs", &ScalarField::max_abs)
      .def("interpolate", &ScalarField::interpolate, py::arg("x1"), py::arg("x2"))
      .def("support_radius", &ScalarField::support_radius, py::arg("threshold"));

  py::class_<PointJet>(m, "PointJet")
      .def(py::init<>())
      .def(py::init([](double value, double t, double x1, double x2, double tt, double tx1, double tx2, double x1x1,
                       double x1x2, double x2x2) {
             PointJet j;
             j.value = value, j.d_t = t, j.d_x1 = x1, j.d_x2 = x2;
             j.d_tt = tt, j.d_tx1 = tx1, j.d_tx2 = tx2;
             j.d_x1x1 = x1x1, j.d_x1x2 = x1x2, j.d_x2x2 = x2x2;
             return j;
           }),
           py::arg("value") = 0.0, py::arg("d_t") = 0.0, py::arg("d_x1") = 0.0, py::arg("d_x2") = 0.0,
           py::arg("d_tt") = 0.0, py::arg("d_tx1") = 0.0, py::arg("d_tx2") = 0.0, py::arg("d_x1x1") = 0.0,
           py::arg("d_x1x2") = 0.0, py::arg("d_x2x2") = 0.0)
      .def_readwrite("value", &PointJet::value)
      .def_readwrite("d_t", &PointJet::d_t)
      .def_readwrite("d_x1", &PointJet::d_x1)
      .def_readwrite("d_x2", &PointJet::d_x2)
      .def_readwrite("d_tt", &PointJet::d_tt)
      .def_readwrite("d_tx1", &PointJet::d_tx1)
      .def_readwrite("d_tx2", &PointJet::d_tx2)
      .def_readwrite("d_x1x1", &PointJet::d_x1x1)
      .def_readwrite("d_x1x2", &PointJet::d_x1x2)
      .def_readwrite("d_x2x2", &PointJet::d_x2x2);

  m.def("delta_factor", &delta_factor, py::arg("jet"));
  m.def("membrane_residual", &membrane_residual, py::arg("jet"));
  m.def("solve_vtt", &solve_vtt, py::arg("jet"), py::arg("forcing") = 0.0);
  m.def("null_form", &null_form_cartesian, py::arg("phi"), py::arg("psi"));

  py::class_<WaveProfile>(m, "WaveProfile")
      .def_static("by_name", &WaveProfile::by_name, py::arg("name"),
                  py::arg("params") = std::map<std::string, double>{})
      .def_property_readonly("name", &WaveProfile::name)
      .def("eval", &WaveProfile::eval)
      .def("derivative", &WaveProfile::derivative, py::arg("xi"), py::arg("k"));

  py::class_<TravelingWaveSolution>(m, "TravelingWaveSolution")
      .def_property_readonly("kind", [](const TravelingWaveSolution& s) { return to_string(s.kind()); })
      .def("value", [](const TravelingWaveSolution& s, double t, double x1,
                       double x2) { return s.value(std::array<double, 3>{t, x1, x2}); })
      .def("point_jet", &TravelingWaveSolution::point_jet)
      .def("residual", &TravelingWaveSolution::residual)
      .def("self_check", &TravelingWaveSolution::self_check);

  m.def("lightspeed_solution", &lightspeed_solution, py::arg("a"), py::arg("b"), py::arg("profile"),
        py::arg("sign") = 1);
  m.def(
      "affine_subluminal_solution",
      [](std::vector<double> a, double b, double c) { return affine_subluminal_solution(a, b, c); }, py::arg("a"),
      py::arg("b"), py::arg("c"));
  m.def("superluminal_solution", &superluminal_solution, py::arg("profile"), py::arg("c"));
  m.def(
      "residual_convergence",
      [](const TravelingWaveSolution& sol, double half_width, std::vector<int> sizes, double t) {
        const ConvergenceStudy s = residual_convergence(sol, half_width, sizes, t);
        py::list rows;
        for (const auto& r : s.rows)
          rows.append(py::dict(py::arg("n") = r.n, py::arg("h") = r.h, py::arg("max_residual") = r.max_residual,
                               py::arg("order") = r.order));
        return py::dict(py::arg("rows") = rows, py::arg("min_order") = s.min_order, py::arg("exact") = s.exact,
                        py::arg("passes") = s.passes(4));
      },
      py::arg("solution"), py::arg("half_width"), py::arg("sizes"), py::arg("t") = 0.0);

  m.def(
      "commutator_lambda",
      [](const std::string& field, int count, int degree, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::vector<Polynomial> suite;
        for (int i = 0; i < count; ++i) suite.push_back(Polynomial::random(rng, degree));
        const auto fit = commutator_box(vector_field_from_string(field), suite, cube_lattice(-2, 2, 5));
        return py::dict(py::arg("lambda") = fit.lambda, py::arg("max_residual") = fit.max_residual,
                        py::arg("operator_residual") = fit.operator_residual);
      },
      py::arg("field"), py::arg("count") = 12, py::arg("degree") = 4, py::arg("seed") = 1);

  py::class_<RatioReport>(m, "RatioReport")
      .def_readonly("name", &RatioReport::name)
      .def_readonly("max_ratio", &RatioReport::max_ratio)
      .def_readonly("argmax", &RatioReport::argmax)
      .def_readonly("refinement_drift", &RatioReport::refinement_drift)
      .def_readonly("violations", &RatioReport::violations)
      .def("accepted", &RatioReport::accepted, py::arg("drift_tol") = 0.1);

  m.def("estimate_names", [] {
    std::vector<std::string> out;
    for (auto e : {Estimate::hardy_cone, Estimate::hardy_pointwise, Estimate::nullform_xi, Estimate::nullform_eta,
                   Estimate::sobolev, Estimate::derivative_eta, Estimate::derivative_xi, Estimate::corollary})
      out.push_back(to_string(e));
    return out;
  });
  m.def(
      "estimate_report",
      [](const std::string& name, int count, std::uint64_t seed, int n) {
        ConeBumpFamily f;
        f.count = count;
        f.seed = seed;
        SampleSpec spec;
        spec.n = n;
        return family_report(estimate_from_string(name), f, spec);
      },
      py::arg("name"), py::arg("count") = 10, py::arg("seed") = 42, py::arg("n") = 25);
  m.def("hardy_family", &hardy_family, py::arg("count") = 100, py::arg("seed") = 42, py::arg("cells") = 2000);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("grid", &SimConfig::grid)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("cfl", &SimConfig::cfl)
      .def_readwrite("epsilon", &SimConfig::epsilon)
      .def_readwrite("output_every", &SimConfig::output_every)
      .def_readwrite("scheme_order", &SimConfig::scheme_order)
      .def_readwrite("track_energy", &SimConfig::track_energy)
      .def_readwrite("track_hamiltonian", &SimConfig::track_hamiltonian)
      .def_property(
          "mode", [](const SimConfig& c) { return to_string(c.mode); },
          [](SimConfig& c, const std::string& s) { c.mode = evolution_mode_from_string(s); })
      .def(
          "set_background",
          [](SimConfig& c, double a, double b, const WaveProfile& p, int sign) {
            c.background = BackgroundSpec::lightspeed(a, b, p, sign);
          },
          py::arg("a"), py::arg("b"), py::arg("profile"), py::arg("sign") = 1)
      .def("clear_background", [](SimConfig& c) { c.background = BackgroundSpec::none(); })
      .def("validate", &SimConfig::validate);

  py::class_<Emission>(m, "Emission")
      .def_readonly("t", &Emission::t)
      .def_property_readonly("sup_u", [](const Emission& e) { return e.report.sup_u; })
      .def_property_readonly("Es_proxy", [](const Emission& e) { return e.report.Es_proxy; })
      .def_readonly("support_radius", &Emission::support_radius)
      .def_readonly("support_bound", &Emission::support_bound)
      .def_readonly("min_delta", &Emission::min_delta)
      .def_readonly("hamiltonian", &Emission::hamiltonian);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("emissions", &RunResult::emissions)
      .def_readonly("max_sup_u", &RunResult::max_sup_u)
      .def_readonly("min_delta", &RunResult::min_delta)
      .def_readonly("support_ok", &RunResult::support_ok)
      .def_property_readonly("t", [](const RunResult& r) { return r.final_state.t; })
      .def_property_readonly("u", [](const RunResult& r) { return as_array(r.final_state.u); })
      .def_property_readonly("u_t", [](const RunResult& r) { return as_array(r.final_state.u_t); });

  m.def(
      "run", [](const SimConfig& c) { return run(c); }, py::arg("config"),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "membrane-lab");
        std::ostringstream out, err;
        const int code = dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
