// Python bindings for the main operations: mesh construction, quadrature,
// the manufactured solution and its source oracle, single solves, and the
// convergence study with CSV/SVG reporting.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "mpe/error_norms.hpp"
#include "mpe/quadrature.hpp"
#include "mpe/study.hpp"

namespace py = pybind11;
using namespace mpe;

namespace {

ConvergenceRow solve_single(int n, double dt, double t_final, double alpha_e,
                            bool consistent_initial_state) {
  const ParameterSet params = ParameterSet::unit(1, alpha_e);
  const ManufacturedSolution exact(params);
  const Mesh mesh = build_two_square_mesh(n);
  const Discretization disc = Discretization::build(mesh, params);
  const SourceFields sources = exact.source_fields();
  const StateTrajectory traj =
      run_time_loop(disc, TimeGrid(t_final, dt), sources, exact.initial_fields(),
                    exact.boundary_fields(), TimeLoopOptions{consistent_initial_state});
  const EstimatorReport est = compute_estimators(disc, traj, sources);
  const ErrorReport err = error_norms(disc, traj, exact, est.eta_ok);

  ConvergenceRow row;
  row.n = n;
  row.h_max = mesh.max_diameter();
  row.ndof = disc.layout.total();
  row.err_d_linf = err.err_d_linf;
  row.err_J_linf = err.err_J_linf;
  row.err_u_l2 = err.err_u_l2;
  row.err_J_l2 = err.err_J_l2;
  row.err_e = err.err_e;
  row.E_d = est.E_d;
  row.E_d_dt = est.E_d_dt;
  row.E_J = est.E_J;
  row.E_up = est.E_up;
  row.eta_time = est.eta_time;
  row.eta_ok = est.eta_ok;
  row.i_eff = err.i_eff;
  row.div_u_l2 = err.div_u_l2;
  row.max_galerkin_residual = traj.max_galerkin_residual();
  row.max_solver_residual = traj.max_solver_residual();
  return row;
}

Vec2 to_vec2(const std::pair<double, double>& p) { return Vec2(p.first, p.second); }

}  // namespace

PYBIND11_MODULE(_stokes_mpe, m) {
  m.doc() = "Stokes/multi-network-poroelasticity solver with residual "
            "a posteriori error estimators";
  m.attr("__version__") = "0.1.0";

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_triangles", &Mesh::num_triangles)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("max_diameter", &Mesh::max_diameter)
      .def("dump", [](const Mesh& mesh) {
        std::ostringstream os;
        dump_mesh(mesh, os);
        return os.str();
      });

  m.def("build_two_square_mesh", &build_two_square_mesh, py::arg("n"));
  m.def("uniform_refine", &uniform_refine, py::arg("mesh"));
  m.def(
      "facet_counts",
      [](const Mesh& mesh) {
        const FacetSet f = classify_facets(mesh);
        py::dict d;
        d["interior_elastic"] = f.interior_elastic.size();
        d["interior_fluid"] = f.interior_fluid.size();
        d["interface"] = f.interface.size();
        d["dirichlet_d"] = f.dirichlet_d.size();
        d["dirichlet_u"] = f.dirichlet_u.size();
        return d;
      },
      py::arg("mesh"));

  py::class_<QuadratureRule>(m, "QuadratureRule")
      .def_property_readonly("points",
                             [](const QuadratureRule& r) {
                               std::vector<std::pair<double, double>> pts;
                               for (const Vec2& p : r.points)
                                 pts.emplace_back(p.x(), p.y());
                               return pts;
                             })
      .def_readonly("weights", &QuadratureRule::weights)
      .def_readonly("exactness_degree", &QuadratureRule::exactness_degree);
  m.def("quadrature_rule", &quadrature_rule, py::arg("order"));

  py::class_<ParameterSet>(m, "ParameterSet")
      .def_static("unit", &ParameterSet::unit, py::arg("num_networks") = 1,
                  py::arg("alpha_e") = 0.5)
      .def_readwrite("mu_el", &ParameterSet::mu_el)
      .def_readwrite("lambda_", &ParameterSet::lambda)
      .def_readwrite("mu_f", &ParameterSet::mu_f)
      .def_readwrite("alpha", &ParameterSet::alpha)
      .def_readwrite("c", &ParameterSet::c)
      .def_readwrite("kappa", &ParameterSet::kappa)
      .def_readwrite("mu", &ParameterSet::mu)
      .def_readwrite("beta_e", &ParameterSet::beta_e)
      .def("validate", &ParameterSet::validate);

  py::class_<ManufacturedSolution>(m, "ManufacturedSolution")
      .def(py::init<const ParameterSet&>(), py::arg("params"))
      .def_property_readonly("eta", &ManufacturedSolution::eta)
      .def("displacement",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x) {
             const Vec2 v = s.displacement(t, to_vec2(x));
             return std::make_pair(v.x(), v.y());
           })
      .def("pressure",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x) {
             double v;
             s.pressures(t, to_vec2(x), std::span<double>(&v, 1));
             return v;
           })
      .def("velocity",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x) {
             const Vec2 v = s.velocity(t, to_vec2(x));
             return std::make_pair(v.x(), v.y());
           })
      .def("stokes_pressure",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x) {
             return s.stokes_pressure(t, to_vec2(x));
           })
      .def("velocity_div",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x) {
             return s.velocity_div(t, to_vec2(x));
           })
      .def("verify_sources_fd",
           [](const ManufacturedSolution& s, double t,
              const std::pair<double, double>& x, double step) {
             const SourceCheck c = s.verify_sources_fd(t, to_vec2(x), step);
             py::dict d;
             d["max_relative"] = c.max_relative();
             d["div_residual"] = c.r_div_u;
             return d;
           },
           py::arg("t"), py::arg("x"), py::arg("step") = 1e-4)
      .def("interface_residuals",
           [](const ManufacturedSolution& s, double t, double y) {
             const InterfaceResiduals r = s.interface_residuals(t, y);
             py::dict d;
             d["total_stress"] = r.total_stress;
             d["normal_stress"] = r.normal_stress;
             d["normal_flux"] = r.normal_flux;
             d["tangential_stress"] = r.tangential_stress;
             return d;
           });

  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("levels", &StudyConfig::levels)
      .def_readwrite("n0", &StudyConfig::n0)
      .def_readwrite("dt", &StudyConfig::dt)
      .def_readwrite("t_final", &StudyConfig::t_final)
      .def_readwrite("alpha_e", &StudyConfig::alpha_e)
      .def_readwrite("out", &StudyConfig::out)
      .def_readwrite("format", &StudyConfig::format)
      .def_readwrite("include_eta_data", &StudyConfig::include_eta_data)
      .def_readwrite("consistent_initial_state",
                     &StudyConfig::consistent_initial_state);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("level", &ConvergenceRow::level)
      .def_readonly("n", &ConvergenceRow::n)
      .def_readonly("h_max", &ConvergenceRow::h_max)
      .def_readonly("ndof", &ConvergenceRow::ndof)
      .def_readonly("err_d_linf", &ConvergenceRow::err_d_linf)
      .def_readonly("err_J_linf", &ConvergenceRow::err_J_linf)
      .def_readonly("err_u_l2", &ConvergenceRow::err_u_l2)
      .def_readonly("err_J_l2", &ConvergenceRow::err_J_l2)
      .def_readonly("err_e", &ConvergenceRow::err_e)
      .def_readonly("E_d", &ConvergenceRow::E_d)
      .def_readonly("E_d_dt", &ConvergenceRow::E_d_dt)
      .def_readonly("E_J", &ConvergenceRow::E_J)
      .def_readonly("E_up", &ConvergenceRow::E_up)
      .def_readonly("eta_time", &ConvergenceRow::eta_time)
      .def_readonly("eta_ok", &ConvergenceRow::eta_ok)
      .def_readonly("i_eff", &ConvergenceRow::i_eff)
      .def_readonly("div_u_l2", &ConvergenceRow::div_u_l2)
      .def_readonly("max_galerkin_residual",
                    &ConvergenceRow::max_galerkin_residual)
      .def_readonly("wall_seconds", &ConvergenceRow::wall_seconds);

  m.def(
      "run_convergence_study",
      [](const StudyConfig& config, bool verbose) {
        return run_convergence_study(config, verbose ? &std::cout : nullptr);
      },
      py::arg("config"), py::arg("verbose") = false);
  m.def("solve_single", &solve_single, py::arg("n"), py::arg("dt") = 1e-7,
        py::arg("t_final") = 5e-7, py::arg("alpha_e") = 0.5,
        py::arg("consistent_initial_state") = true);
  m.def("emit_report", &emit_report, py::arg("rows"), py::arg("path"),
        py::arg("format"));
  m.def("observed_rate", &observed_rate, py::arg("coarse"), py::arg("fine"));
}
