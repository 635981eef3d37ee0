#include "dfpower/analysis.hpp"
#include "dfpower/degroot.hpp"
#include "dfpower/dynamics.hpp"
#include "dfpower/error.hpp"
#include "dfpower/periodic.hpp"
#include "dfpower/program_io.hpp"
#include "dfpower/topology.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace dfpower;

namespace {

PyObject* g_error_type = nullptr;

PowerVector as_state(const Vector& x) { return PowerVector::from_values(x); }

Matrix stack_states(const Trajectory& traj) {
  const Index n = traj.states.front().size();
  Matrix out(static_cast<Index>(traj.states.size()), n);
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out.row(static_cast<Index>(s)) = traj.states[s].values().transpose();
  }
  return out;
}

InitialCondition initial_from(const py::object& x0, Index n) {
  if (py::isinstance<py::int_>(x0)) return InitialCondition::vertex(n, x0.cast<Index>());
  if (py::isinstance<InitialCondition>(x0)) return x0.cast<InitialCondition>();
  return InitialCondition::values(x0.cast<Vector>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DeGroot-Friedkin social power evolution: core routines";

  g_error_type = PyErr_NewException("dfpower.DfPowerError", PyExc_RuntimeError, nullptr);
  m.add_object("DfPowerError", py::handle(g_error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(g_error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(g_error_type, inst.ptr());
    }
  });

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("row_sum", &Tolerances::row_sum)
      .def_readwrite("structural_zero", &Tolerances::structural_zero)
      .def_readwrite("eigenvector", &Tolerances::eigenvector)
      .def_readwrite("vertex_guard", &Tolerances::vertex_guard)
      .def_readwrite("near_vertex", &Tolerances::near_vertex)
      .def_readwrite("star", &Tolerances::star)
      .def_readwrite("max_issues", &Tolerances::max_issues);

  py::class_<InteractionMatrix>(m, "InteractionMatrix")
      .def(py::init([](const Matrix& raw, const Tolerances& tol) {
             return InteractionMatrix::validate(raw, tol);
           }),
           py::arg("entries"), py::arg("tol") = Tolerances{})
      .def_property_readonly("entries", &InteractionMatrix::entries)
      .def_property_readonly("size", &InteractionMatrix::size);

  m.def("validate", &InteractionMatrix::validate, py::arg("entries"),
        py::arg("tol") = Tolerances{}, "Checks the matrix and returns an InteractionMatrix.");
  m.def("is_irreducible", &is_irreducible, py::arg("m"), py::arg("structural_zero") = 1e-15);
  m.def(
      "classify_star",
      [](const InteractionMatrix& c) {
        const auto s = classify_star(c);
        return py::make_tuple(s.is_star, s.center ? py::cast(*s.center) : py::none());
      },
      py::arg("c"), "(is_star, center) with a 0-based center.");

  py::class_<DominantLeftEigenvector>(m, "DominantLeftEigenvector")
      .def_readonly("gamma", &DominantLeftEigenvector::gamma)
      .def_readonly("residual", &DominantLeftEigenvector::residual)
      .def_readonly("iterations", &DominantLeftEigenvector::iterations)
      .def_readonly("damped", &DominantLeftEigenvector::damped);
  m.def("dominant_left_eigenvector", &dominant_left_eigenvector, py::arg("c"),
        py::arg("tol") = Tolerances{});

  py::class_<ConstantSignal>(m, "ConstantSignal")
      .def(py::init<Index>(), py::arg("index") = 0)
      .def_readwrite("index", &ConstantSignal::index);
  py::class_<PeriodicSignal>(m, "PeriodicSignal")
      .def(py::init<std::vector<Index>>(), py::arg("order"))
      .def_readwrite("order", &PeriodicSignal::order);
  py::class_<ScriptedSignal>(m, "ScriptedSignal")
      .def(py::init<std::vector<Index>>(), py::arg("sequence"))
      .def_readwrite("sequence", &ScriptedSignal::sequence);
  py::class_<RandomSignal>(m, "RandomSignal")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_readwrite("seed", &RandomSignal::seed);

  py::class_<TopologyProgram>(m, "TopologyProgram")
      .def(py::init<std::vector<InteractionMatrix>, SwitchingSignal>(), py::arg("matrices"),
           py::arg("signal") = SwitchingSignal{ConstantSignal{0}})
      .def_property_readonly("size", &TopologyProgram::size)
      .def_property_readonly("dimension", &TopologyProgram::dimension)
      .def_property_readonly("matrices", &TopologyProgram::matrices)
      .def_property_readonly("signal", &TopologyProgram::signal)
      .def_property_readonly("gammas", &TopologyProgram::gammas)
      .def("index_at", &TopologyProgram::index_at, py::arg("s"))
      .def("realize", &TopologyProgram::realize, py::arg("count"))
      .def("with_signal", &TopologyProgram::with_signal, py::arg("signal"));
  m.def("max_gamma_profile", &max_gamma_profile, py::arg("program"));
  m.def("load_program", &load_program, py::arg("path"));
  m.def("save_program", &save_program, py::arg("program"), py::arg("path"));
  m.def("parse_program", &parse_program, py::arg("text"), py::arg("source") = "<string>");
  m.def("format_program", &format_program, py::arg("program"));

  py::class_<PowerVector>(m, "PowerVector")
      .def_static("from_values", &PowerVector::from_values, py::arg("x"))
      .def_static("vertex", &PowerVector::vertex, py::arg("n"), py::arg("i"))
      .def_property_readonly("is_vertex", &PowerVector::is_vertex)
      .def_property_readonly("vertex_index", &PowerVector::vertex_index)
      .def_property_readonly("values", &PowerVector::values);
  py::class_<InitialCondition>(m, "InitialCondition")
      .def_static("values", &InitialCondition::values, py::arg("x0"))
      .def_static("vertex", &InitialCondition::vertex, py::arg("n"), py::arg("i"))
      .def_property_readonly("state", &InitialCondition::state);

  m.def("alpha", &alpha, py::arg("x"), py::arg("gamma"));
  m.def("alpha", [](const Vector& x, const Vector& g) { return alpha(as_state(x), g); },
        py::arg("x"), py::arg("gamma"));
  m.def("df_map", &df_map, py::arg("x"), py::arg("gamma"), py::arg("tol") = Tolerances{});
  m.def(
      "df_map",
      [](const Vector& x, const Vector& g, const Tolerances& tol) {
        return df_map(as_state(x), g, tol).values();
      },
      py::arg("x"), py::arg("gamma"), py::arg("tol") = Tolerances{});

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("states", &stack_states, "(S + 1) x n array of x(0)..x(S)")
      .def_readonly("signal_log", &Trajectory::signal_log)
      .def_property_readonly("issues", &Trajectory::issues)
      .def("state", [](const Trajectory& t, Index s) { return t.states.at(s); }, py::arg("s"));
  m.def(
      "simulate",
      [](const TopologyProgram& program, const py::object& x0, Index issues,
         const Tolerances& tol) {
        return simulate(program, initial_from(x0, program.dimension()), issues, tol);
      },
      py::arg("program"), py::arg("x0"), py::arg("issues"), py::arg("tol") = Tolerances{},
      "x0 is an array, an InitialCondition, or an int naming a 0-based vertex.");
  m.def("limit_gap", &limit_gap, py::arg("a"), py::arg("b"));

  py::class_<FixedPointResult>(m, "FixedPointResult")
      .def_readonly("x", &FixedPointResult::x)
      .def_readonly("issues", &FixedPointResult::issues)
      .def_readonly("residual", &FixedPointResult::residual);
  m.def("fixed_point", &fixed_point, py::arg("gamma"), py::arg("step_tol") = 1e-13,
        py::arg("tol") = Tolerances{});

  m.def(
      "jacobian",
      [](const Vector& x_now, const Vector& x_next) {
        return jacobian(as_state(x_now), as_state(x_next)).j;
      },
      py::arg("x_now"), py::arg("x_next"));

  py::class_<ContractionReport>(m, "ContractionReport")
      .def_readonly("x", &ContractionReport::x)
      .def_readonly("theta", &ContractionReport::theta)
      .def_readonly("phi", &ContractionReport::phi)
      .def_readonly("h", &ContractionReport::h)
      .def_readonly("h_one_norm", &ContractionReport::h_one_norm)
      .def_readonly("margin", &ContractionReport::margin)
      .def_readonly("phi_eigs", &ContractionReport::phi_eigs)
      .def_readonly("h_eigs", &ContractionReport::h_eigs)
      .def_readonly("h_trace", &ContractionReport::h_trace)
      .def_readonly("certified", &ContractionReport::certified)
      .def("structure_violations", &structure_violations);
  m.def(
      "transform_chain",
      [](const Vector& x, const Tolerances& tol) { return transform_chain(as_state(x), tol); },
      py::arg("x_next"), py::arg("tol") = Tolerances{});

  m.def("contraction_radii", &contraction_radii, py::arg("gamma"), py::arg("tol") = Tolerances{});
  m.def("equilibrium_upper_bound", &equilibrium_upper_bound, py::arg("gamma"),
        py::arg("tol") = Tolerances{});
  m.def("convergence_rate", &convergence_rate, py::arg("gammas"));
  m.def(
      "vertex_stability",
      [](const Vector& gamma, Index i) {
        const auto v = vertex_stability(gamma, i);
        return py::make_tuple(to_string(v.kind), v.eigenvalue);
      },
      py::arg("gamma"), py::arg("i"), "(classification, eigenvalue) for the 0-based vertex i.");

  m.def("build_w", [](const Vector& x, const InteractionMatrix& c) {
    return build_w(as_state(x), c);
  }, py::arg("x"), py::arg("c"));
  m.def("appraisal_step_via_zeta", [](const Vector& x, const InteractionMatrix& c) {
    return appraisal_step_via_zeta(as_state(x), c).values();
  }, py::arg("x"), py::arg("c"));

  py::class_<PeriodicProgram>(m, "PeriodicProgram")
      .def_static("from_program", &PeriodicProgram::from_program, py::arg("program"),
                  py::arg("tol") = Tolerances{})
      .def_property_readonly("period", &PeriodicProgram::period)
      .def_property_readonly("phase_gammas", &PeriodicProgram::phase_gammas)
      .def("outgoing_phase", &PeriodicProgram::outgoing_phase, py::arg("p"));
  py::class_<PeriodicLimit>(m, "PeriodicLimit")
      .def_readonly("fixed_points", &PeriodicLimit::fixed_points)
      .def_readonly("chain_residuals", &PeriodicLimit::chain_residuals)
      .def_readonly("fixed_residuals", &PeriodicLimit::fixed_residuals)
      .def_readonly("iterations", &PeriodicLimit::iterations);
  m.def("periodic_fixed_points", &periodic_fixed_points, py::arg("program"),
        py::arg("tol") = 1e-13, py::arg("tols") = Tolerances{});
}
