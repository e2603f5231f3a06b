#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fmr/oracle.hpp"
#include "fmr/presets.hpp"
#include "fmr/solver.hpp"
#include "fmr/sweep.hpp"

namespace py = pybind11;
using namespace fmr;

namespace
{

std::string repr(const Interval &a)
{
    std::ostringstream os;
    os.precision(17);
    os << "Interval" << a;
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Interval branch-and-bound resonance fields";

    py::class_<Interval>(m, "Interval")
        .def(py::init<double>())
        .def(py::init<double, double>())
        .def_static("empty", &Interval::empty)
        .def_static("unbounded", &Interval::unbounded)
        .def_property_readonly("lo", &Interval::lo)
        .def_property_readonly("hi", &Interval::hi)
        .def_property_readonly("is_empty", &Interval::is_empty)
        .def_property_readonly("is_unbounded", &Interval::is_unbounded)
        .def("width", [](const Interval &a) { return width(a); })
        .def("midpoint", [](const Interval &a) { return midpoint(a); })
        .def("contains", [](const Interval &a, double x) { return contains(a, x); })
        .def("bisect", [](const Interval &a) { return bisect(a); })
        .def("__add__", [](const Interval &a, const Interval &b) { return a + b; })
        .def("__sub__", [](const Interval &a, const Interval &b) { return a - b; })
        .def("__mul__", [](const Interval &a, const Interval &b) { return a * b; })
        .def("__truediv__", [](const Interval &a, const Interval &b) { return a / b; })
        .def("__neg__", [](const Interval &a) { return -a; })
        .def("__eq__", [](const Interval &a, const Interval &b) { return a == b; })
        .def("__repr__", &repr);
    m.def("sqr", [](const Interval &a) { return sqr(a); });
    m.def("sin", [](const Interval &a) { return sin(a); });
    m.def("cos", [](const Interval &a) { return cos(a); });
    m.def("hull", &hull);
    m.def("intersect", &intersect);

    py::class_<MaterialParams>(m, "MaterialParams")
        .def(py::init([](double freq_ghz, double g, double four_pi_ms, double k_u, double k_4) {
                 return MaterialParams::from_frequency_ghz(freq_ghz, g, four_pi_ms, k_u, k_4);
             }),
             py::arg("freq_ghz") = 9.243, py::arg("g") = 2.0, py::arg("four_pi_ms") = 6400.0, py::arg("k_u") = 0.0,
             py::arg("k_4") = 0.0)
        .def_readwrite("g", &MaterialParams::g)
        .def_readwrite("four_pi_ms", &MaterialParams::four_pi_ms)
        .def_readwrite("k_u", &MaterialParams::k_u)
        .def_readwrite("k_4", &MaterialParams::k_4)
        .def_readwrite("omega_exp", &MaterialParams::omega_exp)
        .def("target_omega_over_gamma_sq", &MaterialParams::target_omega_over_gamma_sq);

    py::class_<FieldDirection>(m, "FieldDirection")
        .def(py::init<double, double>(), py::arg("theta_h"), py::arg("phi_h") = 0.0)
        .def_static("from_degrees", &FieldDirection::from_degrees, py::arg("theta_deg"), py::arg("phi_deg") = 0.0)
        .def_property_readonly("theta_h", &FieldDirection::theta_h)
        .def_property_readonly("phi_h", &FieldDirection::phi_h)
        .def_property_readonly("axial", &FieldDirection::axial);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("h_max", &SolverConfig::h_max)
        .def_readwrite("tol_angle", &SolverConfig::tol_angle)
        .def_readwrite("tol_field", &SolverConfig::tol_field)
        .def_readwrite("max_list", &SolverConfig::max_list)
        .def_readwrite("glue_gap", &SolverConfig::glue_gap);

    py::enum_<ResonanceStatus>(m, "ResonanceStatus")
        .value("resonance", ResonanceStatus::resonance)
        .value("indeterminate", ResonanceStatus::indeterminate);

    py::class_<ResonanceResult>(m, "ResonanceResult")
        .def_readonly("h_res", &ResonanceResult::h_res)
        .def_readonly("theta_hull", &ResonanceResult::theta_hull)
        .def_readonly("phi_hull", &ResonanceResult::phi_hull)
        .def_readonly("status", &ResonanceResult::status)
        .def_readonly("boxes_merged", &ResonanceResult::boxes_merged);

    py::register_exception<ListOverflow>(m, "ListOverflow", PyExc_RuntimeError);
    py::register_exception<oracle::BranchJump>(m, "BranchJump", PyExc_RuntimeError);
    py::register_exception<SweepOverflow>(m, "SweepOverflow", PyExc_RuntimeError);

    // The solver holds no Python objects; let other threads run meanwhile.
    m.def("solve_orientation", &solve_orientation, py::arg("direction"), py::arg("params"),
          py::arg("config") = SolverConfig{}, py::call_guard<py::gil_scoped_release>());

    py::class_<oracle::OracleRoot>(m, "OracleRoot")
        .def_readonly("h_res", &oracle::OracleRoot::h_res)
        .def_readonly("theta_eq", &oracle::OracleRoot::theta_eq)
        .def_readonly("phi_eq", &oracle::OracleRoot::phi_eq)
        .def_readonly("omega_residual", &oracle::OracleRoot::omega_residual)
        .def_readonly("branch", &oracle::OracleRoot::branch)
        .def_readonly("bracket_lo", &oracle::OracleRoot::bracket_lo)
        .def_readonly("bracket_hi", &oracle::OracleRoot::bracket_hi);
    m.def(
        "oracle_scan",
        [](const FieldDirection &dir, const MaterialParams &p, double h_max, double step) {
            return oracle::scan_resonances(dir, p, h_max, step);
        },
        py::arg("direction"), py::arg("params"), py::arg("h_max") = 10000.0, py::arg("step") = 0.5,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "oracle_equilibrium",
        [](const FieldDirection &dir, const MaterialParams &p, double h) {
            py::list out;
            for (const auto &e : oracle::equilibrium(dir, p, h)) {
                out.append(py::make_tuple(e.theta, e.phi));
            }
            return out;
        },
        py::arg("direction"), py::arg("params"), py::arg("h"));

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("theta_start", &SweepSpec::theta_start)
        .def_readwrite("theta_stop", &SweepSpec::theta_stop)
        .def_readwrite("theta_step", &SweepSpec::theta_step)
        .def_readwrite("phi_ext", &SweepSpec::phi_ext)
        .def_readwrite("params", &SweepSpec::params)
        .def_readwrite("config", &SweepSpec::cfg)
        .def_readwrite("run_oracle", &SweepSpec::run_oracle)
        .def_readwrite("threads", &SweepSpec::threads)
        .def("orientations", &SweepSpec::orientations);

    py::class_<OrientationReport>(m, "OrientationReport")
        .def_readonly("theta_ext_deg", &OrientationReport::theta_ext_deg)
        .def_readonly("results", &OrientationReport::results)
        .def_readonly("oracle_roots", &OrientationReport::oracle_roots)
        .def_readonly("oracle_jump", &OrientationReport::oracle_jump)
        .def_readonly("seconds", &OrientationReport::seconds);

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("orientations", &SweepReport::orientations)
        .def_readonly("wall_seconds", &SweepReport::wall_seconds)
        .def("to_csv", [](const SweepReport &r) {
            std::ostringstream os;
            write_csv(r, os);
            return os.str();
        })
        .def("to_svg", [](const SweepReport &r) {
            std::ostringstream os;
            write_svg(r, os);
            return os.str();
        });
    m.def("run_sweep", &run_sweep, py::arg("spec"), py::call_guard<py::gil_scoped_release>());
    m.def("parse_csv", [](const std::string &text) {
        std::istringstream in(text);
        return parse_csv(in);
    });

    m.def(
        "preset",
        [](int id) { return preset(id).params(); }, py::arg("id"),
        "MaterialParams of one of the twelve shipped (K_u, K_4) sets, ids 1..12.");
    m.def("preset_ids", [] {
        std::vector<int> ids;
        for (const auto &p : presets()) {
            ids.push_back(p.id);
        }
        return ids;
    });
}
