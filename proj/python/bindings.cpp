#include <qsc/runlog.hpp>
#include <qsc/verify.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qsc;

namespace {

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["name"] = m.name;
    d["settling_time"] = m.settling_time;
    d["ss_max_s"] = m.ss_max_s;
    d["peak_torque"] = m.peak_torque;
    d["torque_integral"] = m.torque_integral;
    d["unwinding_ratio"] = m.unwinding_ratio;
    d["bl_hit_time"] = m.bl_hit_time;
    d["bl_exit_count"] = m.bl_exit_count;
    d["s_delta_max_after_hit"] = m.s_delta_max_after_hit;
    d["switch_count"] = m.switch_count;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quaternion sliding-mode attitude control core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);

    py::class_<UnitQuaternion>(m, "UnitQuaternion")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("w"), py::arg("x"),
             py::arg("y"), py::arg("z"))
        .def_property_readonly("w", &UnitQuaternion::w)
        .def_property_readonly("vec", [](const UnitQuaternion& q) { return Vec3(q.vec()); })
        .def("as_vec", &UnitQuaternion::as_vec)
        .def("negated", &UnitQuaternion::negated)
        .def("__repr__", [](const UnitQuaternion& q) {
            return "UnitQuaternion(" + std::to_string(q.w()) + ", " +
                   std::to_string(q.vec()[0]) + ", " + std::to_string(q.vec()[1]) + ", " +
                   std::to_string(q.vec()[2]) + ")";
        });

    m.def("sgn_plus", &sgn_plus, py::arg("x"));
    m.def("qmul", &qmul, py::arg("p"), py::arg("q"));
    m.def("conjugate", &conjugate, py::arg("q"));
    m.def("error_quaternion", &error_quaternion, py::arg("q_d"), py::arg("q"));
    m.def("to_rotation", &to_rotation, py::arg("q"));
    m.def("from_axis_angle", &from_axis_angle, py::arg("axis"), py::arg("angle"));

    m.def(
        "s_proposed",
        [](const UnitQuaternion& q_e, const Vec3& omega_e, double lam) {
            const SlidingValue v = s_proposed(q_e, omega_e, SlidingConfig{lam});
            return py::make_tuple(v.s, v.branch);
        },
        py::arg("q_e"), py::arg("omega_e"), py::arg("lambda_") = 2.0,
        "Sliding value and branch for the closed-positive-branch variable");
    m.def(
        "omega_r",
        [](const UnitQuaternion& q_e, const Vec3& omega_d, double lam) {
            return omega_r(q_e, omega_d, SlidingConfig{lam});
        },
        py::arg("q_e"), py::arg("omega_d"), py::arg("lambda_") = 2.0);
    m.def("qe_vec_rate", &qe_vec_rate, py::arg("q_e"), py::arg("omega"), py::arg("omega_d"));

    m.def("param_matrix", &param_matrix, py::arg("a"));
    m.def("matrix_params", &matrix_params, py::arg("j"));
    m.def("regressor", &regressor, py::arg("omega"), py::arg("omega_r_dot"));

    m.def(
        "simulate_config",
        [](const std::string& text) {
            const Scenario sc = parse_scenario(text);
            const RunLog log = run_scenario(sc);
            return metrics_dict(compute_metrics(log));
        },
        py::arg("text"),
        "Parse a scenario config, run it, and return its metrics as a dict");

    m.def(
        "simulate_config_to_csv",
        [](const std::string& text, const std::string& csv_path) {
            const Scenario sc = parse_scenario(text);
            const RunLog log = run_scenario(sc);
            emit_csv(log, csv_path);
            return metrics_dict(compute_metrics(log));
        },
        py::arg("text"), py::arg("csv_path"));

    m.def(
        "verify_report",
        []() {
            const VerifyReport r = verify();
            py::list checks;
            for (const auto& c : r.checks) {
                py::dict d;
                d["name"] = c.name;
                d["value"] = c.value;
                d["lo"] = c.lo;
                d["hi"] = c.hi;
                d["pass"] = c.pass;
                checks.append(d);
            }
            py::dict out;
            out["all_pass"] = r.all_pass();
            out["checks"] = checks;
            return out;
        },
        "Run the numerical oracle suite");
}
