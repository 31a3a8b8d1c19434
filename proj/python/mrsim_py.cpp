#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <tuple>

#include "mrsim/controller.hpp"
#include "mrsim/error.hpp"
#include "mrsim/hemodynamics.hpp"
#include "mrsim/magnetics.hpp"
#include "mrsim/path_geometry.hpp"
#include "mrsim/safety.hpp"
#include "mrsim/sim_engine.hpp"
#include "mrsim/telemetry_io.hpp"

namespace py = pybind11;
using namespace mrsim;

namespace {

using Triple = std::array<double, 3>;

Vec3 to_vec(const Triple& a) { return {a[0], a[1], a[2]}; }
Triple from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

DragMode drag_mode_from(const std::string& name) {
    if (name == "paper-linear") return DragMode::PaperLinear;
    if (name == "quadratic") return DragMode::Quadratic;
    throw Error(ErrorKind::InvalidValue, "drag mode must be paper-linear or quadratic");
}

struct PyPath {
    explicit PyPath(const std::vector<std::tuple<double, double, double, double>>& waypoints)
        : path(build(waypoints)) {}

    static CenterlinePath build(const std::vector<std::tuple<double, double, double, double>>& waypoints) {
        std::vector<Waypoint> wps;
        wps.reserve(waypoints.size());
        for (const auto& [t, x, y, z] : waypoints) wps.push_back({t, x, y, z});
        return CenterlinePath::from_waypoints(wps);
    }

    std::tuple<Triple, Triple, Triple> evaluate(double t) const {
        const PathPoint p = path.evaluate(t);
        return {from_vec(p.position), from_vec(p.first_derivative), from_vec(p.second_derivative)};
    }

    py::dict discretize(double step) const {
        const auto samples = path.discretize(step);
        py::list t, px, pyl, pz, k, arc;
        for (const auto& s : samples) {
            t.append(s.t);
            px.append(s.position.x);
            pyl.append(s.position.y);
            pz.append(s.position.z);
            k.append(s.curvature);
            arc.append(s.arc_length);
        }
        py::dict d;
        d["t"] = t;
        d["x"] = px;
        d["y"] = pyl;
        d["z"] = pz;
        d["curvature"] = k;
        d["arc_length"] = arc;
        return d;
    }

    CenterlinePath path;
};

struct PyPid {
    explicit PyPid(double kp, double ki, double kd, double kr, double delta) {
        gains = ControllerGains{kp, ki, kd, kr, delta};
        gains.validate();
    }

    std::tuple<Triple, Triple, Triple> step(const Triple& error_v) {
        const PidTerms terms = pid_step(state, to_vec(error_v), gains);
        return {from_vec(terms.pf), from_vec(terms.pi), from_vec(terms.pd)};
    }

    void reset() { state = ControllerState{}; }

    ControllerGains gains;
    ControllerState state;
};

py::dict run_scenario_file(const std::string& config_path) {
    const ScenarioConfig config = parse_config(config_path);
    const RunResult result = run_scenario(config);

    py::dict records;
    py::list time, pcx, pcy, pcz, gx, gy, gz, k, vblood, fixture_ok;
    for (const auto& r : result.records) {
        time.append(r.time);
        pcx.append(r.position.x);
        pcy.append(r.position.y);
        pcz.append(r.position.z);
        gx.append(r.gradient.x);
        gy.append(r.gradient.y);
        gz.append(r.gradient.z);
        k.append(r.curvature);
        vblood.append(r.blood_speed);
        fixture_ok.append(r.fixture_ok);
    }
    records["time_s"] = time;
    records["pcx"] = pcx;
    records["pcy"] = pcy;
    records["pcz"] = pcz;
    records["gx"] = gx;
    records["gy"] = gy;
    records["gz"] = gz;
    records["k"] = k;
    records["vblood"] = vblood;
    records["fixture_ok"] = fixture_ok;

    py::dict out;
    out["completed"] = result.completed;
    out["end_time_s"] = result.end_time;
    out["final_position"] = from_vec(result.final_position);
    out["records"] = records;
    out["command_count"] = result.commands.size();
    out["fixture_violations"] = result.fixture_violations.size();
    if (result.slew) {
        out["slew_max"] = Triple{result.slew->max_abs[0], result.slew->max_abs[1], result.slew->max_abs[2]};
        out["slew_pass"] = result.slew->pass;
    } else {
        out["slew_pass"] = true;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(mrsim, m) {
    m.doc() = "Closed-loop simulator of an MRI-gradient-propelled sphere in vessel-like channels";

    py::register_exception<Error>(m, "SimError");

    m.def("sphere_volume", &sphere_volume, py::arg("radius"));
    m.def("magnetic_moment", &magnetic_moment, py::arg("magnetization"), py::arg("volume"));
    m.def(
        "magnetic_force",
        [](double magnetization, const Triple& gradient, double volume) {
            return from_vec(magnetic_force(magnetization, to_vec(gradient), volume));
        },
        py::arg("magnetization"), py::arg("gradient"), py::arg("volume"));
    m.def(
        "curvature",
        [](const Triple& d1, const Triple& d2) { return curvature(to_vec(d1), to_vec(d2)); },
        py::arg("first_derivative"), py::arg("second_derivative"));
    m.def(
        "drag_force",
        [](double cd, double density, double area, const Triple& v_blood, const Triple& v_sphere,
           const std::string& mode) {
            return from_vec(drag_force(cd, density, area, to_vec(v_blood), to_vec(v_sphere), drag_mode_from(mode)));
        },
        py::arg("drag_coefficient"), py::arg("density"), py::arg("reference_area"), py::arg("v_blood"),
        py::arg("v_sphere"), py::arg("mode") = "paper-linear");
    m.def(
        "velocity_setpoint",
        [](double v0, double k0, double r0, double r_gc, double curvature, double sphere_radius, double v_min) {
            return velocity_setpoint(VelocityProfileParams{v0, k0, r0, r_gc, v_min}, curvature, sphere_radius);
        },
        py::arg("v0"), py::arg("k0"), py::arg("r0"), py::arg("r_gc"), py::arg("curvature"),
        py::arg("sphere_radius"), py::arg("v_min") = 1e-4);
    m.def(
        "velocity_error",
        [](const Triple& vc, const Triple& vs, const Triple& pc, const Triple& ps, double kr) {
            return from_vec(velocity_error(to_vec(vc), to_vec(vs), to_vec(pc), to_vec(ps), kr));
        },
        py::arg("v_current"), py::arg("v_setpoint"), py::arg("p_current"), py::arg("p_setpoint"), py::arg("kr"));
    m.def(
        "feedforward",
        [](double cd, double density, double area, const Triple& v_blood, const std::string& mode) {
            return from_vec(feedforward(cd, density, area, to_vec(v_blood), drag_mode_from(mode)));
        },
        py::arg("drag_coefficient"), py::arg("density"), py::arg("reference_area"), py::arg("v_blood"),
        py::arg("mode") = "paper-linear");
    m.def("slew_rate", &slew_rate, py::arg("g_prev"), py::arg("g_next"), py::arg("rise_time"),
          py::arg("isocenter_distance"));

    py::class_<PyPath>(m, "CenterlinePath")
        .def(py::init<const std::vector<std::tuple<double, double, double, double>>&>(), py::arg("waypoints"))
        .def("evaluate", &PyPath::evaluate, py::arg("t"))
        .def("discretize", &PyPath::discretize, py::arg("step"));

    py::class_<PyPid>(m, "PidController")
        .def(py::init<double, double, double, double, double>(), py::arg("kp") = 2.0, py::arg("ki") = 1.0,
             py::arg("kd") = 0.01, py::arg("kr") = 0.7, py::arg("delta") = 0.1)
        .def("step", &PyPid::step, py::arg("error_v"))
        .def("reset", &PyPid::reset);

    m.def("run_scenario", &run_scenario_file, py::arg("config_path"),
          "Run a scenario config file and return telemetry and safety summaries");
}
