#include "mrsim/telemetry_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, where + ": bad number '" + value + "'");
    }
}

Vec3 parse_vec3(const std::string& value, const std::string& where) {
    std::stringstream ss(value);
    std::string part;
    Vec3 v;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3) throw Error(ErrorKind::ConfigError, where + ": expected 3 comma-separated values");
        v[i++] = parse_double(strip(part), where);
    }
    if (i != 3) throw Error(ErrorKind::ConfigError, where + ": expected 3 comma-separated values");
    return v;
}

std::string format_g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

ScenarioConfig parse_config_stream(std::istream& in, const std::string& origin, const std::string& base_dir) {
    ScenarioConfig config;
    std::set<std::string> seen;
    bool have_duration = false;

    auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        if (p.is_absolute() || base_dir.empty()) return rel;
        return (std::filesystem::path(base_dir) / p).string();
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        const std::size_t colon = s.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": expected 'key: value'");
        }
        const std::string key = strip(s.substr(0, colon));
        const std::string value = strip(s.substr(colon + 1));
        const std::string where = origin + ":" + std::to_string(lineno) + " (" + key + ")";
        if (value.empty()) {
            throw Error(ErrorKind::ConfigError, where + ": missing value");
        }
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::ConfigError, where + ": duplicate key");
        }

        if (key == "waypoints") {
            config.waypoint_file = resolve(value);
        } else if (key == "path_step") {
            config.path_step = parse_double(value, where);
        } else if (key == "duration_s") {
            config.duration = parse_double(value, where);
            have_duration = true;
        } else if (key == "dt_ms") {
            config.dt = parse_double(value, where) * 1e-3;
        } else if (key == "tp_ms") {
            config.tp = parse_double(value, where) * 1e-3;
        } else if (key == "delta_s") {
            config.gains.delta = parse_double(value, where);
            config.limits.refresh_interval = config.gains.delta;
        } else if (key == "flow_regime") {
            if (value == "steady") config.flow_regime = FlowRegime::Steady;
            else if (value == "normal") config.flow_regime = FlowRegime::Normal;
            else if (value == "fast") config.flow_regime = FlowRegime::Fast;
            else throw Error(ErrorKind::ConfigError, where + ": expected steady|normal|fast");
        } else if (key == "mean_flow_ml_per_s") {
            config.mean_flow = parse_double(value, where) * 1e-6;
        } else if (key == "heart_rate_bpm") {
            config.heart_rate_bpm = parse_double(value, where);
        } else if (key == "waveform_file") {
            config.waveform_file = resolve(value);
        } else if (key == "blood_density_kg_per_m3") {
            config.blood_density = parse_double(value, where);
        } else if (key == "drag_mode") {
            if (value == "paper-linear") config.drag_mode = DragMode::PaperLinear;
            else if (value == "quadratic") config.drag_mode = DragMode::Quadratic;
            else throw Error(ErrorKind::ConfigError, where + ": expected paper-linear|quadratic");
        } else if (key == "vessel_radius_mm") {
            config.vessel.radius = parse_double(value, where) * 1e-3;
        } else if (key == "sphere_radius_mm") {
            config.sphere.radius = parse_double(value, where) * 1e-3;
        } else if (key == "magnetization_a_per_m") {
            config.sphere.magnetization = parse_double(value, where);
        } else if (key == "material_density_kg_per_m3") {
            config.sphere.material_density = parse_double(value, where);
        } else if (key == "drag_coefficient") {
            config.sphere.drag_coefficient = parse_double(value, where);
        } else if (key == "gravity") {
            if (value == "on") config.include_gravity = true;
            else if (value == "off") config.include_gravity = false;
            else throw Error(ErrorKind::ConfigError, where + ": expected on|off");
        } else if (key == "kp") {
            config.gains.kp = parse_double(value, where);
        } else if (key == "ki") {
            config.gains.ki = parse_double(value, where);
        } else if (key == "kd") {
            config.gains.kd = parse_double(value, where);
        } else if (key == "kr") {
            config.gains.kr = parse_double(value, where);
        } else if (key == "controller_mode") {
            if (value == "paper") config.controller_mode = ControllerMode::Paper;
            else if (value == "dimensional") config.controller_mode = ControllerMode::Dimensional;
            else throw Error(ErrorKind::ConfigError, where + ": expected paper|dimensional");
        } else if (key == "anti_windup") {
            if (value == "on") config.anti_windup = true;
            else if (value == "off") config.anti_windup = false;
            else throw Error(ErrorKind::ConfigError, where + ": expected on|off");
        } else if (key == "setpoint_window") {
            const double v = parse_double(value, where);
            if (v < 1.0 || v != std::floor(v)) {
                throw Error(ErrorKind::ConfigError, where + ": expected a positive integer");
            }
            config.setpoint_window = static_cast<std::size_t>(v);
        } else if (key == "v0_m_per_s") {
            config.profile.v0 = parse_double(value, where);
        } else if (key == "k0_per_m") {
            config.profile.k0 = parse_double(value, where);
        } else if (key == "r0_m") {
            config.profile.r0 = parse_double(value, where);
        } else if (key == "r_gc_mm") {
            config.profile.r_gc = parse_double(value, where) * 1e-3;
        } else if (key == "v_min_m_per_s") {
            config.profile.v_min = parse_double(value, where);
        } else if (key == "gradient_limit_t_per_m") {
            config.limits.max_amplitude = parse_double(value, where);
        } else if (key == "slew_limit_t_per_s") {
            config.slew.limit = parse_double(value, where);
        } else if (key == "rise_time_ms") {
            config.slew.rise_time = parse_double(value, where) * 1e-3;
        } else if (key == "isocenter_distance_m") {
            config.slew.isocenter_distance = parse_double(value, where);
        } else if (key == "initial_offset_mm") {
            config.initial_offset = parse_vec3(value, where) * 1e-3;
        } else if (key == "capture_radius_factor") {
            config.capture_radius_factor = parse_double(value, where);
        } else {
            throw Error(ErrorKind::ConfigError, where + ": unknown key");
        }
    }

    if (config.waypoint_file.empty()) {
        throw Error(ErrorKind::ConfigError, origin + ": missing required key 'waypoints'");
    }
    if (!have_duration) {
        throw Error(ErrorKind::ConfigError, origin + ": missing required key 'duration_s'");
    }
    config.validate();
    return config;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
    }
    return parse_config_stream(in, path, std::filesystem::path(path).parent_path().string());
}

void echo_config(const ScenarioConfig& c, std::ostream& out) {
    out << "waypoints: " << c.waypoint_file << '\n'
        << "path_step: " << format_g9(c.path_step) << '\n'
        << "duration_s: " << format_g9(c.duration) << '\n'
        << "dt_ms: " << format_g9(c.dt * 1e3) << '\n'
        << "tp_ms: " << format_g9(c.tp * 1e3) << '\n'
        << "delta_s: " << format_g9(c.gains.delta) << '\n'
        << "flow_regime: "
        << (c.flow_regime == FlowRegime::Steady ? "steady" : (c.flow_regime == FlowRegime::Normal ? "normal" : "fast"))
        << '\n'
        << "mean_flow_ml_per_s: " << format_g9(c.mean_flow * 1e6) << '\n'
        << "heart_rate_bpm: " << format_g9(c.heart_rate_bpm) << '\n';
    if (c.waveform_file) out << "waveform_file: " << *c.waveform_file << '\n';
    out << "blood_density_kg_per_m3: " << format_g9(c.blood_density) << '\n'
        << "drag_mode: " << (c.drag_mode == DragMode::PaperLinear ? "paper-linear" : "quadratic") << '\n'
        << "vessel_radius_mm: " << format_g9(c.vessel.radius * 1e3) << '\n'
        << "sphere_radius_mm: " << format_g9(c.sphere.radius * 1e3) << '\n'
        << "magnetization_a_per_m: " << format_g9(c.sphere.magnetization) << '\n'
        << "material_density_kg_per_m3: " << format_g9(c.sphere.material_density) << '\n'
        << "drag_coefficient: " << format_g9(c.sphere.drag_coefficient) << '\n'
        << "gravity: " << (c.include_gravity ? "on" : "off") << '\n'
        << "kp: " << format_g9(c.gains.kp) << '\n'
        << "ki: " << format_g9(c.gains.ki) << '\n'
        << "kd: " << format_g9(c.gains.kd) << '\n'
        << "kr: " << format_g9(c.gains.kr) << '\n'
        << "controller_mode: " << (c.controller_mode == ControllerMode::Paper ? "paper" : "dimensional") << '\n'
        << "anti_windup: " << (c.anti_windup ? "on" : "off") << '\n'
        << "setpoint_window: " << c.setpoint_window << '\n'
        << "v0_m_per_s: " << format_g9(c.profile.v0) << '\n'
        << "k0_per_m: " << format_g9(c.profile.k0) << '\n'
        << "r0_m: " << format_g9(c.profile.r0) << '\n'
        << "r_gc_mm: " << format_g9(c.profile.r_gc * 1e3) << '\n'
        << "v_min_m_per_s: " << format_g9(c.profile.v_min) << '\n'
        << "gradient_limit_t_per_m: " << format_g9(c.limits.max_amplitude) << '\n'
        << "slew_limit_t_per_s: " << format_g9(c.slew.limit) << '\n'
        << "rise_time_ms: " << format_g9(c.slew.rise_time * 1e3) << '\n'
        << "isocenter_distance_m: " << format_g9(c.slew.isocenter_distance) << '\n'
        << "initial_offset_mm: " << format_g9(c.initial_offset.x * 1e3) << ',' << format_g9(c.initial_offset.y * 1e3)
        << ',' << format_g9(c.initial_offset.z * 1e3) << '\n'
        << "capture_radius_factor: " << format_g9(c.capture_radius_factor) << '\n';
}

void write_telemetry(const std::vector<TelemetryRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::WriteError, "cannot open '" + path + "' for writing");
    }
    out << kTelemetryHeader << '\n';
    for (const auto& r : records) {
        const double cols[] = {r.time,
                               r.position.x, r.position.y, r.position.z,
                               r.velocity.x, r.velocity.y, r.velocity.z,
                               r.setpoint_pos.x, r.setpoint_pos.y, r.setpoint_pos.z,
                               r.setpoint_vel.x, r.setpoint_vel.y, r.setpoint_vel.z,
                               r.error_v.x, r.error_v.y, r.error_v.z,
                               r.gradient_raw.x, r.gradient_raw.y, r.gradient_raw.z,
                               r.gradient.x, r.gradient.y, r.gradient.z,
                               r.curvature, r.blood_speed,
                               r.dbdt.x, r.dbdt.y, r.dbdt.z};
        for (double c : cols) out << format_g9(c) << ',';
        out << (r.fixture_ok ? '1' : '0') << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::WriteError, "write failure on '" + path + "'");
    }
}

std::vector<TelemetryRecord> read_telemetry(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidPath, "cannot open telemetry file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::InsufficientData, path + ": empty telemetry file");
    }
    if (strip(line) != kTelemetryHeader) {
        throw Error(ErrorKind::InvalidValue, path + ": unexpected telemetry header");
    }
    std::vector<TelemetryRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        std::stringstream ss(s);
        std::string field;
        double cols[27];
        for (int i = 0; i < 27; ++i) {
            if (!std::getline(ss, field, ',')) {
                throw Error(ErrorKind::InvalidValue, path + ":" + std::to_string(lineno) + ": short row");
            }
            try {
                cols[i] = std::stod(field);
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidValue, path + ":" + std::to_string(lineno) + ": bad number");
            }
        }
        if (!std::getline(ss, field, ',')) {
            throw Error(ErrorKind::InvalidValue, path + ":" + std::to_string(lineno) + ": short row");
        }
        TelemetryRecord r;
        r.time = cols[0];
        r.position = {cols[1], cols[2], cols[3]};
        r.velocity = {cols[4], cols[5], cols[6]};
        r.setpoint_pos = {cols[7], cols[8], cols[9]};
        r.setpoint_vel = {cols[10], cols[11], cols[12]};
        r.error_v = {cols[13], cols[14], cols[15]};
        r.gradient_raw = {cols[16], cols[17], cols[18]};
        r.gradient = {cols[19], cols[20], cols[21]};
        r.curvature = cols[22];
        r.blood_speed = cols[23];
        r.dbdt = {cols[24], cols[25], cols[26]};
        r.fixture_ok = (strip(field) != "0");
        records.push_back(r);
    }
    return records;
}

std::vector<GradientCommand> commands_from_telemetry(const std::vector<TelemetryRecord>& records) {
    std::vector<GradientCommand> commands;
    for (const auto& r : records) {
        if (commands.empty() || !(commands.back().gradient == r.gradient)) {
            GradientCommand cmd;
            cmd.timestamp = r.time;
            cmd.gradient = r.gradient;
            commands.push_back(cmd);
        }
    }
    return commands;
}

void write_safety_report(const RunResult& result, const SlewParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::WriteError, "cannot open '" + path + "' for writing");
    }
    const bool slew_pass = !result.slew || result.slew->pass;
    const bool fixture_pass = result.fixture_violations.empty();
    out << "slew_limit_t_per_s: " << format_g9(params.limit) << '\n'
        << "rise_time_s: " << format_g9(params.rise_time) << '\n'
        << "isocenter_distance_m: " << format_g9(params.isocenter_distance) << '\n';
    if (result.slew) {
        out << "max_dbdt_x_t_per_s: " << format_g9(result.slew->max_abs[0]) << '\n'
            << "max_dbdt_y_t_per_s: " << format_g9(result.slew->max_abs[1]) << '\n'
            << "max_dbdt_z_t_per_s: " << format_g9(result.slew->max_abs[2]) << '\n'
            << "slew_violations: " << result.slew->violations.size() << '\n';
    } else {
        out << "slew_violations: 0\n";
    }
    out << "slew_pass: " << (slew_pass ? "yes" : "no") << '\n'
        << "fixture_violations: " << result.fixture_violations.size() << '\n'
        << "fixture_pass: " << (fixture_pass ? "yes" : "no") << '\n'
        << "overall_pass: " << (slew_pass && fixture_pass ? "yes" : "no") << '\n'
        << "completed: " << (result.completed ? "yes" : "no") << '\n'
        << "end_time_s: " << format_g9(result.end_time) << '\n';
    if (!out) {
        throw Error(ErrorKind::WriteError, "write failure on '" + path + "'");
    }
}

}  // namespace mrsim
