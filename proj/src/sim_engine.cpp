#include "mrsim/sim_engine.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

bool is_multiple_of(double value, double quantum) {
    const double ratio = value / quantum;
    return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, std::abs(ratio));
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration > 0.0)) {
        throw Error(ErrorKind::ConfigError, "duration_s must be > 0");
    }
    if (!(dt > 0.0) || !(tp > 0.0)) {
        throw Error(ErrorKind::ConfigError, "dt_ms and tp_ms must be > 0");
    }
    if (dt > tp) {
        throw Error(ErrorKind::ConfigError, "dt must not exceed Tp");
    }
    if (dt > gains.delta) {
        throw Error(ErrorKind::ConfigError, "dt must not exceed the controller refresh interval");
    }
    if (!is_multiple_of(tp, dt)) {
        throw Error(ErrorKind::ConfigError, "Tp must be an integer multiple of dt");
    }
    if (!is_multiple_of(gains.delta, dt)) {
        throw Error(ErrorKind::ConfigError, "controller refresh must be an integer multiple of dt");
    }
    if (!(path_step > 0.0)) {
        throw Error(ErrorKind::ConfigError, "path_step must be > 0");
    }
    if (!(vessel.radius > sphere.radius)) {
        throw Error(ErrorKind::ConfigError, "vessel radius must exceed sphere radius");
    }
    if (!(mean_flow >= 0.0)) {
        throw Error(ErrorKind::ConfigError, "mean_flow_ml_per_s must be >= 0");
    }
    if (!(blood_density > 0.0)) {
        throw Error(ErrorKind::ConfigError, "blood density must be > 0");
    }
    if (!(capture_radius_factor > 0.0)) {
        throw Error(ErrorKind::ConfigError, "capture_radius_factor must be > 0");
    }
    if (setpoint_window == 0) {
        throw Error(ErrorKind::ConfigError, "setpoint_window must be >= 1");
    }
    sphere.validate();
    try {
        gains.validate();
        limits.validate();
        slew.validate();
        if (!(profile.v0 > 0.0) || !(profile.k0 > 0.0) || !(profile.r0 > 0.0)) {
            throw Error(ErrorKind::InvalidValue, "v0, k0, r0 must be > 0");
        }
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
}

SimState step_dynamics(const SimState& state, const Vec3& f_magnetic, const Vec3& f_drag, double mass, double dt) {
    if (!(mass > 0.0) || !(dt > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "mass and dt must be > 0");
    }
    if (!finite(f_magnetic) || !finite(f_drag)) {
        throw Error(ErrorKind::NumericalDivergence,
                    "non-finite force at t=" + std::to_string(state.time) + " (magnetic " +
                        std::to_string(f_magnetic.x) + "," + std::to_string(f_magnetic.y) + "," +
                        std::to_string(f_magnetic.z) + ")");
    }
    SimState next = state;
    const Vec3 accel = (f_magnetic + f_drag) * (1.0 / mass);
    next.velocity = state.velocity + dt * accel;
    next.position = state.position + dt * next.velocity;
    next.time = state.time + dt;
    if (!finite(next.velocity) || !finite(next.position)) {
        throw Error(ErrorKind::NumericalDivergence, "non-finite state at t=" + std::to_string(next.time));
    }
    return next;
}

namespace {

FlowWaveform make_waveform(const ScenarioConfig& config) {
    FlowWaveform w = (config.flow_regime == FlowRegime::Steady)
                         ? FlowWaveform::steady(config.mean_flow)
                         : FlowWaveform::pulsatile(config.flow_regime, config.mean_flow, config.heart_rate_bpm);
    if (config.waveform_file) {
        w.set_override_shape(load_waveform_csv(*config.waveform_file));
    }
    return w;
}

Vec3 tangent_unit(const PathSample& s) {
    const double n = norm(s.first_derivative);
    return n > 0.0 ? (1.0 / n) * s.first_derivative : Vec3{};
}

void fill_post_pass(RunResult& result, const ScenarioConfig& config, const std::vector<PathSample>& samples) {
    // Slew over the command sequence; trivially passing when degenerate.
    if (result.commands.size() >= 2) {
        result.slew = check_slew_series(result.commands, config.slew);
    }

    // dB/dt columns: hold the most recent transition value.
    if (result.slew) {
        std::size_t transition = 0;
        Vec3 held{};
        for (auto& rec : result.records) {
            while (transition + 1 < result.commands.size() &&
                   rec.time >= result.commands[transition + 1].timestamp) {
                held = {result.slew->series[0][transition], result.slew->series[1][transition],
                        result.slew->series[2][transition]};
                ++transition;
            }
            rec.dbdt = held;
        }
    }

    // Virtual-fixture pass over the true trajectory.
    std::size_t fixture_index = 0;
    for (auto& rec : result.records) {
        const auto violation = check_virtual_fixture(rec.position, samples, fixture_index, config.vessel.radius,
                                                     config.sphere.radius, rec.time, config.setpoint_window);
        rec.fixture_ok = !violation.has_value();
        if (violation) {
            result.fixture_violations.push_back(*violation);
        }
    }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const std::vector<Waypoint>& waypoints) {
    if (config.duration == 0.0) {
        RunResult empty;
        const auto samples = CenterlinePath::from_waypoints(waypoints).discretize(config.path_step);
        empty.final_position = samples.front().position + config.initial_offset;
        return empty;
    }
    config.validate();
    const CenterlinePath path = CenterlinePath::from_waypoints(waypoints);
    const std::vector<PathSample> samples = path.discretize(config.path_step);
    const FlowWaveform waveform = make_waveform(config);

    const double mass = config.sphere.mass();
    const double moment = config.sphere.moment();
    const double volume = config.sphere.volume();
    const double ref_area = config.sphere.reference_area();
    const double cd = config.sphere.drag_coefficient;
    const Vec3 f_gravity = config.include_gravity
                               ? Vec3{0.0, 0.0, -(mass - config.blood_density * volume) * 9.80665}
                               : Vec3{};
    const double capture_radius = config.capture_radius_factor * config.sphere.radius;
    const double pid_scale = (config.controller_mode == ControllerMode::Dimensional) ? mass / config.gains.delta : 1.0;

    const auto refresh_steps = static_cast<std::size_t>(std::round(config.gains.delta / config.dt));
    const auto tp_steps = static_cast<std::size_t>(std::round(config.tp / config.dt));
    const auto total_steps = static_cast<std::size_t>(std::round(config.duration / config.dt));

    RunResult result;
    result.records.reserve(total_steps);

    SimState state;
    state.position = samples.front().position + config.initial_offset;
    state.velocity = Vec3{};

    Vec3 obs_position = state.position;
    Vec3 obs_velocity = state.velocity;
    std::size_t control_index = 0;

    // Quantities held between controller refreshes (zero-order hold).
    Setpoint held_setpoint;
    Vec3 held_error, held_pf, held_pi, held_pd, held_ff, held_raw;

    auto flush_divergence = [&](const std::string& message) {
        fill_post_pass(result, config, samples);
        result.completed = false;
        result.end_time = state.time;
        result.final_position = state.position;
        throw DivergenceError(message, std::move(result));
    };

    for (std::size_t step = 0; step < total_steps; ++step) {
        if (step % tp_steps == 0) {
            obs_position = state.position;
            obs_velocity = state.velocity;
        }
        if (step % refresh_steps == 0) {
            const Setpoint sp = nearest_setpoint(samples, obs_position, control_index, config.profile,
                                                 config.sphere.radius, config.setpoint_window);
            control_index = sp.sample_index;
            const Vec3 error = velocity_error(obs_velocity, sp.velocity, obs_position, sp.position,
                                              config.gains.kr);
            const Vec3 saved_accumulator = state.controller.pi_accumulator;
            const PidTerms terms = pid_step(state.controller, error, config.gains);
            const Vec3 v_blood_ctl = waveform.velocity(config.vessel.radius, state.time) *
                                     tangent_unit(samples[sp.sample_index]);
            const Vec3 ff = feedforward(cd, config.blood_density, ref_area, v_blood_ctl, config.drag_mode);
            GradientCommand raw = gradient_command(moment, pid_scale * terms.pf, pid_scale * terms.pi,
                                                   pid_scale * terms.pd, ff);
            raw.timestamp = state.time;
            GradientCommand cmd = clamp_gradient(raw, config.limits);
            if (config.anti_windup) {
                // Conditional integration: freeze the accumulator on clipped axes.
                for (int a = 0; a < 3; ++a) {
                    if (cmd.clipped[a]) state.controller.pi_accumulator[a] = saved_accumulator[a];
                }
            }
            state.active_command = cmd;
            result.commands.push_back(cmd);
            held_setpoint = sp;
            held_error = error;
            held_pf = terms.pf;
            held_pi = terms.pi;
            held_pd = terms.pd;
            held_ff = ff;
            held_raw = raw.gradient;
        }

        state.nearest_index = nearest_sample_index(samples, state.position, state.nearest_index,
                                                   config.setpoint_window);
        const double blood_speed = waveform.velocity(config.vessel.radius, state.time);
        const Vec3 v_blood = blood_speed * tangent_unit(samples[state.nearest_index]);
        const Vec3 f_drag = drag_force(cd, config.blood_density, ref_area, v_blood, state.velocity,
                                       config.drag_mode);
        const Vec3 f_magnetic = magnetic_force(config.sphere.magnetization, state.active_command.gradient, volume);

        TelemetryRecord rec;
        rec.time = state.time;
        rec.position = state.position;
        rec.velocity = state.velocity;
        rec.setpoint_pos = held_setpoint.position;
        rec.setpoint_vel = held_setpoint.velocity;
        rec.error_v = held_error;
        rec.pf = held_pf;
        rec.pi = held_pi;
        rec.pd = held_pd;
        rec.ff = held_ff;
        rec.gradient_raw = held_raw;
        rec.gradient = state.active_command.gradient;
        rec.curvature = samples[state.nearest_index].curvature;
        rec.blood_speed = blood_speed;
        result.records.push_back(rec);

        try {
            state = step_dynamics(state, f_magnetic + f_gravity, f_drag, mass, config.dt);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NumericalDivergence) flush_divergence(e.what());
            throw;
        }

        if (norm(state.position - samples.back().position) <= capture_radius) {
            result.completed = true;
            break;
        }
    }

    result.end_time = state.time;
    result.final_position = state.position;
    fill_post_pass(result, config, samples);
    return result;
}

RunResult run_scenario(const ScenarioConfig& config) {
    return run_scenario(config, load_waypoints_csv(config.waypoint_file));
}

BatchStats batch_run(const ScenarioConfig& config, int n) {
    if (n < 1) {
        throw Error(ErrorKind::InvalidValue, "batch size must be >= 1");
    }
    const std::vector<Waypoint> waypoints = load_waypoints_csv(config.waypoint_file);
    BatchStats stats;
    stats.per_run_ms.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto start = std::chrono::steady_clock::now();
        RunResult result = run_scenario(config, waypoints);
        const auto stop = std::chrono::steady_clock::now();
        (void)result;
        stats.per_run_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    stats.runs = stats.per_run_ms.size();
    stats.min_ms = stats.per_run_ms.front();
    stats.max_ms = stats.per_run_ms.front();
    double sum = 0.0;
    for (double ms : stats.per_run_ms) {
        stats.min_ms = std::min(stats.min_ms, ms);
        stats.max_ms = std::max(stats.max_ms, ms);
        sum += ms;
    }
    stats.mean_ms = sum / static_cast<double>(stats.runs);
    return stats;
}

}  // namespace mrsim
