#include "mrsim/controller.hpp"

#include <algorithm>
#include <string>

#include "mrsim/error.hpp"

namespace mrsim {

void ControllerGains::validate() const {
    if (kp < 0.0 || ki < 0.0 || kd < 0.0) {
        throw Error(ErrorKind::InvalidValue, "PID gains must be >= 0");
    }
    if (kr < 0.0 || kr > 1.0) {
        throw Error(ErrorKind::InvalidValue, "kr must be in [0, 1]");
    }
    if (!(delta > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "delta must be > 0");
    }
}

std::size_t nearest_sample_index(std::span<const PathSample> samples, const Vec3& position,
                                 std::size_t last_index, std::size_t window) {
    if (samples.empty()) {
        throw Error(ErrorKind::InvalidPath, "empty path sample sequence");
    }
    if (last_index >= samples.size()) {
        throw Error(ErrorKind::InvalidPath, "last_index " + std::to_string(last_index) + " out of range");
    }
    const std::size_t hi = std::min(last_index + window, samples.size() - 1);
    std::size_t best = last_index;
    double best_d2 = norm_squared(position - samples[last_index].position);
    for (std::size_t i = last_index + 1; i <= hi; ++i) {
        const double d2 = norm_squared(position - samples[i].position);
        if (d2 < best_d2) {  // strict: ties keep the lower index
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

Setpoint nearest_setpoint(std::span<const PathSample> samples, const Vec3& position, std::size_t last_index,
                          const VelocityProfileParams& profile, double sphere_radius, std::size_t window) {
    const std::size_t idx = nearest_sample_index(samples, position, last_index, window);
    const PathSample& s = samples[idx];
    Setpoint sp;
    sp.sample_index = idx;
    sp.position = s.position;
    const double speed = velocity_setpoint(profile, s.curvature, sphere_radius);
    const double tangent_norm = norm(s.first_derivative);
    sp.velocity = (tangent_norm > 0.0) ? (speed / tangent_norm) * s.first_derivative : Vec3{};
    return sp;
}

Vec3 velocity_error(const Vec3& v_current, const Vec3& v_setpoint, const Vec3& p_current, const Vec3& p_setpoint,
                    double kr) {
    return v_current - v_setpoint + kr * (p_current - p_setpoint);
}

PidTerms pid_step(ControllerState& state, const Vec3& error_v, const ControllerGains& gains) {
    gains.validate();
    PidTerms terms;
    for (int i = 0; i < 3; ++i) {
        terms.pf[i] = -(gains.kp * error_v[i]);
        terms.pi[i] = state.pi_accumulator[i] - ((error_v[i] * gains.delta) * gains.ki);
        const double error_dt = (error_v[i] - state.previous_error[i]) / gains.delta;
        terms.pd[i] = -(gains.kd * error_dt);
    }
    state.pi_accumulator = terms.pi;
    state.previous_error = error_v;
    state.initialized = true;
    return terms;
}

Vec3 feedforward(double drag_coefficient, double fluid_density, double reference_area, const Vec3& v_blood,
                 DragMode mode) {
    if (!(drag_coefficient > 0.0) || !(fluid_density > 0.0) || !(reference_area > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "feedforward coefficients must be > 0");
    }
    const double c = 0.5 * drag_coefficient * fluid_density * reference_area;
    if (mode == DragMode::Quadratic) {
        return c * norm(v_blood) * v_blood;
    }
    return c * v_blood;
}

GradientCommand gradient_command(double moment, const Vec3& pf, const Vec3& pi, const Vec3& pd, const Vec3& ff) {
    if (!(moment > 0.0)) {
        throw Error(ErrorKind::InvalidMoment, "moment must be > 0, got " + std::to_string(moment));
    }
    GradientCommand cmd;
    cmd.gradient = (1.0 / moment) * (pf + pi + pd + ff);
    return cmd;
}

}  // namespace mrsim
