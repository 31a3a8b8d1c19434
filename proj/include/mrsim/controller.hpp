#ifndef MRSIM_CONTROLLER_HPP
#define MRSIM_CONTROLLER_HPP

#include <cstddef>
#include <span>

#include "mrsim/hemodynamics.hpp"
#include "mrsim/magnetics.hpp"
#include "mrsim/path_geometry.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

struct ControllerGains {
    double kp = 2.0;
    double ki = 1.0;
    double kd = 0.01;
    double kr = 0.7;
    double delta = 0.100;  // controller update interval, s

    void validate() const;
};

enum class ControllerMode {
    Paper,        // PID terms enter the gradient as forces, unscaled
    Dimensional,  // PID terms scaled by sphere mass / delta
};

struct ControllerState {
    Vec3 pi_accumulator;  // running integral term, updated in place
    Vec3 previous_error;
    bool initialized = false;
};

struct Setpoint {
    Vec3 position;           // on the discretized centerline
    Vec3 velocity;           // profile speed along the local tangent
    std::size_t sample_index = 0;
};

inline constexpr std::size_t kDefaultSetpointWindow = 200;

/// Index of the sample nearest to `position` within the forward window
/// [last_index, last_index + window]. Ties break toward the lower index, so
/// the returned index never decreases across calls.
std::size_t nearest_sample_index(std::span<const PathSample> samples, const Vec3& position,
                                 std::size_t last_index, std::size_t window = kDefaultSetpointWindow);

Setpoint nearest_setpoint(std::span<const PathSample> samples, const Vec3& position, std::size_t last_index,
                          const VelocityProfileParams& profile, double sphere_radius,
                          std::size_t window = kDefaultSetpointWindow);

/// Error_v = V_c - V_s + K_r (P_c - P_s), componentwise.
Vec3 velocity_error(const Vec3& v_current, const Vec3& v_setpoint, const Vec3& p_current, const Vec3& p_setpoint,
                    double kr);

struct PidTerms {
    Vec3 pf;  // proportional
    Vec3 pi;  // integral accumulator after this step
    Vec3 pd;  // derivative
};

/// One controller update. Canonical operation order (bit-for-bit contract):
///   PF      = -(kp * e)
///   PI_new  = PI_old - ((e * delta) * ki)
///   e_dt    = (e - e_prev) / delta
///   PD      = -(kd * e_dt)
/// then state.previous_error = e and state.pi_accumulator = PI_new.
PidTerms pid_step(ControllerState& state, const Vec3& error_v, const ControllerGains& gains);

/// Open-loop term cancelling the predicted blood drag; matches the drag mode.
Vec3 feedforward(double drag_coefficient, double fluid_density, double reference_area, const Vec3& v_blood,
                 DragMode mode = DragMode::PaperLinear);

/// G = (PF + PI + PD + FF) / Moment_s. Timestamp is assigned by the caller;
/// the command still needs clamp_gradient before actuation.
GradientCommand gradient_command(double moment, const Vec3& pf, const Vec3& pi, const Vec3& pd, const Vec3& ff);

}  // namespace mrsim

#endif
