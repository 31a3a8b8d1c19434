#ifndef MRSIM_SIM_ENGINE_HPP
#define MRSIM_SIM_ENGINE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/controller.hpp"
#include "mrsim/error.hpp"
#include "mrsim/hemodynamics.hpp"
#include "mrsim/magnetics.hpp"
#include "mrsim/path_geometry.hpp"
#include "mrsim/safety.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

struct ScenarioConfig {
    std::string waypoint_file;           // required; resolved by the caller
    double path_step = 1e-4;             // discretization step h, path-parameter units

    FlowRegime flow_regime = FlowRegime::Steady;
    double mean_flow = 1e-6;             // m^3/s
    double heart_rate_bpm = 60.0;
    std::optional<std::string> waveform_file;
    double blood_density = 1.025;        // kg/m^3; set 1025 for physiological blood
    DragMode drag_mode = DragMode::PaperLinear;

    VesselSegment vessel;                // rigid cylinder
    SphereSpec sphere;
    // Buoyancy-corrected weight, off by default: gradient forces dominate at
    // this scale. Re-enable for sensitivity studies.
    bool include_gravity = false;

    ControllerGains gains;
    ControllerMode controller_mode = ControllerMode::Paper;
    bool anti_windup = true;
    std::size_t setpoint_window = kDefaultSetpointWindow;

    VelocityProfileParams profile{0.001, 100.0, 1.0, 3e-4, 1e-4};
    GradientLimits limits;
    SlewParams slew;

    double tp = 0.100;                   // position observation interval, s
    double dt = 0.001;                   // physics step, s
    double duration = 10.0;              // s
    Vec3 initial_offset;                 // from the first path sample, m
    double capture_radius_factor = 2.0;  // terminal radius in units of sphere radius

    void validate() const;  // throws ConfigError on invariant breaches
};

struct SimState {
    double time = 0.0;
    Vec3 position;
    Vec3 velocity;
    GradientCommand active_command;
    ControllerState controller;
    std::size_t nearest_index = 0;
};

struct TelemetryRecord {
    double time = 0.0;
    Vec3 position;       // P_c
    Vec3 velocity;       // V_c
    Vec3 setpoint_pos;   // P_s of the active command
    Vec3 setpoint_vel;   // V_s
    Vec3 error_v;
    Vec3 pf, pi, pd, ff;
    Vec3 gradient_raw;   // before clamping
    Vec3 gradient;       // actuated
    double curvature = 0.0;    // at the nearest sample to the true position
    double blood_speed = 0.0;  // m/s at the sphere's location
    Vec3 dbdt;                 // filled by the post-pass, held between commands
    bool fixture_ok = true;
};

struct RunResult {
    std::vector<TelemetryRecord> records;
    std::vector<GradientCommand> commands;
    std::optional<SlewReport> slew;  // empty when fewer than 2 commands
    std::vector<FixtureViolation> fixture_violations;
    bool completed = false;  // reached the capture radius before the duration ran out
    double end_time = 0.0;
    Vec3 final_position;
};

/// Semi-implicit Euler step: velocity first, then position with the new
/// velocity. Throws NumericalDivergence on non-finite forces or state.
SimState step_dynamics(const SimState& state, const Vec3& f_magnetic, const Vec3& f_drag, double mass, double dt);

/// Carries the partial telemetry out of a diverged run.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, RunResult partial)
        : Error(ErrorKind::NumericalDivergence, message), partial_(std::move(partial)) {}
    const RunResult& partial() const { return partial_; }

private:
    RunResult partial_;
};

RunResult run_scenario(const ScenarioConfig& config);
RunResult run_scenario(const ScenarioConfig& config, const std::vector<Waypoint>& waypoints);

struct BatchStats {
    std::size_t runs = 0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    double mean_ms = 0.0;
    std::vector<double> per_run_ms;
};

/// Times n independent scenario executions. Runs are deterministic, so all
/// outputs are identical; only the wall-clock statistics vary.
BatchStats batch_run(const ScenarioConfig& config, int n);

}  // namespace mrsim

#endif
