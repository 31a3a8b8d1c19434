#ifndef MRSIM_HEMODYNAMICS_HPP
#define MRSIM_HEMODYNAMICS_HPP

#include <string>
#include <vector>

#include "mrsim/vec3.hpp"

namespace mrsim {

enum class FlowRegime { Steady, Normal, Fast };

enum class DragMode {
    PaperLinear,  // force linear in relative speed
    Quadratic,    // standard 1/2 Cd p A |dv| dv
};

struct Harmonic {
    double amplitude = 0.0;  // fraction of mean velocity
    double phase = 0.0;      // radians
};

/// Default 4-harmonic arterial pulse shape (fractions of mean; strictly
/// positive over the period so the zero clamp never biases the mean).
std::vector<Harmonic> default_harmonics();

/// Time-dependent blood velocity model. Steady is constant; normal/fast are
/// mean-plus-harmonics at 60/120 bpm. An override table (one period of
/// time_fraction, velocity_fraction samples, linearly interpolated) replaces
/// the harmonic shape and is rescaled so its mean matches the configured mean.
class FlowWaveform {
public:
    static FlowWaveform steady(double mean_rate_m3_per_s);
    static FlowWaveform pulsatile(FlowRegime regime, double mean_rate_m3_per_s, double heart_rate_bpm,
                                  std::vector<Harmonic> harmonics = default_harmonics());

    void set_override_shape(std::vector<std::pair<double, double>> samples);

    /// Cross-section mean speed at time t, clamped at zero.
    double velocity(double vessel_radius, double t) const;

    FlowRegime regime() const { return regime_; }
    double mean_rate() const { return mean_rate_; }
    double heart_rate_bpm() const { return heart_rate_bpm_; }
    double period() const { return 60.0 / heart_rate_bpm_; }

private:
    FlowWaveform() = default;

    double shape(double time_fraction) const;

    FlowRegime regime_ = FlowRegime::Steady;
    double mean_rate_ = 0.0;       // m^3/s
    double heart_rate_bpm_ = 60.0;
    std::vector<Harmonic> harmonics_;
    std::vector<std::pair<double, double>> override_shape_;
    double override_mean_ = 1.0;
};

/// Load a waveform override table: CSV `time_fraction,velocity_fraction`.
std::vector<std::pair<double, double>> load_waveform_csv(const std::string& path);

/// Drag force on the sphere. PaperLinear is linear in relative speed:
/// 1/2 Cd p Re |v_blood - v_s| along the relative velocity; Quadratic is the
/// standard law. Zero vector when the relative velocity vanishes.
Vec3 drag_force(double drag_coefficient, double fluid_density, double reference_area, const Vec3& v_blood,
                const Vec3& v_sphere, DragMode mode = DragMode::PaperLinear);

struct VesselSegment {
    double radius = 3e-3;  // meters; rigid cylinder
};

struct VelocityProfileParams {
    double v0 = 0.0;      // baseline speed, m/s
    double k0 = 0.0;      // curvature scaling, 1/m
    double r0 = 0.0;      // radius normalization, m
    double r_gc = 0.0;    // clearance reference radius, m
    double v_min = 1e-4;  // stall floor, m/s
};

/// Setpoint speed profile: v0/(1 + K/K0) + (Rs - Rgc)/R0, floored at v_min.
double velocity_setpoint(const VelocityProfileParams& params, double curvature, double sphere_radius);

}  // namespace mrsim

#endif
