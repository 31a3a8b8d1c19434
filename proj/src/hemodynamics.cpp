#include "mrsim/hemodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

std::vector<Harmonic> default_harmonics() {
    using std::numbers::pi;
    return {{0.6, 0.0}, {0.3, pi / 4.0}, {0.15, pi / 2.0}, {0.05, 3.0 * pi / 4.0}};
}

FlowWaveform FlowWaveform::steady(double mean_rate_m3_per_s) {
    if (!(mean_rate_m3_per_s >= 0.0) || !std::isfinite(mean_rate_m3_per_s)) {
        throw Error(ErrorKind::InvalidValue, "mean flow rate must be finite and >= 0");
    }
    FlowWaveform w;
    w.regime_ = FlowRegime::Steady;
    w.mean_rate_ = mean_rate_m3_per_s;
    return w;
}

FlowWaveform FlowWaveform::pulsatile(FlowRegime regime, double mean_rate_m3_per_s, double heart_rate_bpm,
                                     std::vector<Harmonic> harmonics) {
    if (regime == FlowRegime::Steady) {
        return steady(mean_rate_m3_per_s);
    }
    if (!(mean_rate_m3_per_s >= 0.0) || !(heart_rate_bpm > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "pulsatile waveform needs rate >= 0 and heart rate > 0");
    }
    FlowWaveform w;
    w.regime_ = regime;
    w.mean_rate_ = mean_rate_m3_per_s;
    w.heart_rate_bpm_ = heart_rate_bpm;
    w.harmonics_ = std::move(harmonics);
    return w;
}

void FlowWaveform::set_override_shape(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "waveform override needs at least 2 samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [tf, vf] = samples[i];
        if (!(tf >= 0.0 && tf < 1.0) || !std::isfinite(vf)) {
            throw Error(ErrorKind::InvalidValue, "override sample " + std::to_string(i) + " out of range");
        }
        if (i > 0 && tf <= samples[i - 1].first) {
            throw Error(ErrorKind::InvalidValue, "override time fractions must be strictly increasing");
        }
    }
    // Mean of the closed piecewise-linear shape over one period (last segment
    // wraps to the first sample).
    double mean = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [t0, v0] = samples[i];
        const double t1 = (i + 1 < samples.size()) ? samples[i + 1].first : samples[0].first + 1.0;
        const double v1 = (i + 1 < samples.size()) ? samples[i + 1].second : samples[0].second;
        mean += 0.5 * (v0 + v1) * (t1 - t0);
    }
    if (!(mean > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "override shape must have positive mean");
    }
    override_shape_ = std::move(samples);
    override_mean_ = mean;
}

double FlowWaveform::shape(double time_fraction) const {
    if (!override_shape_.empty()) {
        const auto& s = override_shape_;
        // Find segment containing time_fraction, wrapping past the last sample.
        auto it = std::upper_bound(s.begin(), s.end(), time_fraction,
                                   [](double tf, const auto& p) { return tf < p.first; });
        double t0, v0, t1, v1;
        if (it == s.begin()) {
            t0 = s.back().first - 1.0;
            v0 = s.back().second;
            t1 = s.front().first;
            v1 = s.front().second;
        } else if (it == s.end()) {
            t0 = s.back().first;
            v0 = s.back().second;
            t1 = s.front().first + 1.0;
            v1 = s.front().second;
        } else {
            t0 = (it - 1)->first;
            v0 = (it - 1)->second;
            t1 = it->first;
            v1 = it->second;
        }
        const double u = (time_fraction - t0) / (t1 - t0);
        return (v0 + u * (v1 - v0)) / override_mean_;
    }
    double v = 1.0;
    for (std::size_t k = 0; k < harmonics_.size(); ++k) {
        v += harmonics_[k].amplitude *
             std::cos(2.0 * std::numbers::pi * static_cast<double>(k + 1) * time_fraction + harmonics_[k].phase);
    }
    return v;
}

double FlowWaveform::velocity(double vessel_radius, double t) const {
    if (!(vessel_radius > 0.0)) {
        throw Error(ErrorKind::InvalidVessel, "vessel radius must be > 0, got " + std::to_string(vessel_radius));
    }
    const double mean = mean_rate_ / (std::numbers::pi * vessel_radius * vessel_radius);
    if (regime_ == FlowRegime::Steady && override_shape_.empty()) {
        return mean;
    }
    const double period = 60.0 / heart_rate_bpm_;
    // fmod keeps velocity exactly periodic in t.
    double tf = std::fmod(t, period) / period;
    if (tf < 0.0) tf += 1.0;
    return std::max(mean * shape(tf), 0.0);
}

std::vector<std::pair<double, double>> load_waveform_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidPath, "cannot open waveform file '" + path + "'");
    }
    std::vector<std::pair<double, double>> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.find("time_fraction") != std::string::npos) continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw Error(ErrorKind::InvalidValue, path + ":" + std::to_string(lineno) + ": expected 2 fields");
        }
        try {
            samples.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidValue, path + ":" + std::to_string(lineno) + ": bad number");
        }
    }
    return samples;
}

Vec3 drag_force(double drag_coefficient, double fluid_density, double reference_area, const Vec3& v_blood,
                const Vec3& v_sphere, DragMode mode) {
    if (!(drag_coefficient > 0.0) || !(fluid_density > 0.0) || !(reference_area > 0.0) || !finite(v_blood) ||
        !finite(v_sphere)) {
        throw Error(ErrorKind::InvalidValue, "drag force inputs must be finite with positive coefficients");
    }
    const Vec3 dv = v_blood - v_sphere;
    const double c = 0.5 * drag_coefficient * fluid_density * reference_area;
    if (mode == DragMode::Quadratic) {
        return c * norm(dv) * dv;
    }
    return c * dv;
}

double velocity_setpoint(const VelocityProfileParams& params, double curvature, double sphere_radius) {
    if (!(params.v0 > 0.0) || !(params.k0 > 0.0) || !(params.r0 > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "velocity profile requires v0, k0, r0 > 0");
    }
    if (!(curvature >= 0.0)) {
        throw Error(ErrorKind::InvalidValue, "curvature must be >= 0");
    }
    const double v = params.v0 / (1.0 + curvature / params.k0) + (sphere_radius - params.r_gc) / params.r0;
    return std::max(v, params.v_min);
}

}  // namespace mrsim
