#include "mrsim/safety.hpp"

#include <cmath>
#include <string>

#include "mrsim/controller.hpp"
#include "mrsim/error.hpp"

namespace mrsim {

void SlewParams::validate() const {
    if (!(isocenter_distance > 0.0) || !(rise_time > 0.0) || !(limit > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "slew parameters must be > 0");
    }
}

double slew_rate(double g_prev, double g_next, double rise_time, double isocenter_distance) {
    if (!(rise_time > 0.0)) {
        throw Error(ErrorKind::InvalidRiseTime, "rise time must be > 0, got " + std::to_string(rise_time));
    }
    if (!(isocenter_distance > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "isocenter distance must be > 0");
    }
    return (g_next - g_prev) / rise_time * isocenter_distance;
}

SlewReport check_slew_series(std::span<const GradientCommand> commands, const SlewParams& params) {
    params.validate();
    if (commands.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "need at least 2 commands, got " + std::to_string(commands.size()));
    }
    SlewReport report;
    report.limit = params.limit;
    for (std::size_t i = 0; i + 1 < commands.size(); ++i) {
        if (!(commands[i + 1].timestamp > commands[i].timestamp)) {
            throw Error(ErrorKind::InvalidSeries,
                        "timestamps must be strictly increasing at command " + std::to_string(i + 1));
        }
        bool over = false;
        for (int a = 0; a < 3; ++a) {
            const double s = slew_rate(commands[i].gradient[a], commands[i + 1].gradient[a], params.rise_time,
                                       params.isocenter_distance);
            report.series[a].push_back(s);
            const double mag = std::abs(s);
            if (mag > report.max_abs[a]) report.max_abs[a] = mag;
            if (mag > params.limit) {
                report.axis_pass[a] = false;
                over = true;
            }
        }
        if (over) report.violations.push_back(i);
    }
    report.pass = report.axis_pass[0] && report.axis_pass[1] && report.axis_pass[2];
    return report;
}

std::optional<FixtureViolation> check_virtual_fixture(const Vec3& position, std::span<const PathSample> samples,
                                                      std::size_t& last_index, double vessel_radius,
                                                      double sphere_radius, double timestamp, std::size_t window) {
    if (!(vessel_radius > sphere_radius)) {
        throw Error(ErrorKind::ImpossibleGeometry,
                    "vessel radius " + std::to_string(vessel_radius) + " must exceed sphere radius " +
                        std::to_string(sphere_radius));
    }
    last_index = nearest_sample_index(samples, position, last_index, window);
    const double distance = norm(position - samples[last_index].position);
    const double allowed = vessel_radius - sphere_radius;
    if (distance <= allowed) {
        return std::nullopt;
    }
    FixtureViolation v;
    v.timestamp = timestamp;
    v.position = position;
    v.distance = distance;
    v.allowed = allowed;
    return v;
}

}  // namespace mrsim
