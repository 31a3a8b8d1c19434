#ifndef MRSIM_SAFETY_HPP
#define MRSIM_SAFETY_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mrsim/magnetics.hpp"
#include "mrsim/path_geometry.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

struct SlewParams {
    double isocenter_distance = 0.50;  // m
    double rise_time = 0.100;          // s, defaults to the command cadence
    double limit = 20.0;               // T/s

    void validate() const;
};

/// Field rate of change at distance r from isocenter for one gradient step:
/// S = (G_next - G_prev) / T_r * r. Signed; compare |S| against the limit.
double slew_rate(double g_prev, double g_next, double rise_time, double isocenter_distance);

struct SlewReport {
    // One entry per consecutive command pair, per axis.
    std::array<std::vector<double>, 3> series;
    std::array<double, 3> max_abs = {0.0, 0.0, 0.0};
    std::array<bool, 3> axis_pass = {true, true, true};
    double limit = 0.0;
    bool pass = true;
    // Transition indices (0 = between commands 0 and 1) with any axis over limit.
    std::vector<std::size_t> violations;
};

SlewReport check_slew_series(std::span<const GradientCommand> commands, const SlewParams& params);

struct FixtureViolation {
    double timestamp = 0.0;
    Vec3 position;
    double distance = 0.0;  // from nearest centerline sample, m
    double allowed = 0.0;   // vessel radius minus sphere radius, m
};

/// Virtual-fixture clearance check against the nearest centerline sample,
/// using the same forward-window rule as setpoint lookup. `last_index` is
/// advanced in place so successive calls walk the path monotonically.
std::optional<FixtureViolation> check_virtual_fixture(const Vec3& position, std::span<const PathSample> samples,
                                                      std::size_t& last_index, double vessel_radius,
                                                      double sphere_radius, double timestamp = 0.0,
                                                      std::size_t window = 200);

}  // namespace mrsim

#endif
