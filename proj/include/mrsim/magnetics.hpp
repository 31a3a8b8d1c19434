#ifndef MRSIM_MAGNETICS_HPP
#define MRSIM_MAGNETICS_HPP

#include <array>

#include "mrsim/vec3.hpp"

namespace mrsim {

double sphere_volume(double radius);
double magnetic_moment(double magnetization, double volume);

/// Per-axis propulsion force F_i = M * G_i * V (sphere magnetized to
/// saturation, full gradient efficiency on every axis).
Vec3 magnetic_force(double magnetization, const Vec3& gradient, double volume);

/// Physical and magnetic description of the sphere. Derived quantities are
/// recomputed on demand so they can never go stale.
struct SphereSpec {
    double radius = 3e-4;              // m
    double magnetization = 1.9496e6;   // A/m
    double material_density = 8120.0;  // kg/m^3, permendur
    double drag_coefficient = 0.47;

    double volume() const { return sphere_volume(radius); }
    double reference_area() const;  // frontal area pi r^2
    double moment() const { return magnetic_moment(magnetization, volume()); }
    double mass() const { return material_density * volume(); }

    void validate() const;
};

struct GradientCommand {
    double timestamp = 0.0;  // s
    Vec3 gradient;           // T/m
    std::array<bool, 3> clipped = {false, false, false};
};

struct GradientLimits {
    double max_amplitude = 0.040;    // T/m per axis
    double refresh_interval = 0.100; // s

    void validate() const;
};

/// Saturates each axis to +/- max amplitude, flagging clipped axes.
GradientCommand clamp_gradient(const GradientCommand& cmd, const GradientLimits& limits);

}  // namespace mrsim

#endif
