#include "mrsim/magnetics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mrsim/error.hpp"

namespace mrsim {

double sphere_volume(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidValue, "sphere radius must be finite and > 0, got " + std::to_string(radius));
    }
    return (4.0 / 3.0) * std::numbers::pi * radius * radius * radius;
}

double magnetic_moment(double magnetization, double volume) {
    if (!(magnetization > 0.0) || !(volume > 0.0) || !std::isfinite(magnetization) || !std::isfinite(volume)) {
        throw Error(ErrorKind::InvalidValue, "magnetization and volume must be finite and > 0");
    }
    return magnetization * volume;
}

Vec3 magnetic_force(double magnetization, const Vec3& gradient, double volume) {
    if (!std::isfinite(magnetization) || !std::isfinite(volume) || !finite(gradient)) {
        throw Error(ErrorKind::InvalidValue, "magnetic force inputs must be finite");
    }
    return {magnetization * gradient.x * volume, magnetization * gradient.y * volume,
            magnetization * gradient.z * volume};
}

double SphereSpec::reference_area() const { return std::numbers::pi * radius * radius; }

void SphereSpec::validate() const {
    if (!(radius > 0.0) || !(magnetization > 0.0) || !(material_density > 0.0) || !(drag_coefficient > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "sphere radius, magnetization, density and Cd must be > 0");
    }
}

void GradientLimits::validate() const {
    if (!(max_amplitude > 0.0) || !(refresh_interval > 0.0)) {
        throw Error(ErrorKind::InvalidValue, "gradient limits must be > 0");
    }
}

GradientCommand clamp_gradient(const GradientCommand& cmd, const GradientLimits& limits) {
    limits.validate();
    GradientCommand out = cmd;
    for (int i = 0; i < 3; ++i) {
        if (out.gradient[i] > limits.max_amplitude) {
            out.gradient[i] = limits.max_amplitude;
            out.clipped[i] = true;
        } else if (out.gradient[i] < -limits.max_amplitude) {
            out.gradient[i] = -limits.max_amplitude;
            out.clipped[i] = true;
        }
    }
    return out;
}

}  // namespace mrsim
