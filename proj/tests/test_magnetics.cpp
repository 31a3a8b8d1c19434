#include <doctest.h>

#include <cmath>

#include "mrsim/error.hpp"
#include "mrsim/magnetics.hpp"

using namespace mrsim;

namespace {

constexpr double kVolume = 1.1309733552923256e-10;   // (4/3) pi (3e-4)^3
constexpr double kMoment = 2.2049456534779179e-4;    // 1.9496e6 * volume

}  // namespace

TEST_SUITE("magnetics") {

TEST_CASE("sphere volume") {
    CHECK(sphere_volume(3e-4) == doctest::Approx(kVolume).epsilon(1e-14));
    CHECK(sphere_volume(6e-4) == doctest::Approx(8.0 * kVolume).epsilon(1e-13));
    try {
        (void)sphere_volume(0.0);
        FAIL("expected InvalidValue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidValue);
    }
}

TEST_CASE("magnetic moment") {
    CHECK(magnetic_moment(1.9496e6, kVolume) == doctest::Approx(kMoment).epsilon(1e-14));
    CHECK(magnetic_moment(1.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)magnetic_moment(1.9496e6, 0.0), Error);
}

TEST_CASE("magnetic force at the measured x-axis gradients") {
    const Vec3 f1 = magnetic_force(1.9496e6, {0.93e-3, 0, 0}, kVolume);
    const Vec3 f2 = magnetic_force(1.9496e6, {1.68e-3, 0, 0}, kVolume);
    const Vec3 f3 = magnetic_force(1.9496e6, {3.35e-3, 0, 0}, kVolume);
    CHECK(f1.x == doctest::Approx(2.0505994577344637e-7).epsilon(1e-12));
    CHECK(f2.x == doctest::Approx(3.7043086978429021e-7).epsilon(1e-12));
    CHECK(f3.x == doctest::Approx(7.386567939151025e-7).epsilon(1e-12));
    CHECK(norm(magnetic_force(1.9496e6, {0, 0, 0}, kVolume)) == 0.0);
}

TEST_CASE("magnetic force is linear in gradient and volume") {
    const Vec3 g1{0.01, -0.02, 0.005}, g2{-0.003, 0.004, 0.001};
    const Vec3 fa = magnetic_force(1.9496e6, g1 + g2, kVolume);
    const Vec3 fb = magnetic_force(1.9496e6, g1, kVolume) + magnetic_force(1.9496e6, g2, kVolume);
    CHECK(std::abs(fa.x - fb.x) <= 1e-12 * std::abs(fa.x));
    CHECK(std::abs(fa.y - fb.y) <= 1e-12 * std::abs(fa.y));
    CHECK(std::abs(fa.z - fb.z) <= 1e-12 * std::abs(fa.z));
    const Vec3 fv = magnetic_force(1.9496e6, g1, 2.0 * kVolume);
    CHECK(fv.x == doctest::Approx(2.0 * magnetic_force(1.9496e6, g1, kVolume).x).epsilon(1e-12));
}

TEST_CASE("sphere spec derived quantities stay consistent") {
    SphereSpec spec;
    CHECK(spec.volume() == doctest::Approx(kVolume).epsilon(1e-14));
    CHECK(spec.moment() == doctest::Approx(spec.magnetization * spec.volume()).epsilon(1e-12));
    CHECK(spec.mass() == doctest::Approx(8120.0 * kVolume).epsilon(1e-13));
    spec.radius = 1.5e-4;
    CHECK(spec.moment() == doctest::Approx(spec.magnetization * sphere_volume(1.5e-4)).epsilon(1e-12));
}

TEST_CASE("gradient clamping") {
    const GradientLimits limits;
    SUBCASE("within limits passes through unchanged") {
        GradientCommand cmd;
        cmd.gradient = {0.01, -0.02, 0.03};
        cmd.timestamp = 1.5;
        const auto out = clamp_gradient(cmd, limits);
        CHECK(out.gradient == cmd.gradient);
        CHECK(out.timestamp == 1.5);
        CHECK(!out.clipped[0]);
        CHECK(!out.clipped[1]);
        CHECK(!out.clipped[2]);
    }
    SUBCASE("saturation flags the axis") {
        GradientCommand cmd;
        cmd.gradient = {0.10, 0.0, 0.0};
        const auto out = clamp_gradient(cmd, limits);
        CHECK(out.gradient.x == doctest::Approx(0.040));
        CHECK(out.clipped[0]);
        CHECK(!out.clipped[1]);
    }
    SUBCASE("symmetric saturation keeps signs") {
        GradientCommand cmd;
        cmd.gradient = {-0.05, 0.05, 0.0};
        const auto out = clamp_gradient(cmd, limits);
        CHECK(out.gradient.x == doctest::Approx(-0.040));
        CHECK(out.gradient.y == doctest::Approx(0.040));
        CHECK(out.clipped[0]);
        CHECK(out.clipped[1]);
        CHECK(!out.clipped[2]);
    }
    SUBCASE("clamping is idempotent") {
        GradientCommand cmd;
        cmd.gradient = {-0.05, 0.021, 0.0};
        const auto once = clamp_gradient(cmd, limits);
        const auto twice = clamp_gradient(once, limits);
        CHECK(once.gradient == twice.gradient);
        CHECK(once.clipped == twice.clipped);
    }
}

}  // TEST_SUITE
