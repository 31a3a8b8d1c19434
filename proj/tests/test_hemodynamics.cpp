#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrsim/error.hpp"
#include "mrsim/hemodynamics.hpp"

using namespace mrsim;

namespace {

// 1 ml/s through a 3 mm radius vessel.
constexpr double kMeanRate = 1e-6;
constexpr double kVesselRadius = 3e-3;
const double kMeanSpeed = 0.035367765131532297;  // 1e-6 / (pi * 9e-6)

}  // namespace

TEST_SUITE("hemodynamics") {

TEST_CASE("steady flow speed from volumetric rate") {
    const auto w = FlowWaveform::steady(kMeanRate);
    CHECK(w.velocity(kVesselRadius, 0.0) == doctest::Approx(kMeanSpeed).epsilon(1e-12));
    CHECK(w.velocity(kVesselRadius, 17.3) == doctest::Approx(kMeanSpeed).epsilon(1e-12));
}

TEST_CASE("pulsatile flow is exactly periodic") {
    const auto w = FlowWaveform::pulsatile(FlowRegime::Normal, kMeanRate, 60.0);
    const double period = 60.0 / 60.0;
    for (double t : {0.0, 0.125, 0.4375, 0.75}) {
        CHECK(w.velocity(kVesselRadius, t) == w.velocity(kVesselRadius, t + period));
        CHECK(w.velocity(kVesselRadius, t) == w.velocity(kVesselRadius, t + 3.0 * period));
    }
}

TEST_CASE("pulsatile mean over one period matches the steady speed") {
    for (auto regime : {FlowRegime::Normal, FlowRegime::Fast}) {
        const double bpm = regime == FlowRegime::Normal ? 60.0 : 120.0;
        const auto w = FlowWaveform::pulsatile(regime, kMeanRate, bpm);
        const double period = 60.0 / bpm;
        const int n = 1'000'000;
        double sum = 0.5 * (w.velocity(kVesselRadius, 0.0) + w.velocity(kVesselRadius, period));
        for (int i = 1; i < n; ++i) {
            sum += w.velocity(kVesselRadius, period * i / n);
        }
        const double mean = sum / n;
        CHECK(std::abs(mean - kMeanSpeed) <= 1e-3 * kMeanSpeed);
    }
}

TEST_CASE("flow is clamped at zero") {
    // A one-harmonic shape with amplitude 2 dips below zero before clamping.
    const auto w = FlowWaveform::pulsatile(FlowRegime::Normal, kMeanRate, 60.0, {{2.0, 0.0}});
    double lo = 1e300;
    for (int i = 0; i < 20000; ++i) {
        lo = std::min(lo, w.velocity(kVesselRadius, i / 20000.0));
    }
    CHECK(lo >= 0.0);
    CHECK(w.velocity(kVesselRadius, 0.5) == 0.0);  // mean * (1 + 2 cos(pi)) < 0 clamps
}

TEST_CASE("non-positive vessel radius is rejected") {
    const auto w = FlowWaveform::steady(kMeanRate);
    try {
        (void)w.velocity(0.0, 0.0);
        FAIL("expected InvalidVessel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidVessel);
    }
}

TEST_CASE("waveform override table is interpolated and rescaled") {
    auto w = FlowWaveform::pulsatile(FlowRegime::Normal, kMeanRate, 60.0);
    // Triangle shape with mean 1.0: peaks at 2, troughs at 0.
    w.set_override_shape({{0.0, 0.0}, {0.25, 2.0}, {0.5, 0.0}, {0.75, 2.0}});
    const double period = 1.0;
    const int n = 200'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += w.velocity(kVesselRadius, period * i / n);
    }
    CHECK(std::abs(sum / n - kMeanSpeed) <= 1e-3 * kMeanSpeed);
    CHECK(w.velocity(kVesselRadius, 0.25) == doctest::Approx(2.0 * kMeanSpeed).epsilon(1e-9));
}

TEST_CASE("drag force examples") {
    SUBCASE("zero relative velocity gives zero force") {
        const Vec3 v{0.01, -0.02, 0.003};
        const Vec3 f = drag_force(0.47, 1.025, 2.8274333882308139e-7, v, v);
        CHECK(norm(f) == 0.0);
    }
    SUBCASE("paper constants at 0.1 m/s relative speed") {
        const Vec3 f = drag_force(0.47, 1.025, 2.8274333882308139e-7, {0.1, 0, 0}, {0, 0, 0});
        CHECK(f.x == doctest::Approx(6.810580173900973e-9).epsilon(1e-12));
        CHECK(f.y == 0.0);
    }
    SUBCASE("paper-linear form is linear in relative speed") {
        const Vec3 f1 = drag_force(0.47, 1.025, 2.8274333882308139e-7, {0.1, 0, 0}, {0, 0, 0});
        const Vec3 f2 = drag_force(0.47, 1.025, 2.8274333882308139e-7, {0.2, 0, 0}, {0, 0, 0});
        CHECK(f2.x == doctest::Approx(2.0 * f1.x).epsilon(1e-14));
    }
    SUBCASE("quadratic mode scales with the square") {
        const Vec3 f1 = drag_force(0.47, 1025.0, 2.8274333882308139e-7, {0.1, 0, 0}, {0, 0, 0}, DragMode::Quadratic);
        const Vec3 f2 = drag_force(0.47, 1025.0, 2.8274333882308139e-7, {0.2, 0, 0}, {0, 0, 0}, DragMode::Quadratic);
        CHECK(f2.x == doctest::Approx(4.0 * f1.x).epsilon(1e-12));
    }
    SUBCASE("swapping velocities negates the force exactly") {
        const Vec3 a{0.03, -0.01, 0.02}, b{-0.005, 0.017, 0.001};
        for (auto mode : {DragMode::PaperLinear, DragMode::Quadratic}) {
            const Vec3 f = drag_force(0.47, 1.025, 2.8274333882308139e-7, a, b, mode);
            const Vec3 g = drag_force(0.47, 1.025, 2.8274333882308139e-7, b, a, mode);
            CHECK(f.x == -g.x);
            CHECK(f.y == -g.y);
            CHECK(f.z == -g.z);
        }
    }
    SUBCASE("non-finite input rejected") {
        try {
            (void)drag_force(0.47, 1.025, 2.8e-7, {std::nan(""), 0, 0}, {0, 0, 0});
            FAIL("expected InvalidValue");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidValue);
        }
    }
}

TEST_CASE("velocity setpoint profile") {
    const VelocityProfileParams params{0.05, 100.0, 1.0, 3e-4, 1e-4};
    SUBCASE("zero curvature and matched clearance give v0") {
        CHECK(velocity_setpoint(params, 0.0, 3e-4) == doctest::Approx(0.05).epsilon(1e-12));
    }
    SUBCASE("curvature equal to k0 halves the speed") {
        CHECK(velocity_setpoint(params, 100.0, 3e-4) == doctest::Approx(0.025).epsilon(1e-12));
    }
    SUBCASE("curvature three times k0 quarters the speed") {
        CHECK(velocity_setpoint(params, 300.0, 3e-4) == doctest::Approx(0.0125).epsilon(1e-12));
    }
    SUBCASE("strictly decreasing in curvature") {
        double prev = velocity_setpoint(params, 0.0, 3e-4);
        for (double k = 10.0; k <= 1000.0; k *= 2.0) {
            const double v = velocity_setpoint(params, k, 3e-4);
            CHECK(v < prev);
            prev = v;
        }
    }
    SUBCASE("clamped at the stall floor") {
        const VelocityProfileParams tight{0.001, 100.0, 0.01, 5e-3, 1e-4};
        // (3e-4 - 5e-3)/0.01 = -0.47: the additive term drives v negative
        CHECK(velocity_setpoint(tight, 0.0, 3e-4) == doctest::Approx(1e-4));
    }
    SUBCASE("invalid params rejected") {
        CHECK_THROWS_AS((void)velocity_setpoint(VelocityProfileParams{0.0, 1.0, 1.0, 0.0, 1e-4}, 0.0, 3e-4), Error);
    }
}

}  // TEST_SUITE
