#include <doctest.h>

#include <cmath>
#include <vector>

#include "mrsim/error.hpp"
#include "mrsim/safety.hpp"

using namespace mrsim;

namespace {

std::vector<GradientCommand> command_series(const std::vector<Vec3>& gradients, double spacing = 0.1) {
    std::vector<GradientCommand> cmds(gradients.size());
    for (std::size_t i = 0; i < gradients.size(); ++i) {
        cmds[i].timestamp = spacing * static_cast<double>(i);
        cmds[i].gradient = gradients[i];
    }
    return cmds;
}

std::vector<PathSample> line_samples(std::size_t count, double spacing) {
    std::vector<PathSample> samples(count);
    for (std::size_t i = 0; i < count; ++i) {
        samples[i].position = {spacing * static_cast<double>(i), 0.0, 0.0};
        samples[i].first_derivative = {1.0, 0.0, 0.0};
    }
    return samples;
}

}  // namespace

TEST_SUITE("safety") {

TEST_CASE("slew rate arithmetic") {
    CHECK(slew_rate(0.02, 0.02, 0.1, 0.5) == 0.0);
    CHECK(slew_rate(0.0, 0.01, 0.0005, 0.5) == doctest::Approx(10.0).epsilon(1e-12));
    // antisymmetry: decreasing gradient gives the negated rate
    CHECK(slew_rate(0.01, 0.0, 0.0005, 0.5) == doctest::Approx(-10.0).epsilon(1e-12));
    // linear in the isocenter distance
    CHECK(slew_rate(0.0, 0.01, 0.0005, 1.0) == doctest::Approx(20.0).epsilon(1e-12));
    try {
        (void)slew_rate(0.0, 0.01, 0.0, 0.5);
        FAIL("expected InvalidRiseTime");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidRiseTime);
    }
}

TEST_CASE("slew series checking") {
    const SlewParams params;  // T_r 0.1 s, r 0.5 m, limit 20 T/s
    SUBCASE("constant gradient passes with zero rates") {
        const auto cmds = command_series({{0.02, 0, 0}, {0.02, 0, 0}, {0.02, 0, 0}});
        const auto report = check_slew_series(cmds, params);
        CHECK(report.pass);
        CHECK(report.max_abs[0] == 0.0);
        CHECK(report.violations.empty());
    }
    SUBCASE("a 0.04 T/m step at the command cadence is 0.2 T/s") {
        const auto cmds = command_series({{0.0, 0, 0}, {0.04, 0, 0}});
        const auto report = check_slew_series(cmds, params);
        CHECK(report.max_abs[0] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(report.pass);
    }
    SUBCASE("the same step at a 0.5 ms rise time fails the 20 T/s limit") {
        SlewParams fast = params;
        fast.rise_time = 0.0005;
        const auto cmds = command_series({{0.0, 0, 0}, {0.04, 0, 0}});
        const auto report = check_slew_series(cmds, fast);
        CHECK(report.max_abs[0] == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(!report.pass);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0] == 0);
        CHECK(!report.axis_pass[0]);
        CHECK(report.axis_pass[1]);
    }
    SUBCASE("pass is equivalent to an empty violation list") {
        for (double step : {0.001, 0.01, 0.02, 0.05}) {
            const auto cmds = command_series({{0.0, 0, 0}, {step, step, 0}}, 0.0005);
            SlewParams fast = params;
            fast.rise_time = 0.0005;
            const auto report = check_slew_series(cmds, fast);
            CHECK(report.pass == report.violations.empty());
        }
    }
    SUBCASE("scaling all gradients by c scales every rate by c") {
        const auto base = command_series({{0.0, 0, 0}, {0.01, -0.005, 0.002}, {0.03, 0.01, -0.001}});
        auto scaled = base;
        for (auto& c : scaled) c.gradient = 3.0 * c.gradient;
        const auto ra = check_slew_series(base, params);
        const auto rb = check_slew_series(scaled, params);
        for (int axis = 0; axis < 3; ++axis) {
            for (std::size_t i = 0; i < ra.series[axis].size(); ++i) {
                CHECK(rb.series[axis][i] == doctest::Approx(3.0 * ra.series[axis][i]).epsilon(1e-14));
            }
        }
    }
    SUBCASE("fewer than two commands rejected") {
        const auto cmds = command_series({{0.0, 0, 0}});
        try {
            (void)check_slew_series(cmds, params);
            FAIL("expected InsufficientData");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InsufficientData);
        }
    }
    SUBCASE("non-monotone timestamps rejected") {
        auto cmds = command_series({{0.0, 0, 0}, {0.01, 0, 0}});
        cmds[1].timestamp = cmds[0].timestamp;
        try {
            (void)check_slew_series(cmds, params);
            FAIL("expected InvalidSeries");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidSeries);
        }
    }
}

TEST_CASE("virtual fixture clearance") {
    const auto samples = line_samples(200, 0.001);
    SUBCASE("on the centerline is ok") {
        std::size_t idx = 0;
        CHECK(!check_virtual_fixture({0.05, 0.0, 0.0}, samples, idx, 3e-3, 3e-4).has_value());
        CHECK(idx == 50);
    }
    SUBCASE("2.6 mm off-axis is inside the 2.7 mm clearance") {
        std::size_t idx = 0;
        CHECK(!check_virtual_fixture({0.05, 2.6e-3, 0.0}, samples, idx, 3e-3, 3e-4).has_value());
    }
    SUBCASE("2.8 mm off-axis violates and records the geometry") {
        std::size_t idx = 0;
        const auto v = check_virtual_fixture({0.05, 2.8e-3, 0.0}, samples, idx, 3e-3, 3e-4, 1.25);
        REQUIRE(v.has_value());
        CHECK(v->distance == doctest::Approx(2.8e-3).epsilon(1e-9));
        CHECK(v->allowed == doctest::Approx(2.7e-3).epsilon(1e-12));
        CHECK(v->timestamp == 1.25);
    }
    SUBCASE("anything strictly closer to the same sample is still ok") {
        for (double frac : {0.0, 0.3, 0.6, 0.9, 0.99}) {
            std::size_t idx = 0;
            CHECK(!check_virtual_fixture({0.05, frac * 2.7e-3, 0.0}, samples, idx, 3e-3, 3e-4).has_value());
        }
    }
    SUBCASE("impossible geometry rejected") {
        std::size_t idx = 0;
        try {
            (void)check_virtual_fixture({0, 0, 0}, samples, idx, 2e-4, 3e-4);
            FAIL("expected ImpossibleGeometry");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ImpossibleGeometry);
        }
    }
}

}  // TEST_SUITE
