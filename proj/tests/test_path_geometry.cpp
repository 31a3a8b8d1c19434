#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "mrsim/error.hpp"
#include "mrsim/path_geometry.hpp"

using namespace mrsim;
using std::numbers::pi;

namespace {

std::vector<Waypoint> circle_waypoints(double radius, int per_turn) {
    std::vector<Waypoint> wps;
    for (int i = 0; i <= per_turn; ++i) {
        const double t = 2.0 * pi * i / per_turn;
        wps.push_back({t, radius * std::cos(t), radius * std::sin(t), 0.0});
    }
    return wps;
}

}  // namespace

TEST_SUITE("path_geometry") {

TEST_CASE("pchip reproduces constant data exactly") {
    const auto ip = PchipInterpolant::build({{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}});
    for (double t = 0.0; t <= 2.0; t += 0.01) {
        CHECK(ip.value(t) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("pchip is exactly linear on collinear data") {
    const auto ip = PchipInterpolant::build({{0.0, 0.0}, {1.0, 2.0}, {2.0, 4.0}});
    CHECK(ip.value(1.5) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(ip.first_derivative(0.7) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("pchip does not overshoot monotone data") {
    const auto ip = PchipInterpolant::build({{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.1}, {3.0, 4.0}});
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 10000; ++i) {
        const double t = 3.0 * i / 9999.0;
        const double v = ip.value(t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0 - 1e-12);
    CHECK(hi <= 4.0 + 1e-12);
}

TEST_CASE("pchip interpolates nodes and is C1 at knots") {
    std::vector<std::pair<double, double>> nodes;
    for (int i = 0; i < 17; ++i) {
        const double t = 4.0 * i / 16.0;
        nodes.emplace_back(t, std::sin(t) + 0.3 * t * t);
    }
    const auto ip = PchipInterpolant::build(nodes);
    for (const auto& [t, v] : nodes) {
        CHECK(std::abs(ip.value(t) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    }
    for (std::size_t i = 1; i < ip.piece_count(); ++i) {
        const double knot = nodes[i].first;
        double vl, dl, d2l, vr, dr, d2r;
        ip.evaluate_piece(i - 1, knot, vl, dl, d2l);
        ip.evaluate_piece(i, knot, vr, dr, d2r);
        CHECK(std::abs(vl - vr) <= 1e-12 * std::max(1.0, std::abs(vl)));
        CHECK(std::abs(dl - dr) <= 1e-12 * std::max(1.0, std::abs(dl)));
    }
}

TEST_CASE("pchip rejects bad input") {
    try {
        (void)PchipInterpolant::build({{0.0, 1.0}});
        FAIL("expected InsufficientData");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
    try {
        (void)PchipInterpolant::build({{0.0, 1.0}, {0.0, 2.0}});
        FAIL("expected InvalidKnots");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidKnots);
    }
    try {
        (void)PchipInterpolant::build({{0.0, 1.0}, {1.0, std::nan("")}});
        FAIL("expected InvalidValue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidValue);
    }
}

TEST_CASE("two-node interpolant is the connecting line") {
    const auto ip = PchipInterpolant::build({{0.0, 1.0}, {2.0, 5.0}});
    CHECK(ip.value(1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(ip.second_derivative(1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("straight path evaluates to unit-speed line") {
    std::vector<Waypoint> wps;
    for (int i = 0; i <= 5; ++i) wps.push_back({double(i), double(i), 0.0, 0.0});
    const auto path = CenterlinePath::from_waypoints(wps);
    const PathPoint p = path.evaluate(2.37);
    CHECK(p.position.x == doctest::Approx(2.37).epsilon(1e-14));
    CHECK(p.first_derivative.x == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(norm(p.second_derivative) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("evaluation at a knot reproduces the waypoint") {
    const auto wps = circle_waypoints(2.0, 16);
    const auto path = CenterlinePath::from_waypoints(wps);
    const PathPoint p = path.evaluate(wps[5].t);
    CHECK(p.position.x == doctest::Approx(wps[5].x).epsilon(1e-14));
    CHECK(p.position.y == doctest::Approx(wps[5].y).epsilon(1e-14));
}

TEST_CASE("out of range evaluation throws OutOfDomain") {
    const auto path = CenterlinePath::from_waypoints({{0, 0, 0, 0}, {1, 1, 0, 0}});
    try {
        (void)path.evaluate(1.5);
        FAIL("expected OutOfDomain");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfDomain);
    }
}

TEST_CASE("analytic first derivative matches central finite differences") {
    const auto path = CenterlinePath::from_waypoints(circle_waypoints(2.0, 64));
    const double step = 1e-6;
    for (double t = 0.5; t < 5.5; t += 0.61) {
        const PathPoint p = path.evaluate(t);
        const PathPoint lo = path.evaluate(t - step);
        const PathPoint hi = path.evaluate(t + step);
        const Vec3 fd = (hi.position - lo.position) * (1.0 / (2.0 * step));
        CHECK(norm(fd - p.first_derivative) <= 1e-6 * std::max(1.0, norm(p.first_derivative)));
    }
}

TEST_CASE("curvature of analytic circle, line and helix") {
    for (double t = 0.0; t < 6.2; t += 0.37) {
        const Vec3 d1{-2.0 * std::sin(t), 2.0 * std::cos(t), 0.0};
        const Vec3 d2{-2.0 * std::cos(t), -2.0 * std::sin(t), 0.0};
        CHECK(curvature(d1, d2) == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(curvature({1, 0, 0}, {0, 0, 0}) == doctest::Approx(0.0));
    for (double t = 0.0; t < 6.2; t += 0.53) {
        const Vec3 d1{-std::sin(t), std::cos(t), 1.0};
        const Vec3 d2{-std::cos(t), -std::sin(t), 0.0};
        CHECK(curvature(d1, d2) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("degenerate tangent is rejected") {
    try {
        (void)curvature({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
        FAIL("expected DegenerateTangent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateTangent);
    }
}

TEST_CASE("discretize sample counts and arc length") {
    SUBCASE("10001 samples for unit range at h=1e-4") {
        const auto path = CenterlinePath::from_waypoints({{0, 0, 0, 0}, {1, 0.1, 0, 0}});
        const auto samples = path.discretize(1e-4);
        CHECK(samples.size() == 10001);
        CHECK(samples.back().arc_length == doctest::Approx(0.1).epsilon(1e-9));
    }
    SUBCASE("straight segment arc length is exact and non-decreasing") {
        const auto path = CenterlinePath::from_waypoints({{0, 0, 0, 0}, {1, 0.1, 0, 0}});
        const auto samples = path.discretize(0.001);
        CHECK(std::abs(samples.back().arc_length - 0.1) <= 1e-9);
        for (std::size_t i = 1; i < samples.size(); ++i) {
            CHECK(samples[i].arc_length >= samples[i - 1].arc_length);
        }
    }
    SUBCASE("quarter circle radius 1 arc length") {
        // unit parameter range so h=1e-4 lands exactly on t_max; waypoints
        // dense enough that the fit's speed error sits below the 1e-6 budget
        std::vector<Waypoint> wps;
        const int n = 1024;
        for (int i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            const double a = 0.5 * pi * t;
            wps.push_back({t, std::cos(a), std::sin(a), 0.0});
        }
        const auto path = CenterlinePath::from_waypoints(wps);
        const auto samples = path.discretize(1e-4);
        CHECK(std::abs(samples.back().arc_length - pi / 2.0) <= 1e-6);
    }
    SUBCASE("non-positive step rejected") {
        const auto path = CenterlinePath::from_waypoints({{0, 0, 0, 0}, {1, 0.1, 0, 0}});
        try {
            (void)path.discretize(0.0);
            FAIL("expected InvalidStep");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidStep);
        }
    }
}

TEST_CASE("curvature scale law: scaling waypoints by c scales K by 1/c") {
    const auto base = circle_waypoints(1.0, 32);
    std::vector<Waypoint> scaled = base;
    const double c = 3.5;
    for (auto& w : scaled) {
        w.x *= c;
        w.y *= c;
        w.z *= c;
    }
    const auto sa = CenterlinePath::from_waypoints(base).discretize(0.01);
    const auto sb = CenterlinePath::from_waypoints(scaled).discretize(0.01);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sa[i].curvature > 1e-12) {
            CHECK(sb[i].curvature == doctest::Approx(sa[i].curvature / c).epsilon(1e-9));
        }
    }
}

TEST_CASE("curvature is invariant under parameter scaling t -> 2t") {
    const auto base = circle_waypoints(1.0, 32);
    std::vector<Waypoint> repar = base;
    for (auto& w : repar) w.t *= 2.0;
    const auto sa = CenterlinePath::from_waypoints(base).discretize(0.01);
    const auto sb = CenterlinePath::from_waypoints(repar).discretize(0.02);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sb[i].curvature == doctest::Approx(sa[i].curvature).epsilon(1e-9));
    }
}

TEST_CASE("waypoint csv loads LF and CRLF and reports bad input") {
    SUBCASE("round trip with CRLF") {
        std::stringstream ss("t,x,y,z\r\n0,0,0,0\r\n1,0.1,0.002,0\r\n");
        const auto wps = read_waypoints_csv(ss, "mem");
        REQUIRE(wps.size() == 2);
        CHECK(wps[1].y == doctest::Approx(0.002));
    }
    SUBCASE("bad header") {
        std::stringstream ss("a,b,c,d\n0,0,0,0\n");
        CHECK_THROWS_AS((void)read_waypoints_csv(ss, "mem"), Error);
    }
    SUBCASE("non-increasing t") {
        std::stringstream ss("t,x,y,z\n0,0,0,0\n0,1,0,0\n");
        try {
            (void)read_waypoints_csv(ss, "mem");
            FAIL("expected InvalidKnots");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidKnots);
        }
    }
    SUBCASE("bad number") {
        std::stringstream ss("t,x,y,z\n0,0,zero,0\n1,1,0,0\n");
        CHECK_THROWS_AS((void)read_waypoints_csv(ss, "mem"), Error);
    }
}

}  // TEST_SUITE
