#ifndef MRSIM_PATH_GEOMETRY_HPP
#define MRSIM_PATH_GEOMETRY_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mrsim/vec3.hpp"

namespace mrsim {

// Tangent magnitudes below this are treated as degenerate for curvature.
inline constexpr double kTangentEpsilon = 1e-9;

struct Waypoint {
    double t = 0.0;  // strictly increasing path parameter, dimensionless
    double x = 0.0;  // meters
    double y = 0.0;
    double z = 0.0;
};

/// Shape-preserving piecewise cubic Hermite interpolant for one axis.
/// Node derivatives use the Fritsch-Carlson rule: zero where adjacent secant
/// slopes change sign or vanish, otherwise the weighted harmonic mean of the
/// two secants. Endpoint derivatives are the one-sided secants.
class PchipInterpolant {
public:
    static PchipInterpolant build(const std::vector<std::pair<double, double>>& nodes);

    double value(double t) const;
    double first_derivative(double t) const;
    // Piecewise linear; evaluated one-sided from the left at interior knots.
    double second_derivative(double t) const;
    void evaluate(double t, double& value, double& d1, double& d2) const;

    double t_min() const { return knots_.front(); }
    double t_max() const { return knots_.back(); }
    std::size_t piece_count() const { return knots_.size() - 1; }

    // Evaluates the cubic of piece `i` at `t` without domain checks against
    // neighbouring pieces. Used by continuity checks at knots.
    void evaluate_piece(std::size_t i, double t, double& value, double& d1, double& d2) const;

    const std::vector<double>& node_derivatives() const { return slopes_; }

private:
    PchipInterpolant() = default;
    std::size_t piece_index(double t) const;  // left-sided at interior knots

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

struct PathSample {
    double t = 0.0;
    Vec3 position;
    Vec3 first_derivative;
    Vec3 second_derivative;
    double curvature = 0.0;   // 1/m
    double arc_length = 0.0;  // cumulative, meters
};

struct PathPoint {
    Vec3 position;
    Vec3 first_derivative;
    Vec3 second_derivative;
};

/// Space-curve curvature from parametric derivatives.
double curvature(const Vec3& first_deriv, const Vec3& second_deriv);

class CenterlinePath {
public:
    static CenterlinePath from_waypoints(const std::vector<Waypoint>& waypoints);

    PathPoint evaluate(double t) const;
    std::vector<PathSample> discretize(double step) const;

    double t_min() const { return x_.t_min(); }
    double t_max() const { return x_.t_max(); }

    const PchipInterpolant& axis_x() const { return x_; }
    const PchipInterpolant& axis_y() const { return y_; }
    const PchipInterpolant& axis_z() const { return z_; }

private:
    CenterlinePath(PchipInterpolant x, PchipInterpolant y, PchipInterpolant z)
        : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {}

    PchipInterpolant x_, y_, z_;
};

/// Waypoint CSV: header `t,x,y,z`, one row per waypoint, LF or CRLF.
std::vector<Waypoint> load_waypoints_csv(const std::string& path);
std::vector<Waypoint> read_waypoints_csv(std::istream& in, const std::string& origin);

}  // namespace mrsim

#endif
