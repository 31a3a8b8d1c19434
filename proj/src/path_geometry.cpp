#include "mrsim/path_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

PchipInterpolant PchipInterpolant::build(const std::vector<std::pair<double, double>>& nodes) {
    if (nodes.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "need at least 2 nodes, got " + std::to_string(nodes.size()));
    }
    PchipInterpolant ip;
    ip.knots_.reserve(nodes.size());
    ip.values_.reserve(nodes.size());
    for (const auto& [t, v] : nodes) {
        if (!std::isfinite(t) || !std::isfinite(v)) {
            throw Error(ErrorKind::InvalidValue, "non-finite node at t=" + std::to_string(t));
        }
        if (!ip.knots_.empty() && t <= ip.knots_.back()) {
            throw Error(ErrorKind::InvalidKnots, "node parameters must be strictly increasing at t=" + std::to_string(t));
        }
        ip.knots_.push_back(t);
        ip.values_.push_back(v);
    }

    const std::size_t n = ip.knots_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = ip.knots_[k + 1] - ip.knots_[k];
        d[k] = (ip.values_[k + 1] - ip.values_[k]) / h[k];
    }

    ip.slopes_.assign(n, 0.0);
    ip.slopes_[0] = d[0];
    ip.slopes_[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dkm1 = d[k - 1];
        const double dk = d[k];
        if (dkm1 == 0.0 || dk == 0.0 || (dkm1 > 0.0) != (dk > 0.0)) {
            ip.slopes_[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            ip.slopes_[k] = (w1 + w2) / (w1 / dkm1 + w2 / dk);
        }
    }
    return ip;
}

std::size_t PchipInterpolant::piece_index(double t) const {
    // (t_j, t_{j+1}] buckets so interior knots resolve to the left piece.
    if (t <= knots_.front()) return 0;
    auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - knots_.begin());
    if (j >= knots_.size()) j = knots_.size() - 1;
    return j - 1;
}

void PchipInterpolant::evaluate_piece(std::size_t i, double t, double& value, double& d1, double& d2) const {
    const double a = knots_[i];
    const double h = knots_[i + 1] - a;
    const double u = (t - a) / h;
    const double v0 = values_[i], v1 = values_[i + 1];
    const double m0 = slopes_[i], m1 = slopes_[i + 1];

    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    value = v0 * h00 + h * m0 * h10 + v1 * h01 + h * m1 * h11;

    const double g00 = 6.0 * u * (u - 1.0);
    const double g10 = 3.0 * u * u - 4.0 * u + 1.0;
    const double g01 = -g00;
    const double g11 = 3.0 * u * u - 2.0 * u;
    d1 = (v0 * g00 + h * m0 * g10 + v1 * g01 + h * m1 * g11) / h;

    const double q00 = 12.0 * u - 6.0;
    const double q10 = 6.0 * u - 4.0;
    const double q01 = -q00;
    const double q11 = 6.0 * u - 2.0;
    d2 = (v0 * q00 + h * m0 * q10 + v1 * q01 + h * m1 * q11) / (h * h);
}

void PchipInterpolant::evaluate(double t, double& value, double& d1, double& d2) const {
    evaluate_piece(piece_index(t), t, value, d1, d2);
}

double PchipInterpolant::value(double t) const {
    double v, d1, d2;
    evaluate_piece(piece_index(t), t, v, d1, d2);
    return v;
}

double PchipInterpolant::first_derivative(double t) const {
    double v, d1, d2;
    evaluate_piece(piece_index(t), t, v, d1, d2);
    return d1;
}

double PchipInterpolant::second_derivative(double t) const {
    double v, d1, d2;
    evaluate_piece(piece_index(t), t, v, d1, d2);
    return d2;
}

double curvature(const Vec3& first_deriv, const Vec3& second_deriv) {
    const double speed_sq = norm_squared(first_deriv);
    if (std::sqrt(speed_sq) <= kTangentEpsilon) {
        throw Error(ErrorKind::DegenerateTangent,
                    "tangent magnitude " + std::to_string(std::sqrt(speed_sq)) + " below " +
                        std::to_string(kTangentEpsilon));
    }
    const Vec3 c = cross(first_deriv, second_deriv);
    return norm(c) / (speed_sq * std::sqrt(speed_sq));
}

CenterlinePath CenterlinePath::from_waypoints(const std::vector<Waypoint>& waypoints) {
    if (waypoints.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "need at least 2 waypoints, got " + std::to_string(waypoints.size()));
    }
    std::vector<std::pair<double, double>> nx, ny, nz;
    nx.reserve(waypoints.size());
    ny.reserve(waypoints.size());
    nz.reserve(waypoints.size());
    for (const auto& w : waypoints) {
        nx.emplace_back(w.t, w.x);
        ny.emplace_back(w.t, w.y);
        nz.emplace_back(w.t, w.z);
    }
    return CenterlinePath(PchipInterpolant::build(nx), PchipInterpolant::build(ny), PchipInterpolant::build(nz));
}

PathPoint CenterlinePath::evaluate(double t) const {
    if (t < t_min() || t > t_max()) {
        throw Error(ErrorKind::OutOfDomain,
                    "t=" + std::to_string(t) + " outside [" + std::to_string(t_min()) + ", " +
                        std::to_string(t_max()) + "]");
    }
    PathPoint p;
    double vx, dx1, dx2, vy, dy1, dy2, vz, dz1, dz2;
    x_.evaluate(t, vx, dx1, dx2);
    y_.evaluate(t, vy, dy1, dy2);
    z_.evaluate(t, vz, dz1, dz2);
    p.position = {vx, vy, vz};
    p.first_derivative = {dx1, dy1, dz1};
    p.second_derivative = {dx2, dy2, dz2};
    return p;
}

std::vector<PathSample> CenterlinePath::discretize(double step) const {
    const double span = t_max() - t_min();
    if (!(step > 0.0) || step > span) {
        throw Error(ErrorKind::InvalidStep, "step " + std::to_string(step) + " must be in (0, " + std::to_string(span) + "]");
    }
    // Snap near-integer ratios so 1.0/0.0001 style counts stay exact.
    const std::size_t count = static_cast<std::size_t>(std::floor(span / step + 1e-6)) + 1;
    std::vector<PathSample> samples;
    samples.reserve(count);
    double prev_speed = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double t = t_min() + static_cast<double>(i) * step;
        if (t > t_max()) t = t_max();
        const PathPoint p = evaluate(t);
        PathSample s;
        s.t = t;
        s.position = p.position;
        s.first_derivative = p.first_derivative;
        s.second_derivative = p.second_derivative;
        s.curvature = curvature(p.first_derivative, p.second_derivative);
        const double speed = norm(p.first_derivative);
        if (i == 0) {
            s.arc_length = 0.0;
        } else {
            const double dt = t - samples.back().t;
            s.arc_length = samples.back().arc_length + 0.5 * (prev_speed + speed) * dt;
        }
        prev_speed = speed;
        samples.push_back(s);
    }
    return samples;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<Waypoint> read_waypoints_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::InsufficientData, origin + ": empty waypoint file");
    }
    if (strip(line) != "t,x,y,z") {
        throw Error(ErrorKind::InvalidValue, origin + ": expected header 't,x,y,z', got '" + strip(line) + "'");
    }
    std::vector<Waypoint> waypoints;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        const auto fields = split_csv_line(s);
        if (fields.size() != 4) {
            throw Error(ErrorKind::InvalidValue,
                        origin + ":" + std::to_string(lineno) + ": expected 4 fields, got " +
                            std::to_string(fields.size()));
        }
        Waypoint w;
        double* slots[4] = {&w.t, &w.x, &w.y, &w.z};
        for (int i = 0; i < 4; ++i) {
            try {
                std::size_t used = 0;
                *slots[i] = std::stod(strip(fields[i]), &used);
                if (used != strip(fields[i]).size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidValue,
                            origin + ":" + std::to_string(lineno) + ": bad number '" + strip(fields[i]) + "'");
            }
            if (!std::isfinite(*slots[i])) {
                throw Error(ErrorKind::InvalidValue, origin + ":" + std::to_string(lineno) + ": non-finite value");
            }
        }
        if (!waypoints.empty() && w.t <= waypoints.back().t) {
            throw Error(ErrorKind::InvalidKnots,
                        origin + ":" + std::to_string(lineno) + ": t must be strictly increasing");
        }
        waypoints.push_back(w);
    }
    if (waypoints.size() < 2) {
        throw Error(ErrorKind::InsufficientData, origin + ": need at least 2 waypoints");
    }
    return waypoints;
}

std::vector<Waypoint> load_waypoints_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidPath, "cannot open waypoint file '" + path + "'");
    }
    return read_waypoints_csv(in, path);
}

}  // namespace mrsim
