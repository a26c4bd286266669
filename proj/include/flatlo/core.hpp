// Shared domain types and geometric conventions.
//
// World frame: x points along the initial flight direction when phi = beta = 0,
// y points left, h points up. The squadron centerline passes through the origin.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace flatlo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kQuarterTurn = kPi / 4.0;

struct Position3 {
    double x = 0.0; ///< forward / longitudinal axis [m]
    double y = 0.0; ///< lateral axis, positive left [m]
    double h = 0.0; ///< altitude [m]

    constexpr Position3 operator+(const Position3& o) const { return {x + o.x, y + o.y, h + o.h}; }
    constexpr Position3 operator-(const Position3& o) const { return {x - o.x, y - o.y, h - o.h}; }
    constexpr Position3 operator*(double s) const { return {x * s, y * s, h * s}; }
    constexpr bool operator==(const Position3&) const = default;

    double norm() const { return std::sqrt(x * x + y * y + h * h); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(h); }
};

inline double distance(const Position3& a, const Position3& b) { return (a - b).norm(); }

inline Position3 lerp(const Position3& a, const Position3& b, double f) {
    return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f, a.h + (b.h - a.h) * f};
}

/// Direction of travel: horizontal heading from +x (CCW positive) and climb angle.
struct Direction {
    double phi = 0.0;
    double beta = 0.0;

    constexpr bool operator==(const Direction&) const = default;

    Position3 unit() const {
        return {std::cos(beta) * std::cos(phi), std::cos(beta) * std::sin(phi), std::sin(beta)};
    }
};

struct ReferencePoint {
    Position3 position;
    double t = 0.0; ///< seconds since trajectory start
};

/// Timestamped reference samples for one aircraft.
///
/// `segment_boundaries[k]` is the index of the last point of maneuver k. A
/// maneuver of zero length repeats the previous boundary. The first maneuver
/// owns the start point, so maneuver k contributes
/// `boundary[k] - boundary[k-1]` points (`boundary[0] + 1` for k = 0).
struct ReferenceTrajectory {
    std::vector<ReferencePoint> points;
    std::vector<std::size_t> segment_boundaries;
    Direction end_direction;  ///< exact tangent at the final point
    double path_length = 0.0; ///< analytic arc length of all maneuvers [m]
    double airspeed = 0.0;    ///< constant speed the timestamps encode [m/s]

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
    double duration() const { return points.empty() ? 0.0 : points.back().t; }
    const Position3& final_position() const { return points.back().position; }

    /// Number of points contributed by each maneuver; sums to size().
    std::vector<std::size_t> segment_point_counts() const;

    /// Maneuver index owning point `index`.
    std::size_t segment_of(std::size_t index) const;

    /// Linear interpolation in time, clamped to [0, duration].
    Position3 position_at(double t) const;

    /// Unit chord direction of the sample interval containing t.
    Position3 tangent_at(double t) const;

    /// Position at time t; beyond the end the final point is extended along
    /// `end_direction` at `airspeed`.
    Position3 extended_position_at(double t) const;

private:
    std::size_t interval_index(double t) const;
};

enum class Side { Left, Right, Center };

const char* to_string(Side side);

/// Squadron parameters for one latitudinal-to-longitudinal transition.
struct FormationSpec {
    std::size_t n_aircraft = 4;
    double delta_d = 18300.0;     ///< nominal spacing [m]
    double vel_base = 30.5;       ///< airspeed of the longest path [m/s]
    double r = 4575.0;            ///< turn radius [m]
    double phi = 0.0;             ///< initial heading [rad]
    double beta = 0.0;            ///< initial climb angle [rad]
    double k2 = 0.0;              ///< final straight on the centerline [m]
    double dt = 1.0;              ///< reference sample period [s]
    double initial_altitude = 3050.0; ///< h0 [m]

    bool operator==(const FormationSpec&) const = default;
};

/// Smallest nonzero lateral offset from the centerline over the squadron.
double min_lateral_offset(std::size_t n_aircraft, double delta_d);

/// Largest turn radius that keeps every diagonal leg nonnegative.
double max_turn_radius(std::size_t n_aircraft, double delta_d);

/// Throws ValidationError naming the first violated constraint.
void validate(const FormationSpec& spec);

/// Latitudinal line: aircraft i at signed lateral offset per its side.
std::vector<Position3> initial_positions(const FormationSpec& spec);

/// Coordinates relative to the centerline of a squadron heading phi.
double along_track(const Position3& p, double phi);
double cross_track(const Position3& p, double phi);

} // namespace flatlo
