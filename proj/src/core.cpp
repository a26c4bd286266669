#include "flatlo/core.hpp"

#include "flatlo/errors.hpp"
#include "flatlo/formation.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace flatlo {

std::vector<std::size_t> ReferenceTrajectory::segment_point_counts() const {
    std::vector<std::size_t> counts;
    counts.reserve(segment_boundaries.size());
    for (std::size_t k = 0; k < segment_boundaries.size(); ++k) {
        counts.push_back(k == 0 ? segment_boundaries[0] + 1
                                : segment_boundaries[k] - segment_boundaries[k - 1]);
    }
    return counts;
}

std::size_t ReferenceTrajectory::segment_of(std::size_t index) const {
    auto it = std::lower_bound(segment_boundaries.begin(), segment_boundaries.end(), index);
    if (it == segment_boundaries.end()) {
        return segment_boundaries.empty() ? 0 : segment_boundaries.size() - 1;
    }
    return static_cast<std::size_t>(it - segment_boundaries.begin());
}

std::size_t ReferenceTrajectory::interval_index(double t) const {
    // index k such that points[k].t <= t < points[k+1].t, clamped to a valid interval
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double v, const ReferencePoint& p) { return v < p.t; });
    std::size_t k = it == points.begin() ? 0 : static_cast<std::size_t>(it - points.begin()) - 1;
    return std::min(k, points.size() - 2);
}

Position3 ReferenceTrajectory::position_at(double t) const {
    if (points.empty()) {
        throw ParameterError("position_at on empty reference");
    }
    if (points.size() == 1 || t <= points.front().t) {
        return points.front().position;
    }
    if (t >= points.back().t) {
        return points.back().position;
    }
    const std::size_t k = interval_index(t);
    const auto& a = points[k];
    const auto& b = points[k + 1];
    return lerp(a.position, b.position, (t - a.t) / (b.t - a.t));
}

Position3 ReferenceTrajectory::tangent_at(double t) const {
    if (points.size() < 2) {
        return end_direction.unit();
    }
    const std::size_t k = interval_index(std::clamp(t, points.front().t, points.back().t));
    const Position3 d = points[k + 1].position - points[k].position;
    const double len = d.norm();
    return len > 0.0 ? d * (1.0 / len) : end_direction.unit();
}

Position3 ReferenceTrajectory::extended_position_at(double t) const {
    if (points.empty()) {
        throw ParameterError("extended_position_at on empty reference");
    }
    const double end = points.back().t;
    if (t <= end) {
        return position_at(t);
    }
    return points.back().position + end_direction.unit() * (airspeed * (t - end));
}

const char* to_string(Side side) {
    switch (side) {
    case Side::Left: return "LEFT";
    case Side::Right: return "RIGHT";
    case Side::Center: return "CENTER";
    }
    return "?";
}

double min_lateral_offset(std::size_t n_aircraft, double delta_d) {
    return n_aircraft % 2 == 0 ? delta_d / 2.0 : delta_d;
}

double max_turn_radius(std::size_t n_aircraft, double delta_d) {
    return min_lateral_offset(n_aircraft, delta_d) / (2.0 * (1.0 - std::cos(kQuarterTurn)));
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ValidationError(what);
    }
}

} // namespace

void validate(const FormationSpec& spec) {
    require(spec.n_aircraft >= 2, fmt::format("n_aircraft must be >= 2 (got {})", spec.n_aircraft));
    require(std::isfinite(spec.delta_d) && spec.delta_d > 0.0, "delta_d must be finite and > 0");
    require(std::isfinite(spec.vel_base) && spec.vel_base > 0.0, "vel_base must be finite and > 0");
    require(std::isfinite(spec.r) && spec.r > 0.0, "turn radius must be finite and > 0");
    require(std::isfinite(spec.phi), "phi must be finite");
    require(std::isfinite(spec.beta) && std::abs(spec.beta) < kPi / 2.0, "|beta| must be < pi/2");
    require(std::isfinite(spec.k2) && spec.k2 >= 0.0, "k2 must be finite and >= 0");
    require(std::isfinite(spec.dt) && spec.dt > 0.0, "reference dt must be finite and > 0");
    require(std::isfinite(spec.initial_altitude) && spec.initial_altitude >= 0.0,
            "initial altitude must be finite and >= 0");

    const double r_max = max_turn_radius(spec.n_aircraft, spec.delta_d);
    if (spec.r > r_max) {
        // the innermost off-center aircraft has the shortest diagonal
        const std::size_t inner = spec.n_aircraft % 2 == 0 ? 0 : 1;
        throw ValidationError(
            fmt::format("turn radius {:.17g} m exceeds r <= delta_min / (2 (1 - cos(pi/4))) = {:.17g} m "
                        "(delta_min = {:.17g} m); aircraft {} would get a negative diagonal leg",
                        spec.r, r_max, min_lateral_offset(spec.n_aircraft, spec.delta_d), inner),
            inner, r_max);
    }
}

std::vector<Position3> initial_positions(const FormationSpec& spec) {
    validate(spec);
    const double lx = -std::sin(spec.phi);
    const double ly = std::cos(spec.phi);
    std::vector<Position3> out;
    out.reserve(spec.n_aircraft);
    for (std::size_t i = 0; i < spec.n_aircraft; ++i) {
        double offset = lateral_offset(i, spec.n_aircraft, spec.delta_d);
        switch (get_side(i, spec.n_aircraft)) {
        case Side::Left: break;
        case Side::Right: offset = -offset; break;
        case Side::Center: offset = 0.0; break;
        }
        out.push_back({offset * lx, offset * ly, spec.initial_altitude});
    }
    return out;
}

double along_track(const Position3& p, double phi) {
    return p.x * std::cos(phi) + p.y * std::sin(phi);
}

double cross_track(const Position3& p, double phi) {
    return -p.x * std::sin(phi) + p.y * std::cos(phi);
}

} // namespace flatlo
