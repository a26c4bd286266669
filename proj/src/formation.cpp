#include "flatlo/formation.hpp"

#include "flatlo/errors.hpp"
#include "flatlo/maneuver.hpp"
#include "flatlo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <string>

namespace flatlo {

namespace {

void check_index(std::size_t i, std::size_t n) {
    if (i >= n) {
        throw ParameterError(fmt::format("aircraft index {} out of range for N = {}", i, n));
    }
}

bool odd(std::size_t v) { return v % 2 == 1; }

// Accumulates maneuvers into one trajectory. Each appended maneuver starts at
// the current end point, so its first sample is dropped and its timestamps are
// shifted by the current duration.
class ReferenceBuilder {
public:
    ReferenceBuilder(const Position3& start, Direction initial) : start_(start) {
        ref_.end_direction = initial;
        ref_.airspeed = 0.0;
    }

    Position3 end() const { return ref_.points.empty() ? start_ : ref_.points.back().position; }

    /// Joint direction for the next maneuver: the exact exit tangent of what
    /// has been emitted so far, or the initial direction while fewer than two
    /// points exist.
    Direction joint() const { return ref_.end_direction; }

    void append(const ReferenceTrajectory& seg) {
        const double t0 = ref_.duration();
        const std::size_t skip = ref_.points.empty() ? 0 : 1;
        for (std::size_t k = skip; k < seg.points.size(); ++k) {
            ref_.points.push_back({seg.points[k].position, t0 + seg.points[k].t});
        }
        ref_.segment_boundaries.push_back(ref_.points.size() - 1);
        ref_.path_length += seg.path_length;
        ref_.airspeed = seg.airspeed;
        if (seg.points.size() >= 2 && ref_.points.size() >= 2) {
            ref_.end_direction = seg.end_direction;
        }
    }

    void reserve(std::size_t n) { ref_.points.reserve(n); }

    ReferenceTrajectory take() { return std::move(ref_); }

private:
    Position3 start_;
    ReferenceTrajectory ref_;
};

std::size_t estimate_points(double length, double vel, double dt) {
    return static_cast<std::size_t>(length / (vel * dt)) + 2 * kManeuverCount + 1;
}

} // namespace

Side get_side(std::size_t i, std::size_t n) {
    check_index(i, n);
    if (!odd(n)) {
        return odd(i) ? Side::Right : Side::Left;
    }
    if (i == 0) {
        return Side::Center;
    }
    return odd(i) ? Side::Left : Side::Right;
}

double lateral_offset(std::size_t i, std::size_t n, double delta_d) {
    check_index(i, n);
    if (!odd(n)) {
        return delta_d / 2.0 + static_cast<double>(i / 2) * delta_d;
    }
    if (i == 0) {
        return 0.0;
    }
    return delta_d * static_cast<double>((i + 1) / 2);
}

long long move_forward_multiple(std::size_t i, std::size_t n) {
    check_index(i, n);
    if (odd(n) == odd(i)) {
        const auto k = static_cast<long long>((n - i) / 2);
        return k + 2 * (k - 1);
    }
    return 3 * static_cast<long long>((n - i - 1) / 2);
}

double move_forward(std::size_t i, std::size_t n, double delta_d) {
    if (!(delta_d > 0.0)) {
        throw ParameterError("move_forward: delta_d must be > 0");
    }
    return static_cast<double>(move_forward_multiple(i, n)) * delta_d;
}

double diagonal_length(double delta, double r) {
    const double len = std::sqrt(2.0) * (delta - 2.0 * r * (1.0 - std::cos(kQuarterTurn)));
    if (len < 0.0) {
        throw ConfigurationError(fmt::format(
            "negative diagonal leg {:.17g} m: lateral offset {:.17g} m is smaller than "
            "2 r (1 - cos(pi/4)) = {:.17g} m",
            len, delta, 2.0 * r * (1.0 - std::cos(kQuarterTurn))));
    }
    return len;
}

FlatloPlan flatlo(std::size_t i, const FormationSpec& spec) {
    validate(spec);
    check_index(i, spec.n_aircraft);

    FlatloPlan plan;
    plan.aircraft_index = i;
    plan.delta_m = move_forward(i, spec.n_aircraft, spec.delta_d);
    plan.side = get_side(i, spec.n_aircraft);
    plan.lateral_offset = lateral_offset(i, spec.n_aircraft, spec.delta_d);
    plan.vel = spec.vel_base;

    const Position3 start = initial_positions(spec)[i];
    const double vel = spec.vel_base;
    ReferenceBuilder ref(start, {spec.phi, spec.beta});

    auto forward = [&](double d) {
        const Direction j = ref.joint();
        ref.append(fw_generate({ref.end(), j.phi, j.beta, vel, d}, spec.dt));
    };
    auto turn = [&](double theta) {
        const Direction j = ref.joint();
        ref.append(turn_generate({ref.end(), j.phi, j.beta, theta, kQuarterTurn, vel, spec.r}, spec.dt));
    };

    const double arc = spec.r * kQuarterTurn;
    if (plan.side == Side::Center) {
        // Straight flight matching the along-track advance the turn sequence
        // gives an aircraft with zero offset: 2 r sin(pi/4) - 2 r (1 - cos(pi/4)),
        // split across the two turn slots so there are still five maneuvers.
        const double half = spec.r * (std::sin(kQuarterTurn) - (1.0 - std::cos(kQuarterTurn)));
        ref.reserve(estimate_points(plan.delta_m + 2.0 * half + spec.k2, vel, spec.dt));
        forward(plan.delta_m);
        forward(half);
        forward(0.0);
        forward(half);
        forward(spec.k2);
        plan.diagonal_len = 0.0;
    } else {
        try {
            plan.diagonal_len = diagonal_length(plan.lateral_offset, spec.r);
        } catch (const ConfigurationError& e) {
            throw ConfigurationError(fmt::format("aircraft {}: {}", i, e.what()), i);
        }
        ref.reserve(estimate_points(plan.delta_m + 2.0 * arc + plan.diagonal_len + spec.k2, vel, spec.dt));
        const bool left = plan.side == Side::Left;
        forward(plan.delta_m);
        turn(left ? kPi : 0.0); // toward the centerline
        forward(plan.diagonal_len);
        turn(left ? 0.0 : kPi); // onto the centerline
        forward(spec.k2);
    }
    plan.trajectory = ref.take();
    plan.trajectory.airspeed = vel;
    return plan;
}

void synchronize_velocities(std::vector<FlatloPlan>& plans, double vel_base) {
    if (plans.empty()) {
        throw ParameterError("synchronize_velocities: no plans");
    }
    if (!(vel_base > 0.0)) {
        throw ParameterError("synchronize_velocities: vel_base must be > 0");
    }
    double l_max = 0.0;
    for (const auto& p : plans) {
        if (!(p.trajectory.path_length > 0.0) || p.trajectory.size() < 2) {
            throw ConfigurationError(
                fmt::format("aircraft {} has a zero-length path", p.aircraft_index), p.aircraft_index);
        }
        l_max = std::max(l_max, p.trajectory.path_length);
    }
    const double arrival = l_max / vel_base;
    for (auto& p : plans) {
        auto& traj = p.trajectory;
        const double l = traj.path_length;
        const double scale = arrival / traj.duration();
        for (auto& pt : traj.points) {
            pt.t *= scale;
        }
        traj.points.back().t = arrival;
        p.vel = l == l_max ? vel_base : vel_base * l / l_max;
        traj.airspeed = p.vel;
    }
}

std::vector<FlatloPlan> squadron_references(const FormationSpec& spec, unsigned threads) {
    validate(spec);
    std::vector<FlatloPlan> plans(spec.n_aircraft);
    std::vector<std::string> failures(spec.n_aircraft);
    detail::parallel_for(spec.n_aircraft, threads, [&](std::size_t i) {
        try {
            plans[i] = flatlo(i, spec);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    std::string summary;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            summary += fmt::format("{}[aircraft {}] {}", summary.empty() ? "" : "; ", i, failures[i]);
            first = first.value_or(i);
        }
    }
    if (!summary.empty()) {
        throw ConfigurationError(summary, first);
    }
    synchronize_velocities(plans, spec.vel_base);
    return plans;
}

} // namespace flatlo
