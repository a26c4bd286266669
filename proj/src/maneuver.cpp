#include "flatlo/maneuver.hpp"

#include "flatlo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace flatlo {

namespace {

// Number of sample steps covering `length` at spacing `step`. A relative slack
// of 1e-10 absorbs rounding in length/step so an exact multiple does not
// produce a spurious sub-nanometre final step.
std::size_t step_count(double length, double step) {
    if (length <= 0.0) {
        return 0;
    }
    const double q = length / step;
    const double n = std::ceil(q - 1e-10 * q);
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

void check_sampling(double vel, double dt) {
    if (!(std::isfinite(vel) && vel > 0.0)) {
        throw ParameterError(fmt::format("maneuver airspeed must be > 0 (got {})", vel));
    }
    if (!(std::isfinite(dt) && dt > 0.0)) {
        throw ParameterError(fmt::format("sample period must be > 0 (got {})", dt));
    }
}

template <typename PointAt>
ReferenceTrajectory sample_path(const Position3& start, double length, double vel, double dt,
                                PointAt&& point_at) {
    const std::size_t n = step_count(length, vel * dt);
    ReferenceTrajectory out;
    out.points.reserve(n + 1);
    out.points.push_back({start, 0.0});
    for (std::size_t k = 1; k < n; ++k) {
        const double s = static_cast<double>(k) * vel * dt;
        out.points.push_back({point_at(s), static_cast<double>(k) * dt});
    }
    if (n > 0) {
        out.points.push_back({point_at(length), length / vel});
    }
    out.segment_boundaries = {out.points.size() - 1};
    out.path_length = length;
    out.airspeed = vel;
    return out;
}

} // namespace

ReferenceTrajectory fw_generate(const GoForwardSpec& spec, double dt) {
    if (!(std::isfinite(spec.d) && spec.d >= 0.0)) {
        throw ParameterError(fmt::format("go-forward length must be >= 0 (got {})", spec.d));
    }
    check_sampling(spec.vel, dt);
    if (!(std::abs(spec.beta) < kPi / 2.0)) {
        throw ParameterError("go-forward climb angle must satisfy |beta| < pi/2");
    }
    const Direction dir{spec.phi, spec.beta};
    const Position3 u = dir.unit();
    auto traj = sample_path(spec.start, spec.d, spec.vel, dt,
                            [&](double s) { return spec.start + u * s; });
    traj.end_direction = dir;
    return traj;
}

int turn_sense(double theta) { return std::cos(theta) >= 0.0 ? 1 : -1; }

ReferenceTrajectory turn_generate(const TurnSpec& spec, double dt) {
    if (!(std::isfinite(spec.r) && spec.r > 0.0)) {
        throw ParameterError(fmt::format("turn radius must be > 0 (got {})", spec.r));
    }
    if (!(std::isfinite(spec.alpha) && spec.alpha > 0.0 && spec.alpha <= 2.0 * kPi)) {
        throw ParameterError(fmt::format("turn sweep must be in (0, 2 pi] (got {})", spec.alpha));
    }
    if (!(std::abs(spec.beta) < kPi / 2.0)) {
        throw ParameterError("turn climb angle must satisfy |beta| < pi/2");
    }
    check_sampling(spec.vel, dt);

    const double sense = turn_sense(spec.theta);
    const double rho = spec.r * std::cos(spec.beta);
    const double climb = std::sin(spec.beta);
    const Position3 center{spec.start.x - sense * rho * std::sin(spec.phi),
                           spec.start.y + sense * rho * std::cos(spec.phi), spec.start.h};

    auto point_at = [&](double s) {
        const double psi = spec.phi + sense * s / spec.r;
        return Position3{center.x + sense * rho * std::sin(psi),
                         center.y - sense * rho * std::cos(psi), spec.start.h + s * climb};
    };
    const double length = spec.r * spec.alpha;
    auto traj = sample_path(spec.start, length, spec.vel, dt, point_at);
    traj.end_direction = {spec.phi + sense * spec.alpha, spec.beta};
    return traj;
}

Direction fit_angles(const Position3& p_prev, const Position3& p_last) {
    const Position3 d = p_last - p_prev;
    const double len = d.norm();
    if (!(len > 0.0)) {
        throw DegenerateSegmentError("fit_angles: coincident points");
    }
    return {std::atan2(d.y, d.x), std::asin(std::clamp(d.h / len, -1.0, 1.0))};
}

} // namespace flatlo
