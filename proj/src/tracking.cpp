#include "flatlo/tracking.hpp"

#include "flatlo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace flatlo {

namespace {

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

double reference_speed(const ReferenceTrajectory& ref) {
    if (ref.airspeed > 0.0) {
        return ref.airspeed;
    }
    return ref.duration() > 0.0 ? ref.path_length / ref.duration() : 0.0;
}

} // namespace

void validate(const ControllerGains& g) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!(positive(g.lookahead_time) && positive(g.k_speed) && positive(g.k_gamma) &&
          positive(g.k_chi) && positive(g.k_alt) && positive(g.k_along))) {
        throw ValidationError("controller gains must all be finite and > 0");
    }
}

TrackingError tracking_error(const Position3& p, const ReferenceTrajectory& reference, double t) {
    if (reference.empty()) {
        throw ParameterError("tracking_error: empty reference");
    }
    const Position3 lag = reference.position_at(t) - p;
    const Position3 tangent = reference.tangent_at(t);
    const double along = lag.x * tangent.x + lag.y * tangent.y + lag.h * tangent.h;
    const Position3 across = lag - tangent * along;
    return {along, across.norm()};
}

ControlInput track(const AircraftState& m, const ReferenceTrajectory& reference, double t,
                   const ControllerGains& gains, const DynamicsParams& params) {
    if (reference.empty()) {
        throw ParameterError("track: empty reference");
    }
    const Position3 p{m.x, m.y, m.h};
    const Position3 here = reference.position_at(t);
    const TrackingError err = tracking_error(p, reference, t);

    const double v_ref = reference_speed(reference);
    const double v_cmd = std::clamp(v_ref + gains.k_along * err.along, 0.5 * v_ref, 1.5 * v_ref);
    const double thrust = std::sin(m.gamma) + gains.k_speed * (v_cmd - m.V) / v_cmd;

    const Position3 target = reference.extended_position_at(t + gains.lookahead_time);
    const Position3 d = target - p;
    const double horizontal = std::hypot(d.x, d.y);
    const double chi_cmd = std::atan2(d.y, d.x);
    const double gamma_cmd =
        std::atan2((target.h - here.h) + gains.k_alt * (here.h - m.h), horizontal);

    const double mu = std::clamp(gains.k_chi * wrap_angle(chi_cmd - m.chi), -params.mu_max, params.mu_max);
    const double n = (std::cos(m.gamma) + gains.k_gamma * (gamma_cmd - m.gamma)) / std::cos(mu);
    return saturate({thrust, n, mu}, params);
}

} // namespace flatlo
