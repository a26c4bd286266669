// Reference-tracking controller: pure pursuit on a lookahead point with
// proportional inner loops on heading, flight path angle and airspeed.
#pragma once

#include "flatlo/core.hpp"
#include "flatlo/dynamics.hpp"

namespace flatlo {

struct ControllerGains {
    double lookahead_time = 30.0; ///< [s]
    double k_speed = 1.0;         ///< (T-D)/W per unit relative speed error
    double k_gamma = 1.0;         ///< load factor per rad of flight path error
    double k_chi = 1.0;           ///< bank per rad of heading error
    double k_alt = 1.0;           ///< weight of altitude error in the climb command
    double k_along = 0.05;        ///< commanded speed change per metre of along-track lag [1/s]

    bool operator==(const ControllerGains&) const = default;
};

/// Throws ValidationError unless every gain is finite and > 0.
void validate(const ControllerGains& gains);

/// Position error of `p` relative to the reference at time t, split along the
/// reference tangent (positive when the aircraft lags) and across it.
struct TrackingError {
    double along = 0.0;
    double cross = 0.0;
};

TrackingError tracking_error(const Position3& p, const ReferenceTrajectory& reference, double t);

/// Commands for the measured state. The lookahead point is the reference at
/// t + lookahead_time, continued straight past the end of the reference. The
/// speed loop tracks `reference.airspeed` plus k_along times the along-track lag.
/// Outputs are saturated per `params`.
ControlInput track(const AircraftState& measured, const ReferenceTrajectory& reference, double t,
                   const ControllerGains& gains, const DynamicsParams& params);

} // namespace flatlo
