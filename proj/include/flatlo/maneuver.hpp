// The two basic 3D maneuvers: go forward (FW) and turn (C).
#pragma once

#include "flatlo/core.hpp"

namespace flatlo {

struct GoForwardSpec {
    Position3 start;
    double phi = 0.0;  ///< heading from +x [rad]
    double beta = 0.0; ///< climb angle [rad]
    double vel = 0.0;  ///< [m/s]
    double d = 0.0;    ///< path length [m]
};

/// Circular turn. `theta` selects the rotation sense: theta = pi turns
/// clockwise seen from above (heading decreases), theta = 0 counterclockwise.
struct TurnSpec {
    Position3 start;
    double phi = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double alpha = 0.0; ///< sweep (0, 2 pi]
    double vel = 0.0;
    double r = 0.0;     ///< radius [m]
};

/// Straight segment sampled every vel*dt of arc length, last sample snapped to
/// the exact endpoint. Timestamps start at 0.
ReferenceTrajectory fw_generate(const GoForwardSpec& spec, double dt);

/// Turn at constant climb angle: the horizontal projection is an arc of radius
/// r*cos(beta), altitude rises by s*sin(beta) over path length s, so the 3D
/// arc length is r*alpha and the sample spacing matches fw_generate.
ReferenceTrajectory turn_generate(const TurnSpec& spec, double dt);

/// +1 for counterclockwise, -1 for clockwise.
int turn_sense(double theta);

/// Direction of the displacement from p_prev to p_last:
/// beta2 = asin(dh / D), phi2 = atan2(dy, dx).
Direction fit_angles(const Position3& p_prev, const Position3& p_last);

} // namespace flatlo
