// FLATLO: latitudinal-to-longitudinal transition references for a squadron.
#pragma once

#include "flatlo/core.hpp"

#include <vector>

namespace flatlo {

/// Number of maneuvers in every transition: initial advance, turn, diagonal,
/// turn, final straight.
inline constexpr std::size_t kManeuverCount = 5;

/// Side convention. Even N: even i is LEFT, odd i is RIGHT. Odd N: i = 0 is
/// CENTER, odd i LEFT, even i > 0 RIGHT. Mirrored pairs share |offset|.
Side get_side(std::size_t i, std::size_t n);

/// Unsigned lateral distance of aircraft i from the centerline.
double lateral_offset(std::size_t i, std::size_t n, double delta_d);

/// Initial forward advance before the aircraft starts converging.
double move_forward(std::size_t i, std::size_t n, double delta_d);

/// Integer multiple of delta_d returned by move_forward; exact for any N.
long long move_forward_multiple(std::size_t i, std::size_t n);

/// Length of the 45 degree leg toward the centerline:
/// sqrt(2) * (delta - 2 r (1 - cos(pi/4))). Throws ConfigurationError if negative.
double diagonal_length(double delta, double r);

struct FlatloPlan {
    std::size_t aircraft_index = 0;
    double delta_m = 0.0;
    Side side = Side::Left;
    double lateral_offset = 0.0;
    double diagonal_len = 0.0;
    double vel = 0.0; ///< synchronized airspeed
    ReferenceTrajectory trajectory;
};

/// Five-maneuver reference for aircraft i, timed at spec.vel_base.
FlatloPlan flatlo(std::size_t i, const FormationSpec& spec);

/// Assigns vel_i = vel_base * L_i / L_max and re-times every trajectory so all
/// of them end at L_max / vel_base. Point positions are untouched.
void synchronize_velocities(std::vector<FlatloPlan>& plans, double vel_base);

/// flatlo for every aircraft (concurrently, `threads` = 0 picks the hardware
/// count) followed by synchronize_velocities. Output does not depend on the
/// thread count.
std::vector<FlatloPlan> squadron_references(const FormationSpec& spec, unsigned threads = 0);

} // namespace flatlo
