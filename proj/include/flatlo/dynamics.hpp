// Point-mass aircraft model, RK4 integration and measurement noise.
#pragma once

#include <cstdint>
#include <random>

namespace flatlo {

struct AircraftState {
    double V = 0.0;     ///< airspeed [m/s]
    double gamma = 0.0; ///< flight path angle [rad]
    double chi = 0.0;   ///< flight path heading [rad]
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;

    bool operator==(const AircraftState&) const = default;
};

/// Time derivative of every AircraftState component, same field order.
struct StateRate {
    double V = 0.0;
    double gamma = 0.0;
    double chi = 0.0;
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
};

struct ControlInput {
    double thrust_minus_drag_over_weight = 0.0; ///< (T - D) / W
    double n = 1.0;                             ///< load factor
    double mu = 0.0;                            ///< bank angle [rad]

    bool operator==(const ControlInput&) const = default;
};

struct DynamicsParams {
    double g = 9.80665;
    double thrust_ratio_min = -0.3;
    double thrust_ratio_max = 0.3;
    double n_min = 0.5;
    double n_max = 2.5;
    double mu_max = 3.14159265358979323846 / 4.0;

    bool operator==(const DynamicsParams&) const = default;
};

/// Clamps each channel to the configured bounds.
ControlInput saturate(const ControlInput& u, const DynamicsParams& params);

/// Equations of motion:
///   dV/dt     = g [(T - D)/W - sin(gamma)]
///   dgamma/dt = (g / V) [n cos(mu) - cos(gamma)]
///   dchi/dt   = g n sin(mu) / (V cos(gamma))
///   dx/dt = V cos(gamma) cos(chi), dy/dt = V cos(gamma) sin(chi), dh/dt = V sin(gamma)
///
/// Throws DomainError when V <= 0 or |gamma| >= pi/2.
StateRate derivatives(const AircraftState& state, const ControlInput& input,
                      const DynamicsParams& params);

/// Classical four-stage Runge-Kutta step with the input held over the step.
/// A stage leaving the model's domain raises IntegrationError tagged with `t`.
AircraftState rk4_step(const AircraftState& state, const ControlInput& input, double dt,
                       const DynamicsParams& params, double t = 0.0);

struct NoiseSpec {
    double level = 0.0025; ///< relative 1-sigma
    std::uint64_t seed = 1;

    bool operator==(const NoiseSpec&) const = default;
};

/// Seeded standard-normal stream owned by one aircraft.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream_id);

    double next_standard_normal();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Multiplies V, chi and gamma each by (1 + level * z), z ~ N(0, 1), drawing
/// three values per call in that order. Position is untouched.
AircraftState apply_noise(const AircraftState& state, const NoiseSpec& spec, NoiseStream& stream);

} // namespace flatlo
