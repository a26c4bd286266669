#include "flatlo/dynamics.hpp"

#include "flatlo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace flatlo {

namespace {

constexpr double kHalfPi = 3.14159265358979323846 / 2.0;

AircraftState advance(const AircraftState& s, const StateRate& k, double dt) {
    return {s.V + k.V * dt,   s.gamma + k.gamma * dt, s.chi + k.chi * dt,
            s.x + k.x * dt,   s.y + k.y * dt,         s.h + k.h * dt};
}

} // namespace

ControlInput saturate(const ControlInput& u, const DynamicsParams& p) {
    return {std::clamp(u.thrust_minus_drag_over_weight, p.thrust_ratio_min, p.thrust_ratio_max),
            std::clamp(u.n, p.n_min, p.n_max), std::clamp(u.mu, -p.mu_max, p.mu_max)};
}

StateRate derivatives(const AircraftState& s, const ControlInput& u, const DynamicsParams& p) {
    if (!(s.V > 0.0) || !std::isfinite(s.V)) {
        throw DomainError(fmt::format("airspeed must be > 0 (V = {})", s.V));
    }
    if (!(std::abs(s.gamma) < kHalfPi)) {
        throw DomainError(fmt::format("flight path angle must satisfy |gamma| < pi/2 (gamma = {})", s.gamma));
    }
    const double cg = std::cos(s.gamma);
    const double sg = std::sin(s.gamma);
    return {
        p.g * (u.thrust_minus_drag_over_weight - sg),
        p.g / s.V * (u.n * std::cos(u.mu) - cg),
        p.g * u.n * std::sin(u.mu) / (s.V * cg),
        s.V * cg * std::cos(s.chi),
        s.V * cg * std::sin(s.chi),
        s.V * sg,
    };
}

AircraftState rk4_step(const AircraftState& s, const ControlInput& u, double dt,
                       const DynamicsParams& p, double t) {
    if (!(dt > 0.0)) {
        throw ParameterError("rk4_step: dt must be > 0");
    }
    int stage = 1;
    try {
        const StateRate k1 = derivatives(s, u, p);
        stage = 2;
        const StateRate k2 = derivatives(advance(s, k1, dt / 2.0), u, p);
        stage = 3;
        const StateRate k3 = derivatives(advance(s, k2, dt / 2.0), u, p);
        stage = 4;
        const StateRate k4 = derivatives(advance(s, k3, dt), u, p);
        const double w = dt / 6.0;
        return {
            s.V + w * (k1.V + 2.0 * k2.V + 2.0 * k3.V + k4.V),
            s.gamma + w * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma),
            s.chi + w * (k1.chi + 2.0 * k2.chi + 2.0 * k3.chi + k4.chi),
            s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.h + w * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h),
        };
    } catch (const DomainError& e) {
        throw IntegrationError(
            fmt::format("RK4 stage {} at t = {:.17g} s from state (V={}, gamma={}, chi={}, x={}, y={}, h={}): {}",
                        stage, t, s.V, s.gamma, s.chi, s.x, s.y, s.h, e.what()),
            t);
    }
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

double NoiseStream::next_standard_normal() { return normal_(engine_); }

AircraftState apply_noise(const AircraftState& s, const NoiseSpec& spec, NoiseStream& stream) {
    AircraftState out = s;
    const double zv = stream.next_standard_normal();
    const double zc = stream.next_standard_normal();
    const double zg = stream.next_standard_normal();
    if (spec.level == 0.0) {
        return out;
    }
    out.V *= 1.0 + spec.level * zv;
    out.chi *= 1.0 + spec.level * zc;
    out.gamma *= 1.0 + spec.level * zg;
    return out;
}

} // namespace flatlo
