#include "flatlo/harness.hpp"

#include "flatlo/errors.hpp"
#include "flatlo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace flatlo {

void validate(const SimConfig& c) {
    validate(c.formation);
    validate(c.gains);
    if (!(std::isfinite(c.sim_dt) && c.sim_dt > 0.0)) {
        throw ValidationError("sim_dt must be finite and > 0");
    }
    if (c.sim_dt > c.formation.dt) {
        throw ValidationError(fmt::format("sim_dt ({}) must not exceed the reference dt ({})", c.sim_dt,
                                          c.formation.dt));
    }
    if (!(std::isfinite(c.noise.level) && c.noise.level >= 0.0)) {
        throw ValidationError("noise level must be finite and >= 0");
    }
    if (!(std::isfinite(c.collision_threshold) && c.collision_threshold >= 0.0)) {
        throw ValidationError("collision threshold must be finite and >= 0");
    }
    if (!(std::isfinite(c.abort_cross_track) && c.abort_cross_track >= 0.0)) {
        throw ValidationError("abort cross-track bound must be finite and >= 0");
    }
    const auto& p = c.params;
    if (!(p.g > 0.0) || !(p.thrust_ratio_min <= p.thrust_ratio_max) || !(p.n_min <= p.n_max) ||
        !(p.mu_max > 0.0 && p.mu_max < kPi / 2.0)) {
        throw ValidationError("dynamics parameters: need g > 0, ordered bounds and 0 < mu_max < pi/2");
    }
    for (double m : c.marks) {
        if (!std::isfinite(m)) {
            throw ValidationError("mark stations must be finite");
        }
    }
}

std::vector<double> mark_stations(const SimConfig& config, double lead_station) {
    if (!config.marks.empty()) {
        return config.marks;
    }
    std::vector<double> out;
    const double step = config.formation.delta_d / 2.0;
    for (int k = 1; k * step <= lead_station; ++k) {
        out.push_back(k * step);
    }
    return out;
}

std::vector<double> time_grid(double end, double step) {
    if (!(step > 0.0) || !(end >= 0.0)) {
        throw ParameterError("time_grid: need step > 0 and end >= 0");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(end / step) + 2);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * step;
        // drop a sample that would sit within a nanosecond-scale sliver of the end
        if (t >= end - 1e-9 * step) {
            break;
        }
        grid.push_back(t);
    }
    grid.push_back(end);
    return grid;
}

std::vector<Position3> resample(const ReferenceTrajectory& ref, const std::vector<double>& grid) {
    if (ref.empty()) {
        throw ParameterError("resample: empty reference");
    }
    std::vector<Position3> out;
    out.reserve(grid.size());
    const auto& pts = ref.points;
    std::size_t k = 0;
    for (double t : grid) {
        while (k + 1 < pts.size() && pts[k + 1].t <= t) {
            ++k;
        }
        if (k + 1 >= pts.size() || t <= pts[k].t) {
            out.push_back(pts[k].position);
        } else {
            const double f = (t - pts[k].t) / (pts[k + 1].t - pts[k].t);
            out.push_back(lerp(pts[k].position, pts[k + 1].position, f));
        }
    }
    return out;
}

const PairSeparation& SeparationReport::pair(std::size_t a, std::size_t b) const {
    if (a > b) {
        std::swap(a, b);
    }
    for (const auto& p : pairs) {
        if (p.a == a && p.b == b) {
            return p;
        }
    }
    throw ParameterError(fmt::format("no separation entry for pair ({}, {})", a, b));
}

SeparationReport min_pairwise_separation(const std::vector<std::vector<Position3>>& tracks,
                                         const std::vector<double>& grid, double threshold) {
    if (tracks.size() < 2) {
        throw ParameterError("min_pairwise_separation needs at least two tracks");
    }
    if (grid.empty()) {
        throw AlignmentError("empty time grid");
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) {
            throw AlignmentError("time grid must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (tracks[i].size() != grid.size()) {
            throw AlignmentError(fmt::format("track {} has {} samples, grid has {}", i, tracks[i].size(),
                                             grid.size()));
        }
    }

    SeparationReport report;
    report.threshold = threshold;
    report.global_min = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < tracks.size(); ++a) {
        for (std::size_t b = a + 1; b < tracks.size(); ++b) {
            const auto& ta = tracks[a];
            const auto& tb = tracks[b];
            PairSeparation best{a, b, distance(ta[0], tb[0]), grid[0]};
            for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
                const Position3 r0 = ta[k] - tb[k];
                const Position3 dr = (ta[k + 1] - tb[k + 1]) - r0;
                const double dd = dr.x * dr.x + dr.y * dr.y + dr.h * dr.h;
                double f = 1.0;
                if (dd > 0.0) {
                    f = std::clamp(-(r0.x * dr.x + r0.y * dr.y + r0.h * dr.h) / dd, 0.0, 1.0);
                }
                const double d = (r0 + dr * f).norm();
                if (d < best.min_distance) {
                    best.min_distance = d;
                    best.time = grid[k] + f * (grid[k + 1] - grid[k]);
                }
            }
            report.global_min = std::min(report.global_min, best.min_distance);
            report.pairs.push_back(best);
        }
    }
    report.colliding = report.global_min < threshold;
    return report;
}

FormationQuality formation_quality(const std::vector<Position3>& finals,
                                   const std::vector<double>& arrivals, const FormationSpec& spec) {
    if (finals.empty() || finals.size() != arrivals.size()) {
        throw ParameterError("formation_quality: need one arrival time per final position");
    }
    FormationQuality q;
    const std::size_t n = finals.size();
    std::vector<double> along(n);
    for (std::size_t i = 0; i < n; ++i) {
        along[i] = along_track(finals[i], spec.phi);
        const double off = cross_track(finals[i], spec.phi);
        q.centerline_offsets.push_back(off);
        q.max_centerline_offset = std::max(q.max_centerline_offset, std::abs(off));
        q.final_altitudes.push_back(finals[i].h);
    }
    q.order.resize(n);
    std::iota(q.order.begin(), q.order.end(), std::size_t{0});
    std::stable_sort(q.order.begin(), q.order.end(),
                     [&](std::size_t a, std::size_t b) { return along[a] > along[b]; });
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double gap = along[q.order[k]] - along[q.order[k + 1]];
        q.gaps.push_back(gap);
        q.max_gap_error = std::max(q.max_gap_error, std::abs(gap - spec.delta_d));
    }
    q.arrival_times = arrivals;
    const auto [lo, hi] = std::minmax_element(arrivals.begin(), arrivals.end());
    q.arrival_spread = *hi - *lo;
    return q;
}

namespace {

double along_at(const std::vector<Position3>& track, const std::vector<double>& grid, double t, double phi) {
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) {
        return along_track(track.front(), phi);
    }
    if (it == grid.end()) {
        return along_track(track.back(), phi);
    }
    const std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double f = (t - grid[k]) / (grid[k + 1] - grid[k]);
    return along_track(lerp(track[k], track[k + 1], f), phi);
}

} // namespace

std::vector<CrossingEvent> crossing_order_check(const std::vector<std::vector<Position3>>& tracks,
                                                const std::vector<double>& grid,
                                                const std::vector<double>& marks, double phi) {
    for (const auto& tr : tracks) {
        if (tr.size() != grid.size() || tr.empty()) {
            throw AlignmentError("crossing_order_check: tracks must match the time grid");
        }
    }
    std::vector<CrossingEvent> events;
    for (std::size_t a = 0; a < tracks.size(); ++a) {
        const auto& tr = tracks[a];
        for (std::size_t m = 0; m < marks.size(); ++m) {
            CrossingEvent ev{a, m, marks[m], std::nullopt, {}};
            double prev = along_track(tr[0], phi);
            if (prev >= marks[m]) {
                ev.time = grid[0];
            }
            for (std::size_t k = 1; k < tr.size() && !ev.time; ++k) {
                const double cur = along_track(tr[k], phi);
                if (cur >= marks[m]) {
                    const double f = cur > prev ? (marks[m] - prev) / (cur - prev) : 1.0;
                    ev.time = grid[k - 1] + f * (grid[k] - grid[k - 1]);
                }
                prev = cur;
            }
            if (ev.time) {
                const double own = along_at(tr, grid, *ev.time, phi);
                for (std::size_t b = 0; b < tracks.size(); ++b) {
                    if (b != a && along_at(tracks[b], grid, *ev.time, phi) > own + 1e-6) {
                        ev.ahead.push_back(b);
                    }
                }
            }
            events.push_back(std::move(ev));
        }
    }
    return events;
}

const CrossingEvent* find_crossing(const std::vector<CrossingEvent>& events, std::size_t aircraft,
                                   std::size_t mark_index) {
    for (const auto& e : events) {
        if (e.aircraft == aircraft && e.mark_index == mark_index) {
            return &e;
        }
    }
    return nullptr;
}

ReferenceRun run_reference_only(const SimConfig& config, unsigned threads) {
    validate(config);
    ReferenceRun run;
    run.plans = squadron_references(config.formation, threads);
    const double end = run.plans.front().trajectory.duration();
    run.grid = time_grid(end, config.formation.dt);
    run.tracks.resize(run.plans.size());
    std::vector<Position3> finals;
    std::vector<double> arrivals;
    for (std::size_t i = 0; i < run.plans.size(); ++i) {
        const auto& traj = run.plans[i].trajectory;
        run.tracks[i] = resample(traj, run.grid);
        finals.push_back(traj.final_position());
        arrivals.push_back(traj.duration());
    }
    run.separation = min_pairwise_separation(run.tracks, run.grid, config.collision_threshold);
    run.quality = formation_quality(finals, arrivals, config.formation);
    run.marks = mark_stations(config, along_track(run.plans.front().trajectory.final_position(),
                                                  config.formation.phi));
    run.crossings = crossing_order_check(run.tracks, run.grid, run.marks, config.formation.phi);
    return run;
}

double arrival_time(const std::vector<AircraftState>& states, const std::vector<double>& grid,
                    double station, double phi) {
    if (states.empty() || states.size() != grid.size()) {
        throw AlignmentError("arrival_time: states must match the time grid");
    }
    auto along = [&](const AircraftState& s) { return along_track({s.x, s.y, s.h}, phi); };
    double prev = along(states[0]);
    if (prev >= station) {
        return grid[0];
    }
    for (std::size_t k = 1; k < states.size(); ++k) {
        const double cur = along(states[k]);
        if (cur >= station) {
            const double f = cur > prev ? (station - prev) / (cur - prev) : 1.0;
            return grid[k - 1] + f * (grid[k] - grid[k - 1]);
        }
        prev = cur;
    }
    const auto& s = states.back();
    const double rate = s.V * std::cos(s.gamma) * std::cos(s.chi - phi);
    if (!(rate > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return grid.back() + (station - prev) / rate;
}

AircraftRun simulate_aircraft(const ReferenceTrajectory& reference, const AircraftState& initial,
                              const std::vector<double>& grid, const SimConfig& config,
                              std::size_t stream_id) {
    if (reference.empty()) {
        throw ParameterError("simulate_aircraft: empty reference");
    }
    if (grid.empty()) {
        throw ParameterError("simulate_aircraft: empty time grid");
    }
    const double abort_bound =
        config.abort_cross_track > 0.0 ? config.abort_cross_track : config.formation.delta_d;
    NoiseStream noise(config.noise.seed, stream_id);

    AircraftRun run;
    run.states.reserve(grid.size());
    run.errors.reserve(grid.size());
    AircraftState state = initial;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const TrackingError err = tracking_error({state.x, state.y, state.h}, reference, t);
        run.states.push_back(state);
        run.errors.push_back(err);
        run.max_cross_track = std::max(run.max_cross_track, err.cross);
        if (err.cross > abort_bound) {
            throw DivergenceError(fmt::format("aircraft {} cross-track error {:.1f} m exceeds {:.1f} m at t = {:.3f} s",
                                              stream_id, err.cross, abort_bound, t),
                                  stream_id, t);
        }
        if (k + 1 == grid.size()) {
            break;
        }
        const AircraftState measured = apply_noise(state, config.noise, noise);
        const ControlInput u = track(measured, reference, t, config.gains, config.params);
        state = rk4_step(state, u, grid[k + 1] - t, config.params, t);
    }
    run.arrival_time = arrival_time(run.states, grid,
                                    along_track(reference.final_position(), config.formation.phi),
                                    config.formation.phi);
    return run;
}

ClosedLoopRun run_closed_loop(const SimConfig& config, unsigned threads) {
    validate(config);
    ClosedLoopRun run;
    run.plans = squadron_references(config.formation, threads);
    const double end = run.plans.front().trajectory.duration();
    run.grid = time_grid(end, config.sim_dt);
    const auto starts = initial_positions(config.formation);
    const std::size_t n = run.plans.size();
    run.aircraft.resize(n);

    detail::parallel_for(n, threads, [&](std::size_t i) {
        const AircraftState initial{run.plans[i].vel, config.formation.beta, config.formation.phi,
                                    starts[i].x, starts[i].y, starts[i].h};
        run.aircraft[i] = simulate_aircraft(run.plans[i].trajectory, initial, run.grid, config, i);
    });

    run.tracks.resize(n);
    std::vector<Position3> finals;
    std::vector<double> arrivals;
    for (std::size_t i = 0; i < n; ++i) {
        auto& track = run.tracks[i];
        track.reserve(run.grid.size());
        for (const auto& s : run.aircraft[i].states) {
            track.push_back({s.x, s.y, s.h});
        }
        finals.push_back(track.back());
        arrivals.push_back(run.aircraft[i].arrival_time);
    }
    run.separation = min_pairwise_separation(run.tracks, run.grid, config.collision_threshold);
    run.quality = formation_quality(finals, arrivals, config.formation);
    run.marks = mark_stations(config, along_track(run.plans.front().trajectory.final_position(),
                                                  config.formation.phi));
    run.crossings = crossing_order_check(run.tracks, run.grid, run.marks, config.formation.phi);
    return run;
}

} // namespace flatlo
