// Squadron runs: reference-only geometry checks and closed-loop simulation,
// plus the separation and formation-quality analyses shared by both.
#pragma once

#include "flatlo/core.hpp"
#include "flatlo/dynamics.hpp"
#include "flatlo/formation.hpp"
#include "flatlo/tracking.hpp"

#include <optional>
#include <vector>

namespace flatlo {

struct SimConfig {
    FormationSpec formation;
    double sim_dt = 0.5;
    NoiseSpec noise;
    ControllerGains gains;
    DynamicsParams params;
    double collision_threshold = 2000.0; ///< [m]
    double abort_cross_track = 0.0;      ///< [m]; 0 means delta_d
    std::vector<double> marks;           ///< along-track stations [m]; empty means every delta_d / 2

    bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& config);

/// Stations used for crossing analysis: `config.marks`, or multiples of
/// delta_d / 2 up to the lead aircraft's final along-track position.
std::vector<double> mark_stations(const SimConfig& config, double lead_station);

/// Shared clock: 0, step, 2 step, ... and `end` as the final sample.
std::vector<double> time_grid(double end, double step);

/// Samples a reference on the grid by linear interpolation in time.
std::vector<Position3> resample(const ReferenceTrajectory& reference, const std::vector<double>& grid);

struct PairSeparation {
    std::size_t a = 0;
    std::size_t b = 0;
    double min_distance = 0.0;
    double time = 0.0;
};

struct SeparationReport {
    std::vector<PairSeparation> pairs; ///< (0,1), (0,2), ..., (N-2,N-1)
    double global_min = 0.0;
    double threshold = 0.0;
    bool colliding = false;

    const PairSeparation& pair(std::size_t a, std::size_t b) const;
};

/// Minimum 3D distance for every unordered pair, with both tracks linearly
/// interpolated between grid samples so the minimum is exact for the
/// piecewise-linear tracks. Throws AlignmentError when a track does not match
/// the grid.
SeparationReport min_pairwise_separation(const std::vector<std::vector<Position3>>& tracks,
                                         const std::vector<double>& grid, double threshold);

struct FormationQuality {
    std::vector<std::size_t> order;     ///< aircraft sorted front to back
    std::vector<double> gaps;           ///< consecutive along-track gaps, N-1
    double max_gap_error = 0.0;         ///< max |gap - delta_d|
    std::vector<double> centerline_offsets; ///< signed cross-track at the end, N
    double max_centerline_offset = 0.0;
    std::vector<double> final_altitudes;
    std::vector<double> arrival_times;
    double arrival_spread = 0.0;
};

FormationQuality formation_quality(const std::vector<Position3>& final_positions,
                                   const std::vector<double>& arrival_times, const FormationSpec& spec);

struct CrossingEvent {
    std::size_t aircraft = 0;
    std::size_t mark_index = 0;
    double station = 0.0;
    std::optional<double> time;       ///< empty when the station is never reached
    std::vector<std::size_t> ahead;   ///< members further along-track at that time
};

/// For every aircraft and station: the first time the aircraft reaches the
/// station along-track, and which other members are ahead of it then.
std::vector<CrossingEvent> crossing_order_check(const std::vector<std::vector<Position3>>& tracks,
                                                const std::vector<double>& grid,
                                                const std::vector<double>& marks, double phi);

const CrossingEvent* find_crossing(const std::vector<CrossingEvent>& events, std::size_t aircraft,
                                   std::size_t mark_index);

struct ReferenceRun {
    std::vector<FlatloPlan> plans;
    std::vector<double> grid;
    std::vector<std::vector<Position3>> tracks;
    SeparationReport separation;
    FormationQuality quality;
    std::vector<double> marks;
    std::vector<CrossingEvent> crossings;
};

ReferenceRun run_reference_only(const SimConfig& config, unsigned threads = 0);

struct AircraftRun {
    std::vector<AircraftState> states;   ///< one per grid sample
    std::vector<TrackingError> errors;   ///< one per grid sample
    double arrival_time = 0.0;
    double max_cross_track = 0.0;
};

/// Closed-loop flight of one aircraft along its reference. The controller sees
/// noise-corrupted measurements drawn from stream `stream_id` of the config seed;
/// the true state is integrated noise-free.
AircraftRun simulate_aircraft(const ReferenceTrajectory& reference, const AircraftState& initial,
                              const std::vector<double>& grid, const SimConfig& config,
                              std::size_t stream_id);

/// Time the track first reaches `station` along-track (interpolated), or a
/// straight-line extrapolation from the last state when it does not.
double arrival_time(const std::vector<AircraftState>& states, const std::vector<double>& grid,
                    double station, double phi);

struct ClosedLoopRun {
    std::vector<FlatloPlan> plans;
    std::vector<double> grid;
    std::vector<AircraftRun> aircraft;
    std::vector<std::vector<Position3>> tracks;
    SeparationReport separation;
    FormationQuality quality;
    std::vector<double> marks;
    std::vector<CrossingEvent> crossings;
};

ClosedLoopRun run_closed_loop(const SimConfig& config, unsigned threads = 0);

} // namespace flatlo
