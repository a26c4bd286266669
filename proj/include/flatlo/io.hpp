// Configuration parsing, CSV/JSON serialization and plot-data emission.
#pragma once

#include "flatlo/harness.hpp"

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace flatlo::io {

using nlohmann::json;

/// Default final-leg length for simulation configs that omit `k2_m`, as a
/// multiple of delta_d.
inline constexpr double kDefaultSimulationK2Factor = 0.418;

/// Parses a config document. Keys carry their unit in the name
/// (`delta_d_m`, `sim_dt_s`, ...). Missing keys take defaults, unknown keys
/// are rejected with ValidationError.
SimConfig config_from_json(const json& doc);
json config_to_json(const SimConfig& config);
SimConfig load_config(const std::filesystem::path& path);

/// %.17g: round-trips every finite double.
std::string format_double(double v);

// CSV schemas (header line, then one row per sample):
//   reference: t_s,x_m,y_m,h_m,segment_index
//   simulated: t_s,x_m,y_m,h_m,V_mps,gamma_rad,chi_rad
//   tracking:  t_s,aircraft,along_track_m,cross_track_m
inline constexpr const char* kReferenceHeader = "t_s,x_m,y_m,h_m,segment_index";
inline constexpr const char* kSimulatedHeader = "t_s,x_m,y_m,h_m,V_mps,gamma_rad,chi_rad";
inline constexpr const char* kTrackingHeader = "t_s,aircraft,along_track_m,cross_track_m";

void write_reference_csv(const std::filesystem::path& path, const ReferenceTrajectory& ref);
void write_simulated_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                         const std::vector<AircraftState>& states);
void write_tracking_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                        const std::vector<AircraftRun>& runs);

struct ReferenceRow {
    double t = 0.0;
    Position3 position;
    std::size_t segment = 0;
};

struct SimulatedRow {
    double t = 0.0;
    AircraftState state;
};

std::vector<ReferenceRow> read_reference_csv(const std::filesystem::path& path);
std::vector<SimulatedRow> read_simulated_csv(const std::filesystem::path& path);

json quality_to_json(const FormationQuality& q, double delta_d);
json separation_to_json(const SeparationReport& r);
json crossings_to_json(const std::vector<double>& marks, const std::vector<CrossingEvent>& events);
json plans_to_json(const std::vector<FlatloPlan>& plans);

/// Everything needed to reproduce a run and locate its outputs.
struct RunManifest {
    std::string command;
    SimConfig config;
    bool reference_only = false;
    unsigned threads = 0;
    std::vector<std::string> artifacts; ///< file names relative to the run dir
    std::vector<std::pair<std::string, double>> timings_s;
};

json manifest_to_json(const RunManifest& m);

void write_json(const std::filesystem::path& path, const json& doc);
json read_json(const std::filesystem::path& path);

/// Gnuplot-ready data blocks (one per aircraft, separated by two blank lines)
/// written into `run_dir`: ground_track.dat (x y), reference_track.dat (x y),
/// altitude.dat (t h) and velocity.dat (t V). Returns the files written.
/// Throws ValidationError if the run directory lacks its manifest or artifacts.
std::vector<std::string> write_plot_data(const std::filesystem::path& run_dir);

} // namespace flatlo::io
