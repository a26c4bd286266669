#include "flatlo/io.hpp"

#include "flatlo/errors.hpp"

#include <fmt/format.h>
#include <fmt/os.h>
#include <fstream>
#include <set>
#include <sstream>

namespace flatlo::io {

namespace fs = std::filesystem;

namespace {

// Reads `key` from `obj` into `out` if present, recording it as consumed.
class Section {
public:
    Section(const json& doc, const char* name) : name_(name) {
        if (doc.contains(name)) {
            obj_ = doc.at(name);
            if (!obj_.is_object()) {
                throw ValidationError(fmt::format("config: '{}' must be an object", name));
            }
        } else {
            obj_ = json::object();
        }
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!obj_.contains(key) || obj_.at(key).is_null()) {
            return;
        }
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ValidationError(fmt::format("config: {}.{}: {}", name_, key, e.what()));
        }
    }

    bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    void reject_unknown() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) {
                throw ValidationError(fmt::format("config: unknown key '{}.{}'", name_, key));
            }
        }
    }

private:
    std::string name_;
    json obj_;
    std::set<std::string> seen_;
};

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("io", fmt::format("cannot open '{}' for writing", path.string()));
    }
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const char* header) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot read '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw ValidationError(fmt::format("'{}': expected header '{}'", path.string(), header));
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw ValidationError(fmt::format("malformed number '{}'", s));
    }
    return v;
}

} // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

SimConfig config_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    static const std::set<std::string> sections{"formation", "simulation", "noise", "gains", "dynamics"};
    for (const auto& [key, value] : doc.items()) {
        if (!sections.count(key)) {
            throw ValidationError(fmt::format("config: unknown section '{}'", key));
        }
    }

    SimConfig c;
    Section f(doc, "formation");
    f.get("n_aircraft", c.formation.n_aircraft);
    f.get("delta_d_m", c.formation.delta_d);
    f.get("vel_base_mps", c.formation.vel_base);
    f.get("turn_radius_m", c.formation.r);
    f.get("phi_rad", c.formation.phi);
    f.get("beta_rad", c.formation.beta);
    c.formation.k2 = kDefaultSimulationK2Factor * c.formation.delta_d;
    f.get("k2_m", c.formation.k2);
    f.get("reference_dt_s", c.formation.dt);
    f.get("initial_altitude_m", c.formation.initial_altitude);
    f.reject_unknown();

    Section s(doc, "simulation");
    s.get("sim_dt_s", c.sim_dt);
    s.get("collision_threshold_m", c.collision_threshold);
    s.get("abort_cross_track_m", c.abort_cross_track);
    s.get("marks_m", c.marks);
    s.reject_unknown();

    Section n(doc, "noise");
    n.get("level", c.noise.level);
    n.get("seed", c.noise.seed);
    n.reject_unknown();

    Section g(doc, "gains");
    g.get("lookahead_time_s", c.gains.lookahead_time);
    g.get("k_speed", c.gains.k_speed);
    g.get("k_gamma", c.gains.k_gamma);
    g.get("k_chi", c.gains.k_chi);
    g.get("k_alt", c.gains.k_alt);
    g.get("k_along_per_s", c.gains.k_along);
    g.reject_unknown();

    Section d(doc, "dynamics");
    d.get("g_mps2", c.params.g);
    d.get("thrust_ratio_min", c.params.thrust_ratio_min);
    d.get("thrust_ratio_max", c.params.thrust_ratio_max);
    d.get("load_factor_min", c.params.n_min);
    d.get("load_factor_max", c.params.n_max);
    d.get("bank_max_rad", c.params.mu_max);
    d.reject_unknown();

    validate(c);
    return c;
}

json config_to_json(const SimConfig& c) {
    return {
        {"formation",
         {{"n_aircraft", c.formation.n_aircraft},
          {"delta_d_m", c.formation.delta_d},
          {"vel_base_mps", c.formation.vel_base},
          {"turn_radius_m", c.formation.r},
          {"phi_rad", c.formation.phi},
          {"beta_rad", c.formation.beta},
          {"k2_m", c.formation.k2},
          {"reference_dt_s", c.formation.dt},
          {"initial_altitude_m", c.formation.initial_altitude}}},
        {"simulation",
         {{"sim_dt_s", c.sim_dt},
          {"collision_threshold_m", c.collision_threshold},
          {"abort_cross_track_m", c.abort_cross_track},
          {"marks_m", c.marks}}},
        {"noise", {{"level", c.noise.level}, {"seed", c.noise.seed}}},
        {"gains",
         {{"lookahead_time_s", c.gains.lookahead_time},
          {"k_speed", c.gains.k_speed},
          {"k_gamma", c.gains.k_gamma},
          {"k_chi", c.gains.k_chi},
          {"k_alt", c.gains.k_alt},
          {"k_along_per_s", c.gains.k_along}}},
        {"dynamics",
         {{"g_mps2", c.params.g},
          {"thrust_ratio_min", c.params.thrust_ratio_min},
          {"thrust_ratio_max", c.params.thrust_ratio_max},
          {"load_factor_min", c.params.n_min},
          {"load_factor_max", c.params.n_max},
          {"bank_max_rad", c.params.mu_max}}},
    };
}

SimConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot read config '{}'", path.string()));
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return config_from_json(doc);
}

void write_reference_csv(const fs::path& path, const ReferenceTrajectory& ref) {
    auto out = open_out(path);
    out << kReferenceHeader << '\n';
    for (std::size_t k = 0; k < ref.points.size(); ++k) {
        const auto& p = ref.points[k];
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", p.t, p.position.x, p.position.y,
                           p.position.h, ref.segment_of(k));
    }
}

void write_simulated_csv(const fs::path& path, const std::vector<double>& grid,
                         const std::vector<AircraftState>& states) {
    if (grid.size() != states.size()) {
        throw AlignmentError("write_simulated_csv: grid and states differ in length");
    }
    auto out = open_out(path);
    out << kSimulatedHeader << '\n';
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& s = states[k];
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", grid[k], s.x, s.y,
                           s.h, s.V, s.gamma, s.chi);
    }
}

void write_tracking_csv(const fs::path& path, const std::vector<double>& grid,
                        const std::vector<AircraftRun>& runs) {
    auto out = open_out(path);
    out << kTrackingHeader << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& errs = runs[i].errors;
        for (std::size_t k = 0; k < errs.size() && k < grid.size(); ++k) {
            out << fmt::format("{:.17g},{},{:.17g},{:.17g}\n", grid[k], i, errs[k].along, errs[k].cross);
        }
    }
}

std::vector<ReferenceRow> read_reference_csv(const fs::path& path) {
    std::vector<ReferenceRow> rows;
    for (const auto& cells : read_csv(path, kReferenceHeader)) {
        if (cells.size() != 5) {
            throw ValidationError(fmt::format("'{}': reference rows need 5 columns", path.string()));
        }
        rows.push_back({to_double(cells[0]),
                        {to_double(cells[1]), to_double(cells[2]), to_double(cells[3])},
                        static_cast<std::size_t>(std::stoul(cells[4]))});
    }
    return rows;
}

std::vector<SimulatedRow> read_simulated_csv(const fs::path& path) {
    std::vector<SimulatedRow> rows;
    for (const auto& cells : read_csv(path, kSimulatedHeader)) {
        if (cells.size() != 7) {
            throw ValidationError(fmt::format("'{}': simulated rows need 7 columns", path.string()));
        }
        SimulatedRow r;
        r.t = to_double(cells[0]);
        r.state.x = to_double(cells[1]);
        r.state.y = to_double(cells[2]);
        r.state.h = to_double(cells[3]);
        r.state.V = to_double(cells[4]);
        r.state.gamma = to_double(cells[5]);
        r.state.chi = to_double(cells[6]);
        rows.push_back(r);
    }
    return rows;
}

json quality_to_json(const FormationQuality& q, double delta_d) {
    return {
        {"delta_d_m", delta_d},
        {"order_front_to_back", q.order},
        {"final_gaps_m", q.gaps},
        {"max_gap_error_m", q.max_gap_error},
        {"centerline_offsets_m", q.centerline_offsets},
        {"max_centerline_offset_m", q.max_centerline_offset},
        {"final_altitudes_m", q.final_altitudes},
        {"arrival_times_s", q.arrival_times},
        {"arrival_spread_s", q.arrival_spread},
    };
}

json separation_to_json(const SeparationReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"min_distance_m", p.min_distance}, {"time_s", p.time}});
    }
    return {{"pairs", pairs},
            {"global_min_m", r.global_min},
            {"threshold_m", r.threshold},
            {"colliding", r.colliding}};
}

json crossings_to_json(const std::vector<double>& marks, const std::vector<CrossingEvent>& events) {
    json list = json::array();
    for (const auto& e : events) {
        list.push_back({{"aircraft", e.aircraft},
                        {"mark_index", e.mark_index},
                        {"station_m", e.station},
                        {"time_s", e.time ? json(*e.time) : json(nullptr)},
                        {"ahead", e.ahead}});
    }
    return {{"marks_m", marks}, {"events", list}};
}

json plans_to_json(const std::vector<FlatloPlan>& plans) {
    json list = json::array();
    for (const auto& p : plans) {
        list.push_back({{"aircraft", p.aircraft_index},
                        {"side", to_string(p.side)},
                        {"delta_m_m", p.delta_m},
                        {"lateral_offset_m", p.lateral_offset},
                        {"diagonal_len_m", p.diagonal_len},
                        {"vel_mps", p.vel},
                        {"path_length_m", p.trajectory.path_length},
                        {"point_count", p.trajectory.size()},
                        {"segment_point_counts", p.trajectory.segment_point_counts()},
                        {"arrival_time_s", p.trajectory.duration()}});
    }
    return list;
}

json manifest_to_json(const RunManifest& m) {
    json timings = json::object();
    for (const auto& [name, seconds] : m.timings_s) {
        timings[name] = seconds;
    }
    return {
        {"tool", "flatlo"},
        {"command", m.command},
        {"versions",
         {{"flatlo", "1.0.0"},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)},
          {"fmt", FMT_VERSION},
          {"compiler", __VERSION__}}},
        {"config", config_to_json(m.config)},
        {"seed", m.config.noise.seed},
        {"reference_only", m.reference_only},
        {"threads", m.threads},
        {"artifacts", m.artifacts},
        {"timings_s", timings},
    };
}

void write_json(const fs::path& path, const json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot read '{}'", path.string()));
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
    }
}

namespace {

struct Block {
    std::vector<std::pair<double, double>> rows;
};

void write_blocks(const fs::path& path, const std::string& columns, const std::vector<Block>& blocks) {
    auto out = open_out(path);
    out << "# " << columns << '\n';
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) {
            out << "\n\n";
        }
        out << "# aircraft " << i << '\n';
        for (const auto& [a, b] : blocks[i].rows) {
            out << fmt::format("{:.17g} {:.17g}\n", a, b);
        }
    }
}

} // namespace

std::vector<std::string> write_plot_data(const fs::path& run_dir) {
    const fs::path manifest_path = run_dir / "manifest.json";
    if (!fs::exists(manifest_path)) {
        throw ValidationError(fmt::format("'{}' has no manifest.json; not a completed run", run_dir.string()));
    }
    const json manifest = read_json(manifest_path);
    const SimConfig config = config_from_json(manifest.at("config"));
    const bool reference_only = manifest.value("reference_only", false);
    const std::size_t n = config.formation.n_aircraft;

    std::vector<double> vel(n, 0.0);
    const fs::path plans_path = run_dir / "plans.json";
    if (!fs::exists(plans_path)) {
        throw ValidationError(fmt::format("'{}' is missing plans.json", run_dir.string()));
    }
    const json plans = read_json(plans_path);
    for (const auto& p : plans) {
        const auto i = p.at("aircraft").get<std::size_t>();
        if (i < n) {
            vel[i] = p.at("vel_mps").get<double>();
        }
    }

    std::vector<Block> ref_track(n), sim_track(n), altitude(n), velocity(n);
    for (std::size_t i = 0; i < n; ++i) {
        const fs::path ref_path = run_dir / fmt::format("reference_{}.csv", i);
        if (!fs::exists(ref_path)) {
            throw ValidationError(fmt::format("run is missing '{}'", ref_path.filename().string()));
        }
        const auto rows = read_reference_csv(ref_path);
        for (const auto& r : rows) {
            ref_track[i].rows.emplace_back(r.position.x, r.position.y);
        }
        if (reference_only) {
            sim_track[i] = ref_track[i];
            for (const auto& r : rows) {
                altitude[i].rows.emplace_back(r.t, r.position.h);
                velocity[i].rows.emplace_back(r.t, vel[i]);
            }
            continue;
        }
        const fs::path sim_path = run_dir / fmt::format("simulated_{}.csv", i);
        if (!fs::exists(sim_path)) {
            throw ValidationError(fmt::format("run is missing '{}'", sim_path.filename().string()));
        }
        for (const auto& r : read_simulated_csv(sim_path)) {
            sim_track[i].rows.emplace_back(r.state.x, r.state.y);
            altitude[i].rows.emplace_back(r.t, r.state.h);
            velocity[i].rows.emplace_back(r.t, r.state.V);
        }
    }

    write_blocks(run_dir / "reference_track.dat", "x_m y_m (reference)", ref_track);
    write_blocks(run_dir / "ground_track.dat", reference_only ? "x_m y_m (reference)" : "x_m y_m (simulated)",
                 sim_track);
    write_blocks(run_dir / "altitude.dat", "t_s h_m", altitude);
    write_blocks(run_dir / "velocity.dat", "t_s V_mps", velocity);
    return {"reference_track.dat", "ground_track.dat", "altitude.dat", "velocity.dat"};
}

} // namespace flatlo::io
