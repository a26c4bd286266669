#include "flatlo/cli.hpp"

#include "flatlo/errors.hpp"
#include "flatlo/harness.hpp"
#include "flatlo/io.hpp"

#include <chrono>
#include <fmt/format.h>
#include <iostream>
#include <random>
#include <spdlog/spdlog.h>

namespace flatlo::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

json error_json(const std::exception& e) {
    json err{{"message", e.what()}};
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        err["kind"] = v->kind();
        if (v->aircraft()) {
            err["aircraft"] = *v->aircraft();
        }
        if (v->bound()) {
            err["bound_m"] = *v->bound();
        }
    } else if (const auto* c = dynamic_cast<const ConfigurationError*>(&e)) {
        err["kind"] = c->kind();
        if (c->aircraft()) {
            err["aircraft"] = *c->aircraft();
        }
    } else if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) {
        err["kind"] = d->kind();
        err["aircraft"] = d->aircraft();
        err["time_s"] = d->time_s();
    } else if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) {
        err["kind"] = ie->kind();
        err["time_s"] = ie->time_s();
    } else if (const auto* f = dynamic_cast<const Error*>(&e)) {
        err["kind"] = f->kind();
    } else {
        err["kind"] = "internal";
    }
    return {{"error", err}};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
        dynamic_cast<const ConfigurationError*>(&e)) {
        return kExitValidation;
    }
    return kExitRuntime;
}

int report_failure(const std::exception& e, const fs::path& out_dir) {
    const json doc = error_json(e);
    std::cerr << doc.dump() << '\n';
    if (!out_dir.empty()) {
        std::error_code ec;
        if (fs::is_directory(out_dir, ec)) {
            try {
                io::write_json(out_dir / "error.json", doc);
            } catch (const std::exception&) {
                // stderr already carries the error
            }
        }
    }
    spdlog::error("{}", e.what());
    return exit_code_for(e);
}

SimConfig resolve_config(const Options& opts) {
    SimConfig config = io::load_config(opts.config);
    if (opts.seed) {
        config.noise.seed = *opts.seed;
    }
    if (opts.threshold_m) {
        config.collision_threshold = *opts.threshold_m;
    }
    validate(config);
    return config;
}

void prepare_out(const fs::path& out) {
    if (out.empty()) {
        throw ValidationError("--out is required");
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!fs::is_directory(out)) {
        throw Error("io", fmt::format("cannot create output directory '{}'", out.string()));
    }
}

std::vector<std::string> write_references(const fs::path& out, const std::vector<FlatloPlan>& plans) {
    std::vector<std::string> files;
    for (const auto& p : plans) {
        const std::string name = fmt::format("reference_{}.csv", p.aircraft_index);
        io::write_reference_csv(out / name, p.trajectory);
        files.push_back(name);
    }
    io::write_json(out / "plans.json", io::plans_to_json(plans));
    files.push_back("plans.json");
    return files;
}

void finish_manifest(const fs::path& out, io::RunManifest& manifest) {
    manifest.artifacts.push_back("config.json");
    io::write_json(out / "config.json", io::config_to_json(manifest.config));
    manifest.artifacts.push_back("manifest.json");
    io::write_json(out / "manifest.json", io::manifest_to_json(manifest));
}

} // namespace

int generate(const Options& opts, std::ostream& log) {
    try {
        const auto start = Clock::now();
        prepare_out(opts.out);
        const SimConfig config = resolve_config(opts);

        const auto t_gen = Clock::now();
        const auto plans = squadron_references(config.formation, opts.threads);
        const double gen_s = seconds_since(t_gen);

        std::vector<Position3> finals;
        std::vector<double> arrivals;
        for (const auto& p : plans) {
            finals.push_back(p.trajectory.final_position());
            arrivals.push_back(p.trajectory.duration());
        }
        const FormationQuality quality = formation_quality(finals, arrivals, config.formation);

        io::RunManifest manifest{"generate", config, true, opts.threads, {}, {}};
        manifest.artifacts = write_references(opts.out, plans);
        io::write_json(opts.out / "quality.json", io::quality_to_json(quality, config.formation.delta_d));
        manifest.artifacts.push_back("quality.json");
        manifest.timings_s = {{"generation", gen_s}, {"total", seconds_since(start)}};
        finish_manifest(opts.out, manifest);

        log << fmt::format("generated {} references; max |gap - delta_d| = {:.3e} m\n", plans.size(),
                           quality.max_gap_error);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(e, opts.out);
    }
}

int simulate(const Options& opts, std::ostream& log) {
    try {
        const auto start = Clock::now();
        prepare_out(opts.out);
        const SimConfig config = resolve_config(opts);
        io::RunManifest manifest{"simulate", config, opts.reference_only, opts.threads, {}, {}};

        if (opts.reference_only) {
            const auto t_run = Clock::now();
            const ReferenceRun run = run_reference_only(config, opts.threads);
            manifest.timings_s.emplace_back("reference_analysis", seconds_since(t_run));
            manifest.artifacts = write_references(opts.out, run.plans);
            io::write_json(opts.out / "separation.json", io::separation_to_json(run.separation));
            io::write_json(opts.out / "quality.json", io::quality_to_json(run.quality, config.formation.delta_d));
            io::write_json(opts.out / "crossings.json", io::crossings_to_json(run.marks, run.crossings));
            manifest.artifacts.insert(manifest.artifacts.end(), {"separation.json", "quality.json", "crossings.json"});
            log << fmt::format("reference-only: global min separation {:.1f} m, colliding = {}\n",
                               run.separation.global_min, run.separation.colliding);
        } else {
            const auto t_run = Clock::now();
            const ClosedLoopRun run = run_closed_loop(config, opts.threads);
            manifest.timings_s.emplace_back("closed_loop", seconds_since(t_run));
            manifest.artifacts = write_references(opts.out, run.plans);
            for (std::size_t i = 0; i < run.aircraft.size(); ++i) {
                const std::string name = fmt::format("simulated_{}.csv", i);
                io::write_simulated_csv(opts.out / name, run.grid, run.aircraft[i].states);
                manifest.artifacts.push_back(name);
            }
            io::write_tracking_csv(opts.out / "tracking_error.csv", run.grid, run.aircraft);
            io::write_json(opts.out / "separation.json", io::separation_to_json(run.separation));
            io::write_json(opts.out / "quality.json", io::quality_to_json(run.quality, config.formation.delta_d));
            io::write_json(opts.out / "crossings.json", io::crossings_to_json(run.marks, run.crossings));
            manifest.artifacts.insert(manifest.artifacts.end(),
                                      {"tracking_error.csv", "separation.json", "quality.json", "crossings.json"});
            log << fmt::format("closed loop: global min separation {:.1f} m, colliding = {}\n",
                               run.separation.global_min, run.separation.colliding);
        }
        manifest.timings_s.emplace_back("total", seconds_since(start));
        finish_manifest(opts.out, manifest);
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(e, opts.out);
    }
}

int plotdata(const fs::path& run_dir, std::ostream& log) {
    try {
        if (!fs::is_directory(run_dir)) {
            throw ValidationError(fmt::format("run directory '{}' does not exist", run_dir.string()));
        }
        for (const auto& f : io::write_plot_data(run_dir)) {
            log << (run_dir / f).string() << '\n';
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(e, {});
    }
}

int verify(const VerifyOptions& opts, std::ostream& out) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> spacing(10.0, 1e5);
    std::uniform_real_distribution<double> final_leg(0.0, 2.0);
    bool all_ok = true;
    out << fmt::format("{:>3} {:>6} {:>14} {:>14} {:>14}  {}\n", "N", "draws", "max_gap_rel", "max_y_rel",
                       "max_dh_m", "result");
    for (std::size_t n = opts.n_min; n <= opts.n_max; ++n) {
        double gap_rel = 0.0;
        double y_rel = 0.0;
        double dh = 0.0;
        bool ok = true;
        for (std::size_t d = 0; d < opts.draws; ++d) {
            FormationSpec spec;
            spec.n_aircraft = n;
            spec.delta_d = spacing(rng);
            spec.r = spec.delta_d / 4.0;
            spec.k2 = final_leg(rng) * spec.delta_d;
            spec.dt = spec.delta_d / (spec.vel_base * 40.0);
            try {
                const auto plans = squadron_references(spec, 1);
                std::vector<Position3> finals;
                std::vector<double> arrivals;
                for (const auto& p : plans) {
                    finals.push_back(p.trajectory.final_position());
                    arrivals.push_back(p.trajectory.duration());
                }
                const auto q = formation_quality(finals, arrivals, spec);
                gap_rel = std::max(gap_rel, q.max_gap_error / spec.delta_d);
                y_rel = std::max(y_rel, q.max_centerline_offset / spec.delta_d);
                for (double h : q.final_altitudes) {
                    dh = std::max(dh, std::abs(h - spec.initial_altitude));
                }
            } catch (const Error& e) {
                spdlog::error("N = {}: {}", n, e.what());
                ok = false;
            }
        }
        ok = ok && gap_rel < 1e-6 && y_rel < 1e-6 && dh <= 1e-9 * (1.0 + FormationSpec{}.initial_altitude);
        all_ok = all_ok && ok;
        out << fmt::format("{:>3} {:>6} {:>14.3e} {:>14.3e} {:>14.3e}  {}\n", n, opts.draws, gap_rel, y_rel, dh,
                           ok ? "PASS" : "FAIL");
    }
    return all_ok ? kExitOk : kExitRuntime;
}

} // namespace flatlo::cli
