// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "flatlo/cli.hpp"
#include "flatlo/formation.hpp"
#include "flatlo/harness.hpp"
#include "flatlo/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace flatlo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
    int failures = 0;

    void line(const char* id, bool ok, const std::string& detail) {
        fmt::print("{} {}: {}\n", ok ? "PASS" : "FAIL", id, detail);
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }
};

SimConfig case_study_config() { return io::load_config(fs::path(FLATLO_SOURCE_DIR) / "configs" / "case_study.json"); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool has(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void spacing_theorem(Report& rep) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20130501);
    std::uniform_real_distribution<double> spacing(10.0, 1e5);
    std::uniform_real_distribution<double> final_leg(0.0, 2.0);
    double gap_rel = 0.0;
    double y_rel = 0.0;
    double dh = 0.0;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 9; ++n) {
        for (int d = 0; d < 20; ++d) {
            FormationSpec spec;
            spec.n_aircraft = n;
            spec.delta_d = spacing(rng);
            spec.r = spec.delta_d / 4.0;
            spec.k2 = final_leg(rng) * spec.delta_d;
            spec.dt = spec.delta_d / (spec.vel_base * 40.0);
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
            ++cases;
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = gap_rel < 1e-6 && y_rel < 1e-6 && dh <= 1e-9 * 3050.0 && secs < 10.0;
    rep.line("AC1", ok,
             fmt::format("spacing theorem over {} squadrons: max gap err {:.2e} rel, max |y| {:.2e} rel, "
                         "max |h - h0| {:.2e} m, {:.2f} s",
                         cases, gap_rel, y_rel, dh, secs));
}

void difference_law(Report& rep) {
    const auto t0 = Clock::now();
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (std::size_t n = 2; n <= 50; ++n) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const long long diff = move_forward_multiple(i, n) - move_forward_multiple(i + 1, n);
            const long long expected = (n % 2 == i % 2) ? 1 : 2;
            bad += diff == expected ? 0 : 1;
            ++checked;
        }
        bad += move_forward_multiple(n - 1, n) == 0 ? 0 : 1;
    }
    const double secs = seconds_since(t0);
    rep.line("AC2", bad == 0 && secs < 1.0,
             fmt::format("move-forward difference law: {} consecutive pairs, {} violations, {:.4f} s", checked, bad,
                         secs));
}

void case_study_reference(Report& rep) {
    const auto t0 = Clock::now();
    const SimConfig config = case_study_config();
    const auto run = run_reference_only(config, 0);
    const double secs = seconds_since(t0);

    const bool separated = run.separation.global_min >= 2000.0 && !run.separation.colliding;
    const auto* zero_third = find_crossing(run.crossings, 0, 2);
    const auto* three_fourth = find_crossing(run.crossings, 3, 3);
    const bool one_ahead = zero_third && zero_third->time && has(zero_third->ahead, 1);
    const bool two_ahead = three_fourth && three_fourth->time && has(three_fourth->ahead, 2);

    auto describe = [](const CrossingEvent* e) {
        if (!e || !e->time) {
            return std::string("station not reached");
        }
        std::string ahead;
        for (auto a : e->ahead) {
            ahead += fmt::format("{}{}", ahead.empty() ? "" : ",", a);
        }
        return fmt::format("station {:.0f} m at t = {:.1f} s, ahead = {{{}}}", e->station, *e->time, ahead);
    };
    fmt::print("     aircraft 0 at mark 3: {}\n", describe(zero_third));
    fmt::print("     aircraft 3 at mark 4: {}\n", describe(three_fourth));
    rep.line("AC3", separated && one_ahead && two_ahead && secs < 10.0,
             fmt::format("reference-only case study: global min {:.1f} m (pair {}-{}), aircraft 1 ahead of 0 at "
                         "mark 3: {}, aircraft 2 ahead of 3 at mark 4: {}, {:.2f} s",
                         run.separation.global_min,
                         std::min_element(run.separation.pairs.begin(), run.separation.pairs.end(),
                                          [](auto& a, auto& b) { return a.min_distance < b.min_distance; })
                             ->a,
                         std::min_element(run.separation.pairs.begin(), run.separation.pairs.end(),
                                          [](auto& a, auto& b) { return a.min_distance < b.min_distance; })
                             ->b,
                         one_ahead ? "yes" : "no", two_ahead ? "yes" : "no", secs));
}

void case_study_closed_loop(Report& rep, ClosedLoopRun& out) {
    const auto t0 = Clock::now();
    const SimConfig config = case_study_config();
    out = run_closed_loop(config, 0);
    const double secs = seconds_since(t0);
    const double d01 = out.separation.pair(0, 1).min_distance;
    const double d23 = out.separation.pair(2, 3).min_distance;
    const bool ok = std::abs(d01 - 14500.0) <= 0.15 * 14500.0 && std::abs(d23 - 18300.0) <= 0.15 * 18300.0 &&
                    out.separation.global_min > 2000.0 && secs < 120.0;
    rep.line("AC4", ok,
             fmt::format("closed loop, noise {:.2f}%: pair (0,1) min {:.1f} m [12325, 16675], pair (2,3) min "
                         "{:.1f} m [15555, 21045], global min {:.1f} m, {:.2f} s",
                         config.noise.level * 100.0, d01, d23, out.separation.global_min, secs));
}

void simultaneous_arrival(Report& rep, const ClosedLoopRun& closed) {
    const SimConfig config = case_study_config();
    const auto ref = run_reference_only(config, 0);
    const double ref_spread = ref.quality.arrival_spread;
    const double sim_spread = closed.quality.arrival_spread;
    rep.line("AC5", ref_spread == 0.0 && sim_spread <= 2.0 * config.sim_dt,
             fmt::format("arrival spread: reference {:.3g} s, closed loop {:.4f} s (limit {:.2f} s)", ref_spread,
                         sim_spread, 2.0 * config.sim_dt));
}

void dynamics_identities(Report& rep) {
    const auto t0 = Clock::now();
    const DynamicsParams params;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double speed_err = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const AircraftState s{1.0 + 99.0 * u01(rng), -1.5 + 3.0 * u01(rng), -kPi + 2.0 * kPi * u01(rng), 0, 0, 0};
        const ControlInput u{-0.3 + 0.6 * u01(rng), 0.5 + 2.0 * u01(rng), -0.7 + 1.4 * u01(rng)};
        const auto r = derivatives(s, u, params);
        speed_err = std::max(speed_err, std::abs(std::sqrt(r.x * r.x + r.y * r.y + r.h * r.h) - s.V));
    }

    const AircraftState s0{30.5, 0.0, 0.0, 0.0, 0.0, 3050.0};
    AircraftState s = s0;
    for (int k = 0; k < 1000; ++k) {
        s = rk4_step(s, {0.0, 1.0, 0.0}, 0.5, params);
    }
    const double drift = std::max({std::abs(s.V - s0.V), std::abs(s.gamma - s0.gamma), std::abs(s.chi - s0.chi),
                                   std::abs(s.y - s0.y), std::abs(s.h - s0.h),
                                   std::abs(s.x - 1000 * 0.5 * s0.V) / (1000 * 0.5 * s0.V)});

    // coordinated level turn, exact circle
    const double V = 30.0;
    const double mu = kPi / 6.0;
    const double rate = params.g * std::tan(mu) / V;
    auto turn_error = [&](double dt) {
        AircraftState t{V, 0.0, 0.0, 0, 0, 0};
        const int steps = static_cast<int>(std::lround(40.0 / dt));
        for (int k = 0; k < steps; ++k) {
            t = rk4_step(t, {0.0, 1.0 / std::cos(mu), mu}, dt, params);
        }
        const double R = V / rate;
        return std::hypot(t.x - R * std::sin(rate * 40.0), t.y - R * (1.0 - std::cos(rate * 40.0)));
    };
    const double order = std::min(std::log2(turn_error(2.0) / turn_error(1.0)),
                                  std::log2(turn_error(1.0) / turn_error(0.5)));
    const double secs = seconds_since(t0);
    rep.line("AC6", speed_err <= 1e-12 && drift <= 1e-12 && order >= 3.9 && secs < 5.0,
             fmt::format("dynamics: max |ground speed - V| {:.2e} m/s over 1e5 states, equilibrium drift {:.2e}, "
                         "RK4 order {:.3f}, {:.2f} s",
                         speed_err, drift, order, secs));
}

void linear_complexity(Report& rep) {
    FormationSpec spec = case_study_config().formation;
    bool counts_ok = true;
    std::size_t points = 0;
    for (const auto& p : squadron_references(spec, 1)) {
        std::size_t sum = 0;
        for (auto c : p.trajectory.segment_point_counts()) {
            sum += c;
        }
        counts_ok = counts_ok && sum == p.trajectory.size();
        points += p.trajectory.size();
    }

    auto median_time = [&](double dt) {
        FormationSpec s = spec;
        s.dt = dt;
        std::vector<double> times;
        for (int k = 0; k < 5; ++k) {
            const auto t0 = Clock::now();
            const auto plans = squadron_references(s, 1);
            times.push_back(seconds_since(t0));
            if (plans.empty()) {
                return 0.0;
            }
        }
        std::sort(times.begin(), times.end());
        return times[2];
    };
    const double coarse = median_time(0.01);
    const double fine = median_time(0.005);
    const double ratio = fine / coarse;
    rep.line("AC7", counts_ok && ratio <= 2.3,
             fmt::format("point counts match segment sums ({} points at dt = {} s); generation time dt 0.01 s: "
                         "{:.3f} s, dt 0.005 s: {:.3f} s, ratio {:.2f} (limit 2.3)",
                         points, spec.dt, coarse, fine, ratio));
}

void determinism(Report& rep) {
    const fs::path root = fs::temp_directory_path() / "flatlo_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfg = fs::path(FLATLO_SOURCE_DIR) / "configs" / "case_study.json";
    std::ostringstream log;
    const int a = cli::simulate({cfg, root / "t1", std::nullopt, std::nullopt, false, 1}, log);
    const int b = cli::simulate({cfg, root / "t4", std::nullopt, std::nullopt, false, 4}, log);
    std::size_t compared = 0;
    std::size_t differing = 0;
    for (const auto& entry : fs::directory_iterator(root / "t1")) {
        if (entry.path().extension() != ".csv") {
            continue;
        }
        ++compared;
        differing += slurp(entry.path()) == slurp(root / "t4" / entry.path().filename()) ? 0 : 1;
    }
    fs::remove_all(root);
    rep.line("AC8", a == 0 && b == 0 && compared > 0 && differing == 0,
             fmt::format("closed-loop CSVs with 1 vs 4 threads: {} files compared, {} differ", compared, differing));
}

} // namespace

int main() {
    Report rep;
    spacing_theorem(rep);
    difference_law(rep);
    case_study_reference(rep);
    ClosedLoopRun closed;
    case_study_closed_loop(rep, closed);
    simultaneous_arrival(rep, closed);
    dynamics_identities(rep);
    linear_complexity(rep);
    determinism(rep);
    fmt::print("{} of 8 criteria passed\n", 8 - rep.failures);
    return rep.failures == 0 ? 0 : 1;
}
