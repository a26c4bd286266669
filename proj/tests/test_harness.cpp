#include <doctest.h>

#include "flatlo/errors.hpp"
#include "flatlo/harness.hpp"
#include "flatlo/io.hpp"
#include "flatlo/maneuver.hpp"

#include <algorithm>
#include <cmath>

using namespace flatlo;

namespace {

SimConfig case_study_config() {
    SimConfig c;
    c.formation.k2 = 7650.0;
    c.noise = {0.0025, 2013};
    return c;
}

std::vector<Position3> line(double y, std::size_t n) {
    std::vector<Position3> t;
    for (std::size_t k = 0; k < n; ++k) {
        t.push_back({30.0 * k, y, 1000.0});
    }
    return t;
}

} // namespace

TEST_CASE("time grid includes the end") {
    const auto g = time_grid(2.25, 0.5);
    REQUIRE(g.size() == 6);
    CHECK(g[4] == 2.0);
    CHECK(g.back() == 2.25);
    CHECK(time_grid(2.0, 0.5).size() == 5);
    CHECK_THROWS_AS(time_grid(1.0, 0.0), ParameterError);
}

TEST_CASE("resample interpolates the reference") {
    const auto ref = fw_generate({{0, 0, 0}, 0.0, 0.0, 10.0, 100.0}, 1.0);
    const auto pts = resample(ref, time_grid(10.0, 0.25));
    CHECK(pts[1].x == doctest::Approx(2.5));
    CHECK(pts.back().x == doctest::Approx(100.0));
}

TEST_CASE("parallel lines") {
    const auto grid = time_grid(9.0, 1.0);
    const auto r = min_pairwise_separation({line(0.0, 10), line(18300.0, 10)}, grid, 2000.0);
    CHECK(r.pairs.size() == 1);
    CHECK(r.global_min == doctest::Approx(18300.0));
    CHECK_FALSE(r.colliding);
}

TEST_CASE("identical tracks collide") {
    const auto grid = time_grid(9.0, 1.0);
    const auto r = min_pairwise_separation({line(5.0, 10), line(5.0, 10)}, grid, 2000.0);
    CHECK(r.global_min == 0.0);
    CHECK(r.colliding);
}

TEST_CASE("minimum between samples is found") {
    // head-on along x, passing 100 m apart halfway between samples
    std::vector<Position3> a;
    std::vector<Position3> b;
    for (int k = 0; k < 4; ++k) {
        a.push_back({-150.0 + 100.0 * k, 0.0, 0.0});
        b.push_back({150.0 - 100.0 * k, 100.0, 0.0});
    }
    const auto r = min_pairwise_separation({a, b}, time_grid(3.0, 1.0), 10.0);
    CHECK(r.global_min == doctest::Approx(100.0));
    CHECK(r.pairs[0].time == doctest::Approx(1.5));
}

TEST_CASE("pair ordering and lookup") {
    const auto grid = time_grid(2.0, 1.0);
    const auto r = min_pairwise_separation({line(0.0, 3), line(10.0, 3), line(30.0, 3)}, grid, 1.0);
    REQUIRE(r.pairs.size() == 3);
    CHECK(r.pair(0, 1).min_distance == doctest::Approx(10.0));
    CHECK(r.pair(2, 0).min_distance == doctest::Approx(30.0));
    CHECK(r.pair(1, 2).min_distance == doctest::Approx(20.0));
    CHECK_THROWS_AS(r.pair(0, 3), ParameterError);
}

TEST_CASE("misaligned tracks") {
    const auto grid = time_grid(9.0, 1.0);
    CHECK_THROWS_AS(min_pairwise_separation({line(0.0, 10), line(1.0, 9)}, grid, 1.0), AlignmentError);
    CHECK_THROWS_AS(crossing_order_check({line(0.0, 10), line(1.0, 9)}, grid, {10.0}, 0.0), AlignmentError);
}

TEST_CASE("crossing order") {
    const auto grid = time_grid(9.0, 1.0);
    auto lead = line(0.0, 10);
    auto trail = line(100.0, 10);
    for (auto& p : trail) {
        p.x -= 45.0;
    }
    const auto ev = crossing_order_check({lead, trail}, grid, {60.0, 1e6}, 0.0);
    const auto* a = find_crossing(ev, 0, 0);
    const auto* b = find_crossing(ev, 1, 0);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a->time == doctest::Approx(2.0));
    CHECK(a->ahead.empty());
    CHECK(*b->time == doctest::Approx(3.5));
    CHECK(b->ahead == std::vector<std::size_t>{0});
    CHECK_FALSE(find_crossing(ev, 0, 1)->time);
    CHECK(find_crossing(ev, 5, 0) == nullptr);
}

TEST_CASE("default mark stations") {
    SimConfig c = case_study_config();
    const auto m = mark_stations(c, 94990.0);
    REQUIRE(m.size() == 10);
    CHECK(m[0] == 9150.0);
    CHECK(m[3] == 36600.0);
    CHECK(m.back() == 91500.0);
    c.marks = {1.0, 2.0};
    CHECK(mark_stations(c, 94990.0) == c.marks);
}

TEST_CASE("formation quality") {
    FormationSpec spec;
    const std::vector<Position3> finals{{100.0, 0.5, 3050.0}, {100.0 + 18300.0, -0.5, 3050.0}};
    const auto q = formation_quality(finals, {10.0, 10.5}, spec);
    CHECK(q.order == std::vector<std::size_t>{1, 0});
    CHECK(q.gaps.size() == 1);
    CHECK(q.max_gap_error == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(q.max_centerline_offset == doctest::Approx(0.5));
    CHECK(q.arrival_spread == doctest::Approx(0.5));
    CHECK_THROWS_AS(formation_quality(finals, {1.0}, spec), ParameterError);
}

TEST_CASE("reference-only case study squadron") {
    const auto run = run_reference_only(case_study_config(), 2);
    CHECK(run.quality.max_gap_error < 1e-6 * 18300.0);
    CHECK(run.quality.arrival_spread == 0.0);
    CHECK_FALSE(run.separation.colliding);
    CHECK(run.separation.global_min > 2000.0);
    CHECK(run.quality.order == std::vector<std::size_t>{0, 1, 2, 3});
    const auto* e = find_crossing(run.crossings, 3, 3);
    REQUIRE(e);
    CHECK(std::find(e->ahead.begin(), e->ahead.end(), 2) != e->ahead.end());
}

TEST_CASE("two aircraft converge without meeting") {
    SimConfig c;
    c.formation.n_aircraft = 2;
    c.formation.k2 = 5000.0;
    const auto run = run_reference_only(c, 1);
    CHECK(run.separation.global_min > 0.0);
    CHECK(run.separation.global_min <= 18300.0);
    CHECK(run.quality.max_gap_error < 1e-6 * 18300.0);
}

TEST_CASE("closed loop without noise keeps the spacing") {
    SimConfig c = case_study_config();
    c.noise.level = 0.0;
    const auto run = run_closed_loop(c, 2);
    for (double gap : run.quality.gaps) {
        CHECK(std::abs(gap - 18300.0) < 0.02 * 18300.0);
    }
    CHECK(run.quality.arrival_spread <= 2.0 * c.sim_dt);
    CHECK(run.quality.max_centerline_offset < 0.05 * 18300.0);
    for (const auto& a : run.aircraft) {
        CHECK(a.max_cross_track < 0.05 * 18300.0);
        CHECK(a.states.size() == run.grid.size());
    }
}

TEST_CASE("closed loop with noise reproduces the reported minima") {
    const auto run = run_closed_loop(case_study_config());
    CHECK(run.separation.pair(0, 1).min_distance == doctest::Approx(14500.0).epsilon(0.15));
    CHECK(run.separation.pair(2, 3).min_distance == doctest::Approx(18300.0).epsilon(0.15));
    CHECK(run.separation.global_min > 2000.0);
}

TEST_CASE("closed loop is reproducible and thread independent") {
    const auto a = run_closed_loop(case_study_config(), 1);
    const auto b = run_closed_loop(case_study_config(), 3);
    REQUIRE(a.aircraft.size() == b.aircraft.size());
    for (std::size_t i = 0; i < a.aircraft.size(); ++i) {
        CHECK(a.aircraft[i].states == b.aircraft[i].states);
    }
    SimConfig other = case_study_config();
    other.noise.seed = 7;
    const auto c = run_closed_loop(other, 1);
    CHECK_FALSE(a.aircraft[0].states == c.aircraft[0].states);
}

TEST_CASE("single aircraft on a straight reference") {
    auto ref = fw_generate({{0, 0, 1000}, 0.0, 0.0, 30.0, 30000.0}, 1.0);
    ref.airspeed = 30.0;
    SimConfig c;
    const auto grid = time_grid(ref.duration(), c.sim_dt);
    const auto run = simulate_aircraft(ref, {30.0, 0.0, 0.0, 0.0, 80.0, 1000.0}, grid, c, 0);
    double late = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] > 300.0) {
            late = std::max(late, std::abs(run.errors[k].cross));
        }
    }
    CHECK(late < 1.0);
    CHECK(run.arrival_time == doctest::Approx(1000.0).epsilon(0.01));
}

TEST_CASE("runaway aircraft aborts") {
    auto ref = fw_generate({{0, 0, 1000}, 0.0, 0.0, 30.0, 30000.0}, 1.0);
    ref.airspeed = 30.0;
    SimConfig c;
    c.abort_cross_track = 50.0;
    const auto grid = time_grid(ref.duration(), c.sim_dt);
    CHECK_THROWS_AS(simulate_aircraft(ref, {30.0, 0.0, kPi / 2.0, 0.0, 0.0, 1000.0}, grid, c, 0), DivergenceError);
}

TEST_CASE("config validation") {
    SimConfig c;
    c.sim_dt = 2.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = SimConfig{};
    c.noise.level = -1.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = SimConfig{};
    c.params.mu_max = 2.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    CHECK_NOTHROW(validate(SimConfig{}));
}
