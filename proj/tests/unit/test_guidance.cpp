#include <doctest.h>

#include <cmath>
#include <limits>

#include "colav/guidance.hpp"
#include "gen.hpp"

using namespace colav;
using namespace colav::guidance;

namespace {

// Perpendicular-projection oracle for the leg frame.
struct Projection {
    double cross_track;
    double along_to_go;
};

Projection project(Vec2 p, Waypoint a, Waypoint b) {
    const double lx = b.x - a.x, ly = b.y - a.y;
    const double len = std::hypot(lx, ly);
    const double ux = lx / len, uy = ly / len;
    const double px = p.x - a.x, py = p.y - a.y;
    // Starboard normal of a leg heading (ux, uy) in North-East axes is (-uy, ux).
    return {px * -uy + py * ux, len - (px * ux + py * uy)};
}

}  // namespace

TEST_CASE("line-of-sight heading") {
    CHECK(los_heading({0, 0}, {100, 0}) == doctest::Approx(0.0));
    CHECK(los_heading({0, 0}, {0, 100}) == doctest::Approx(kPi / 2));
    CHECK(los_heading({100, 100}, {0, 0}) == doctest::Approx(-3 * kPi / 4));
    CHECK(los_heading({0, 0}, {-100, 0}) == doctest::Approx(kPi));
    CHECK_THROWS_AS(los_heading({5, 5}, {5, 5}), WaypointReached);
}

TEST_CASE("path frame") {
    SUBCASE("on the leg line") {
        const auto f = path_frame({300, 0}, {0, 0}, {1000, 0});
        CHECK(f.cross_track == doctest::Approx(0.0));
        CHECK(f.along_track == doctest::Approx(700.0));
    }
    SUBCASE("starboard of track") {
        const auto f = path_frame({500, 100}, {0, 0}, {1000, 0});
        CHECK(f.cross_track == doctest::Approx(100.0));
        CHECK(f.along_track == doctest::Approx(500.0));
        CHECK(f.leg_length == doctest::Approx(1000.0));
        CHECK(f.leg_heading == doctest::Approx(0.0));
    }
    SUBCASE("port of track is negative") {
        CHECK(path_frame({500, -40}, {0, 0}, {1000, 0}).cross_track == doctest::Approx(-40.0));
    }
    SUBCASE("at the previous waypoint the whole leg remains") {
        const auto f = path_frame({0, 0}, {0, 0}, {300, 400});
        CHECK(f.along_track == doctest::Approx(500.0));
        CHECK(f.cross_track == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("abeam of the waypoint stays finite") {
        const auto f = path_frame({1000, 50}, {0, 0}, {1000, 0});
        CHECK(f.cross_track == doctest::Approx(50.0));
        CHECK(f.along_track == doctest::Approx(0.0));
    }
    SUBCASE("on the waypoint") {
        const auto f = path_frame({1000, 0}, {0, 0}, {1000, 0});
        CHECK(f.cross_track == 0.0);
    }
    CHECK_THROWS_AS(path_frame({1, 1}, {0, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("property: path frame matches perpendicular projection") {
    testgen::Gen g(5);
    for (int i = 0; i < 5000; ++i) {
        const Waypoint a{g.uniform(-5000, 5000), g.uniform(-5000, 5000)};
        const Waypoint b{a.x + g.uniform(-3000, 3000), a.y + g.uniform(-3000, 3000)};
        if (std::hypot(b.x - a.x, b.y - a.y) < 1.0) continue;
        const Vec2 p{g.uniform(-8000, 8000), g.uniform(-8000, 8000)};
        const auto f = path_frame(p, a, b);
        const auto o = project(p, a, b);
        REQUIRE(f.cross_track == doctest::Approx(o.cross_track).epsilon(1e-9).scale(1e3));
        REQUIRE(f.along_track == doctest::Approx(o.along_to_go).epsilon(1e-9).scale(1e3));
    }
}

TEST_CASE("cross-track correction") {
    PathFrame f;
    CHECK(cte_correction(f, 200.0) == 0.0);
    f.cross_track = 100.0;
    CHECK(cte_correction(f, 100.0) == doctest::Approx(-kPi / 4));
    f.cross_track = -100.0;
    CHECK(cte_correction(f, 100.0) == doctest::Approx(kPi / 4));
    f.cross_track = 1e12;
    CHECK(cte_correction(f, 200.0) == doctest::Approx(-kPi / 2));
    f.cross_track = std::numeric_limits<double>::infinity();
    CHECK(cte_correction(f, 200.0) == doctest::Approx(-kPi / 2));
}

TEST_CASE("avoidance offset") {
    GuidanceParams p;
    CHECK(colav_offset(100.0, 0.3, Turn::none, p) == 0.0);
    CHECK(colav_offset(1200.0, 0.0, Turn::starboard, p) == 0.0);
    CHECK(colav_offset(5000.0, 0.0, Turn::starboard, p) == 0.0);
    CHECK(colav_offset(400.0, 0.0, Turn::starboard, p) == doctest::Approx(p.k_colav));
    CHECK(colav_offset(100.0, 0.0, Turn::port, p) == doctest::Approx(-p.k_colav));
    // halfway between the range knees, target 60 deg off the bow
    CHECK(colav_offset(800.0, deg2rad(60.0), Turn::starboard, p) == doctest::Approx(p.k_colav * 0.5 * 0.5));
    // targets abaft the beam do not push
    CHECK(colav_offset(300.0, deg2rad(120.0), Turn::starboard, p) == 0.0);
    CHECK(colav_offset(300.0, deg2rad(-90.0), Turn::starboard, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("property: avoidance offset is bounded and signed by the turn") {
    testgen::Gen g(8);
    GuidanceParams p;
    for (int i = 0; i < 10000; ++i) {
        const double range = g.uniform(0.0, 3000.0), bearing = g.angle();
        const double s = colav_offset(range, bearing, Turn::starboard, p);
        const double q = colav_offset(range, bearing, Turn::port, p);
        REQUIRE(s >= 0.0);
        REQUIRE(s <= p.k_colav);
        REQUIRE(q == -s);
    }
}

TEST_CASE("desired heading wraps the sum") {
    CHECK(desired_heading(0.0, 0.0, 0.0) == 0.0);
    CHECK(desired_heading(kPi / 2, 0.0, kPi) == doctest::Approx(-kPi / 2));
    CHECK(desired_heading(0.3, -0.1, 0.2) == doctest::Approx(0.4));
}

TEST_CASE("route and waypoint switching") {
    const Route r({{0, 0}, {10, 0}, {20, 0}});
    CHECK(r.active_index() == 1);
    CHECK(advance_waypoint(r, {0, 0}, 50.0).active_index() == 2);  // 10 m away
    const Route far({{0, 0}, {100, 0}, {200, 0}});
    CHECK(advance_waypoint(far, {0, 0}, 50.0).active_index() == 1);  // 100 m away
    const Route last({{0, 0}, {10, 0}, {20, 0}}, 2);
    CHECK(advance_waypoint(last, {20, 0}, 50.0).active_index() == 2);
    CHECK(last.at_final());

    CHECK_THROWS_AS(Route({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Route({{0, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Route({{0, 0}, {std::nan(""), 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Route({{0, 0}, {1, 0}}, 2), std::invalid_argument);
}

TEST_CASE("guidance parameter validation") {
    GuidanceParams p;
    CHECK_NOTHROW(p.validate());
    p.mu = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.range_knees = {1200.0, 400.0};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.acceptance_radius = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
