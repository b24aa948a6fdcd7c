#include <doctest.h>

#include <cmath>
#include <string>

#include "colav/colregs.hpp"
#include "gen.hpp"

using namespace colav;
using namespace colav::colregs;

namespace {

risk::EncounterGeometry telemetry(double risk_t_cpa, double d_cpa, double range, double rel_deg, double bearing_deg,
                                  double own_speed = 16.0, double target_speed = 10.0) {
    risk::EncounterGeometry g;
    g.t_cpa = risk_t_cpa;
    g.d_cpa = d_cpa;
    g.range = range;
    g.relative_heading = deg2rad(rel_deg);
    g.bearing = deg2rad(bearing_deg);
    g.own_speed = own_speed;
    g.target_speed = target_speed;
    return g;
}

risk::RiskBreakdown risk_of(double r) {
    risk::RiskBreakdown b;
    b.risk = r;
    return b;
}

// Case order of the classifier written out independently.
Situation oracle(double deg) {
    if (-6.0 <= deg && deg <= 6.0) return Situation::head_on;
    if (-112.0 <= deg && deg <= 112.0) return Situation::overtaking;
    return Situation::crossing;
}

}  // namespace

TEST_CASE("classification bands") {
    CHECK(classify(0.0) == Situation::head_on);
    CHECK(classify(60.0) == Situation::overtaking);
    CHECK(classify(-150.09) == Situation::crossing);
    CHECK(classify(125.08) == Situation::crossing);
    CHECK(classify(6.0) == Situation::head_on);
    CHECK(classify(-6.0) == Situation::head_on);
    CHECK(classify(6.01) == Situation::overtaking);
    CHECK(classify(112.0) == Situation::overtaking);
    CHECK(classify(-112.0) == Situation::overtaking);
    CHECK(classify(112.01) == Situation::crossing);
    CHECK(classify(180.0) == Situation::crossing);
}

TEST_CASE("property: classification sweep agrees with the case order") {
    for (long k = -17999; k <= 18000; ++k) {
        const double deg = static_cast<double>(k) / 100.0;
        REQUIRE(classify(deg) == oracle(deg));
    }
}

TEST_CASE("relative heading offset remaps the classifier input") {
    Thresholds t;
    CHECK(classification_input_deg(deg2rad(-150.09), t) == doctest::Approx(-150.09));
    t.relative_heading_offset_deg = 180.0;
    CHECK(classification_input_deg(kPi, t) == doctest::Approx(0.0).scale(1.0));
    CHECK(classification_input_deg(deg2rad(-170.0), t) == doctest::Approx(10.0));
}

TEST_CASE("roles") {
    CHECK(determine_role(Situation::crossing, deg2rad(60), 16, 10, true) == ManeuverAction::give_way(Turn::starboard));
    CHECK(determine_role(Situation::crossing, deg2rad(112.5), 16, 10, true) ==
          ManeuverAction::give_way(Turn::starboard));
    CHECK(determine_role(Situation::crossing, deg2rad(113.0), 16, 10, true) == ManeuverAction::stand_on());
    CHECK(determine_role(Situation::crossing, deg2rad(-60), 16, 10, true) == ManeuverAction::stand_on());
    CHECK(determine_role(Situation::crossing, 0.0, 16, 10, true) == ManeuverAction::stand_on());
    CHECK(determine_role(Situation::head_on, deg2rad(-3), 16, 10, true) == ManeuverAction::give_way(Turn::starboard));
    CHECK(determine_role(Situation::overtaking, deg2rad(10), 16, 6, true) ==
          ManeuverAction::give_way(Turn::starboard));
    CHECK(determine_role(Situation::overtaking, deg2rad(10), 6, 16, true) == ManeuverAction::stand_on());
    CHECK(determine_role(Situation::overtaking, deg2rad(170), 6, 16, true) == ManeuverAction::stand_on());
    CHECK(determine_role(Situation::overtaking, deg2rad(10), 16, 6, false) == ManeuverAction::stand_on());
}

TEST_CASE("reference snapshots") {
    const Thresholds t;
    const DecisionState idle;
    SUBCASE("crossing, target starboard, high risk") {
        const auto d = rule_decide(telemetry(16.84, 257.54, 431.79, -150.09, 60.0), risk_of(0.86), idle, t);
        CHECK(d.situation == Situation::crossing);
        CHECK(d.action == ManeuverAction::give_way(Turn::starboard));
        CHECK(d.phase == Phase::initiate);
        CHECK(d.rule_citation == "Rule 15");
        CHECK(d.reasoning.find("Give-way, turn starboard") != std::string::npos);
        CHECK(d.reasoning.find("0.86") != std::string::npos);
    }
    SUBCASE("crossing, target port, risk above threshold") {
        const auto d = rule_decide(telemetry(53.27, 296.21, 407.47, 125.08, -60.0), risk_of(0.78), idle, t);
        CHECK(d.situation == Situation::crossing);
        CHECK(d.action == ManeuverAction::stand_on());
        CHECK(d.rule_citation == "Rule 17");
        CHECK(d.reasoning.find("Risk present but manageable") != std::string::npos);
    }
}

TEST_CASE("quiet encounter: monitor, no state change") {
    const Thresholds t;
    const DecisionState idle;
    const auto d = rule_decide(telemetry(500, 2000, 5000, 30, 20), risk_of(0.10), idle, t);
    CHECK(d.phase == Phase::monitor);
    CHECK(d.action == ManeuverAction::stand_on());
    CHECK(d.rule_citation == "none");
    const auto u = update_state(idle, d, 7);
    CHECK(u.state == idle);
    CHECK_FALSE(u.discrepancy);
}

TEST_CASE("state transitions") {
    const Thresholds t;
    DecisionState idle;
    Decision init;
    init.phase = Phase::initiate;
    init.situation = Situation::crossing;
    init.action = ManeuverAction::give_way(Turn::starboard);

    const auto started = update_state(idle, init, 42);
    REQUIRE_FALSE(started.discrepancy);
    CHECK(started.state.active);
    CHECK(started.state.turning);
    CHECK(started.state.initiation_index == 42);

    Decision hold = init;
    hold.phase = Phase::hold;
    const auto held = update_state(started.state, hold, 43);
    CHECK_FALSE(held.discrepancy);
    CHECK(held.state == started.state);

    Decision flip = hold;
    flip.action = ManeuverAction::stand_on();
    const auto rejected = update_state(started.state, flip, 44);
    CHECK(rejected.discrepancy);
    CHECK(rejected.state == started.state);

    CHECK(update_state(started.state, init, 45).discrepancy);  // re-initiation
    CHECK(update_state(idle, hold, 45).discrepancy);           // hold without encounter

    Decision release;
    release.phase = Phase::release;
    release.situation = Situation::crossing;
    const auto released = update_state(started.state, release, 90);
    CHECK_FALSE(released.discrepancy);
    CHECK_FALSE(released.state.active);
    CHECK_FALSE(released.state.turning);
    CHECK(steering_turn(released.state) == Turn::none);
    CHECK(steering_turn(started.state) == Turn::starboard);
}

TEST_CASE("latched decision holds until past CPA and below the release level") {
    const Thresholds t;
    DecisionState s;
    s.active = true;
    s.turning = true;
    s.situation = Situation::crossing;
    s.action = ManeuverAction::give_way(Turn::starboard);
    s.initiation_index = 3;

    // risk has dropped but still closing: hold
    auto d = rule_decide(telemetry(30.0, 400, 900, -150, 60), risk_of(0.30), s, t);
    CHECK(d.phase == Phase::hold);
    CHECK(d.action == s.action);
    // past CPA but risk between release level and threshold: hold
    d = rule_decide(telemetry(-5.0, 400, 500, -150, 100), risk_of(0.60), s, t);
    CHECK(d.phase == Phase::hold);
    // past CPA and risk below 0.55: release
    d = rule_decide(telemetry(-5.0, 400, 500, -150, 100), risk_of(0.54), s, t);
    CHECK(d.phase == Phase::release);
    CHECK(d.action == ManeuverAction::stand_on());
    // the classification is not re-evaluated while latched
    d = rule_decide(telemetry(30.0, 100, 900, 0.0, 0.0), risk_of(0.95), s, t);
    CHECK(d.situation == Situation::crossing);
}

TEST_CASE("property: rule decisions always pass the transition table") {
    testgen::Gen g(77);
    const Thresholds t;
    for (int run = 0; run < 200; ++run) {
        DecisionState s;
        for (long cycle = 0; cycle < 100; ++cycle) {
            const auto geo = telemetry(g.uniform(-300, 300), g.uniform(0, 2000), g.uniform(10, 5000),
                                       g.uniform(-180, 180), g.uniform(-180, 180), g.uniform(0, 20),
                                       g.uniform(0, 20));
            const auto d = rule_decide(geo, risk_of(g.uniform(0, 1)), s, t);
            const auto u = update_state(s, d, cycle);
            REQUIRE_FALSE(u.discrepancy);
            if (s.active && d.phase == Phase::hold) REQUIRE(u.state == s);
            REQUIRE((d.phase == Phase::monitor) == (d.rule_citation == "none"));
            s = u.state;
        }
    }
}

TEST_CASE("rule citations") {
    CHECK(rule_citation(Situation::crossing, ManeuverAction::stand_on(), Phase::monitor) == "none");
    CHECK(rule_citation(Situation::crossing, ManeuverAction::stand_on(), Phase::initiate) == "Rule 17");
    CHECK(rule_citation(Situation::head_on, ManeuverAction::give_way(Turn::starboard), Phase::hold) == "Rule 14");
    CHECK(rule_citation(Situation::overtaking, ManeuverAction::give_way(Turn::starboard), Phase::initiate) ==
          "Rule 13");
    CHECK(rule_citation(Situation::crossing, ManeuverAction::give_way(Turn::starboard), Phase::initiate) ==
          "Rule 15");
}

TEST_CASE("threshold validation") {
    CHECK_NOTHROW(Thresholds{}.validate());
    Thresholds t;
    t.hysteresis_risk = 0.8;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.d_cpa = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
