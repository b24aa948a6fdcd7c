#include <doctest.h>

#include <limits>
#include <string>
#include <vector>

#include "colav/llm.hpp"
#include "gen.hpp"

using namespace colav;
using namespace colav::llm;
using colregs::ManeuverAction;
using colregs::Situation;

namespace {

risk::EncounterGeometry crossing_geometry() {
    risk::EncounterGeometry g;
    g.t_cpa = 16.84;
    g.d_cpa = 257.54;
    g.range = 431.79;
    g.relative_heading = deg2rad(-150.09);
    g.bearing = deg2rad(60.0);
    g.own_speed = 16.0;
    g.target_speed = 10.0;
    return g;
}

risk::RiskBreakdown risk_of(double r) {
    risk::RiskBreakdown b;
    b.risk = r;
    return b;
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("prompt carries the telemetry") {
    const auto tmpl = PromptTemplate::standard(colregs::Thresholds{});
    const auto p = build_prompt(crossing_geometry(), risk_of(0.86), colregs::DecisionState{}, tmpl);
    for (const char* v : {"0.86", "16.84", "257.54", "431.79", "-150.09"}) CHECK(has(p, v));
    CHECK(has(p, "starboard side"));
    CHECK(has(p, "SITUATION:"));
    CHECK(has(p, "Current manoeuvre status: none"));
    CHECK(p == build_prompt(crossing_geometry(), risk_of(0.86), colregs::DecisionState{}, tmpl));
}

TEST_CASE("prompt shows an active manoeuvre") {
    colregs::DecisionState s;
    s.active = true;
    s.turning = true;
    s.action = ManeuverAction::give_way(Turn::starboard);
    s.initiation_index = 12;
    const auto p = build_prompt(crossing_geometry(), risk_of(0.86), s, PromptTemplate::standard({}));
    CHECK(has(p, "Current manoeuvre status: Give-way, turn starboard"));
    CHECK(has(p, "cycle 12"));
}

TEST_CASE("prompt rejects bad inputs") {
    auto g = crossing_geometry();
    g.range = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(build_prompt(g, risk_of(0.5), {}, PromptTemplate::standard({})), std::invalid_argument);
    PromptTemplate empty;
    CHECK_THROWS_AS(build_prompt(crossing_geometry(), risk_of(0.5), {}, empty), std::invalid_argument);
    g = crossing_geometry();
    g.t_cpa = std::numeric_limits<double>::infinity();
    CHECK(has(build_prompt(g, risk_of(0.5), {}, PromptTemplate::standard({})), "T_CPA: inf s"));
}

TEST_CASE("parse: reference answers") {
    const auto gw = parse_response(
        "SITUATION: crossing\nACTION: Give-way, turn starboard\nREASONING: target on starboard side, Rule 15.");
    CHECK(gw.situation == Situation::crossing);
    CHECK(gw.action == ManeuverAction::give_way(Turn::starboard));
    CHECK(gw.reasoning == "target on starboard side, Rule 15.");

    const auto so = parse_response(
        "SITUATION: crossing\nACTION: Stand-on\nREASONING: Risk present but manageable, maintaining stand-on duty "
        "as target vessel on the port side");
    CHECK(so.situation == Situation::crossing);
    CHECK(so.action == ManeuverAction::stand_on());
}

TEST_CASE("parse: tolerant formatting") {
    const auto a = parse_response(
        "Sure.\n**Situation:** Head-on\n**Action:** give way - turn to starboard\n**Reasoning:** Rule 14\napplies.");
    CHECK(a.situation == Situation::head_on);
    CHECK(a.action == ManeuverAction::give_way(Turn::starboard));
    CHECK(a.reasoning == "Rule 14\napplies.");

    const auto b = parse_response("situation: OVERTAKING action: Give-way reasoning: keep clear");
    CHECK(b.situation == Situation::overtaking);
    CHECK(b.action == ManeuverAction::give_way(Turn::none));

    // labels repeated inside the reasoning belong to the reasoning
    const auto c = parse_response("SITUATION: crossing\nACTION: Stand-on\nREASONING: the ACTION: is to hold");
    CHECK(c.reasoning == "the ACTION: is to hold");
}

TEST_CASE("parse: errors") {
    CHECK_THROWS_AS(parse_response(""), ParseError);
    CHECK_THROWS_AS(parse_response("I cannot help with that."), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing\nACTION: Stand-on"), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: sideways\nACTION: Stand-on\nREASONING: x"), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing or head-on\nACTION: Stand-on\nREASONING: x"), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing\nACTION: Stand-on or give-way\nREASONING: x"), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing\nACTION: Stand-on, turn port\nREASONING: x"), ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing\nACTION: Give-way, port or starboard\nREASONING: x"),
                    ParseError);
    CHECK_THROWS_AS(parse_response("SITUATION: crossing\nACTION: Stand-on\nREASONING:   "), ParseError);
    try {
        parse_response("nonsense");
    } catch (const ParseError& e) {
        CHECK(e.raw() == "nonsense");
    }
}

TEST_CASE("property: render and parse round-trip") {
    testgen::Gen g(9);
    const Situation sits[] = {Situation::head_on, Situation::overtaking, Situation::crossing};
    const ManeuverAction acts[] = {ManeuverAction::stand_on(), ManeuverAction::give_way(Turn::starboard),
                                   ManeuverAction::give_way(Turn::port)};
    for (int i = 0; i < 500; ++i) {
        ExplainableAction a;
        a.situation = sits[g.integer(0, 2)];
        a.action = acts[g.integer(0, 2)];
        a.reasoning = "Risk " + std::to_string(g.uniform(0, 1)) + " under Rule " + std::to_string(g.integer(13, 17));
        REQUIRE(parse_response(render_response(a)) == a);
    }
}

TEST_CASE("consistency guard") {
    const colregs::Thresholds t;
    auto geo = crossing_geometry();
    std::vector<std::string> notes;

    SUBCASE("give-way answer from idle initiates") {
        const auto d = resolve_action({Situation::crossing, ManeuverAction::give_way(Turn::none), "r"}, geo,
                                      risk_of(0.86), {}, t, notes);
        CHECK(d.phase == colregs::Phase::initiate);
        CHECK(d.action == ManeuverAction::give_way(Turn::starboard));
        CHECK(d.rule_citation == "Rule 15");
        CHECK(notes.empty());
    }
    SUBCASE("stand-on answer below threshold monitors") {
        const auto d = resolve_action({Situation::crossing, ManeuverAction::stand_on(), "r"}, geo, risk_of(0.4),
                                      {}, t, notes);
        CHECK(d.phase == colregs::Phase::monitor);
    }
    SUBCASE("mid-manoeuvre contradiction keeps the latched action") {
        colregs::DecisionState s;
        s.active = true;
        s.turning = true;
        s.situation = Situation::crossing;
        s.action = ManeuverAction::give_way(Turn::starboard);
        s.initiation_index = 4;
        const auto d = resolve_action({Situation::head_on, ManeuverAction::stand_on(), "all clear"}, geo,
                                      risk_of(0.86), s, t, notes);
        CHECK(d.phase == colregs::Phase::hold);
        CHECK(d.situation == Situation::crossing);
        CHECK(d.action == s.action);
        CHECK(notes.size() == 2);
        CHECK(has(d.reasoning, "all clear"));
        CHECK_FALSE(colregs::update_state(s, d, 5).discrepancy);
    }
    SUBCASE("stand-on answer after CPA releases") {
        colregs::DecisionState s;
        s.active = true;
        s.action = ManeuverAction::give_way(Turn::starboard);
        geo.t_cpa = -10.0;
        const auto d = resolve_action({Situation::crossing, ManeuverAction::stand_on(), "clear"}, geo, risk_of(0.3),
                                      s, t, notes);
        CHECK(d.phase == colregs::Phase::release);
        CHECK(notes.empty());
    }
}

TEST_CASE("llm config validation") {
    CHECK_NOTHROW(LlmConfig{}.validate());
    LlmConfig c;
    c.max_retries = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.timeout_s = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.temperature = 3.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
