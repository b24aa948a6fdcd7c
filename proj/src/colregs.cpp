#include "colav/colregs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace colav::colregs {

namespace {

constexpr double kHeadOnBandDeg = 6.0;
constexpr double kOvertakingBandDeg = 112.0;
constexpr double kCrossingStarboardLimitDeg = 112.5;
constexpr double kOvertakingBowSectorDeg = 45.0;

std::string critical_flags(const risk::EncounterGeometry& g, const Thresholds& t) {
    std::vector<std::string> flags;
    if (g.d_cpa <= t.d_cpa) flags.emplace_back("D_CPA");
    if (g.closing() && g.t_cpa <= t.t_cpa) flags.emplace_back("T_CPA");
    if (g.range <= t.range) flags.emplace_back("range");
    if (flags.empty()) return "no parameter below its critical threshold";
    return fmt::format("critical: {}", fmt::join(flags, ", "));
}

std::string telemetry(const risk::EncounterGeometry& g, const risk::RiskBreakdown& r) {
    return fmt::format("risk {:.2f}, T_CPA {:.2f} s, D_CPA {:.2f} m, range {:.2f} m", r.risk, g.t_cpa, g.d_cpa,
                       g.range);
}

std::string side_of(double bearing) { return bearing > 0.0 ? "starboard" : "port"; }

std::string initiation_reasoning(Situation sit, const ManeuverAction& act, const risk::EncounterGeometry& g,
                                 const risk::RiskBreakdown& r, const Thresholds& t) {
    const double bearing_deg = rad2deg(g.bearing);
    const double rel_deg = rad2deg(g.relative_heading);
    const std::string risk_part =
        fmt::format("Risk {:.2f} reaches the {:.2f} threshold ({}; {})", r.risk, t.risk, telemetry(g, r),
                    critical_flags(g, t));
    switch (sit) {
        case Situation::crossing:
            if (act.role == Role::give_way)
                return fmt::format(
                    "Crossing situation with the target on the starboard side (bearing {:.2f} deg, relative "
                    "heading {:.2f} deg), making own vessel the give-way vessel under Rule 15. {}. Give-way, "
                    "turn starboard and pass astern of the target.",
                    bearing_deg, rel_deg, risk_part);
            return fmt::format(
                "Crossing situation with the target on the {} side (bearing {:.2f} deg, relative heading {:.2f} "
                "deg). {}. Risk present but manageable, maintaining stand-on duty under Rule 17 and monitoring "
                "the target.",
                side_of(g.bearing), bearing_deg, rel_deg, risk_part);
        case Situation::head_on:
            return fmt::format(
                "Head-on situation (relative heading {:.2f} deg, bearing {:.2f} deg); each vessel alters course "
                "to starboard under Rule 14. {}. Give-way, turn starboard.",
                rel_deg, bearing_deg, risk_part);
        case Situation::overtaking:
            if (act.role == Role::give_way)
                return fmt::format(
                    "Overtaking situation: own vessel ({:.2f} m/s) is closing on a slower target ({:.2f} m/s) "
                    "ahead at bearing {:.2f} deg and must keep out of its way under Rule 13. {}. Give-way, turn "
                    "starboard.",
                    g.own_speed, g.target_speed, bearing_deg, risk_part);
            return fmt::format(
                "Overtaking geometry (relative heading {:.2f} deg, bearing {:.2f} deg) in which own vessel is not "
                "the overtaking vessel. {}. Maintaining course and speed under Rule 17.",
                rel_deg, bearing_deg, risk_part);
    }
    return {};
}

}  // namespace

void Thresholds::validate() const {
    auto positive = [](double v, const char* field) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw std::invalid_argument(std::string("thresholds.") + field + ": must be > 0");
    };
    positive(risk, "risk");
    positive(range, "range");
    positive(d_cpa, "d_cpa");
    positive(t_cpa, "t_cpa");
    positive(hysteresis_risk, "hysteresis_risk");
    if (!(hysteresis_risk < risk))
        throw std::invalid_argument("thresholds.hysteresis_risk: must be smaller than thresholds.risk");
    if (!std::isfinite(relative_heading_offset_deg))
        throw std::invalid_argument("thresholds.relative_heading_offset_deg: must be finite");
}

Situation classify(double relative_heading_deg) {
    const double a = std::abs(relative_heading_deg);
    if (a <= kHeadOnBandDeg) return Situation::head_on;
    if (a <= kOvertakingBandDeg) return Situation::overtaking;
    return Situation::crossing;
}

double classification_input_deg(double relative_heading, const Thresholds& thresholds) {
    return wrap_degrees(rad2deg(relative_heading) + thresholds.relative_heading_offset_deg);
}

ManeuverAction determine_role(Situation situation, double bearing, double own_speed, double target_speed,
                              bool closing) {
    const double bearing_deg = rad2deg(bearing);
    switch (situation) {
        case Situation::crossing:
            if (bearing_deg > 0.0 && bearing_deg <= kCrossingStarboardLimitDeg)
                return ManeuverAction::give_way(Turn::starboard);
            return ManeuverAction::stand_on();
        case Situation::head_on:
            return ManeuverAction::give_way(Turn::starboard);
        case Situation::overtaking:
            if (std::abs(bearing_deg) <= kOvertakingBowSectorDeg && own_speed > target_speed && closing)
                return ManeuverAction::give_way(Turn::starboard);
            return ManeuverAction::stand_on();
    }
    return ManeuverAction::stand_on();
}

bool release_conditions_met(const risk::EncounterGeometry& geometry, const risk::RiskBreakdown& risk,
                            const Thresholds& thresholds) {
    const bool low_risk = risk.risk < thresholds.risk - thresholds.hysteresis_risk;
    return low_risk && !geometry.closing();
}

std::string rule_citation(Situation situation, const ManeuverAction& action, Phase phase) {
    if (phase == Phase::monitor) return "none";
    if (action.role == Role::stand_on) return "Rule 17";
    switch (situation) {
        case Situation::head_on: return "Rule 14";
        case Situation::overtaking: return "Rule 13";
        case Situation::crossing: return "Rule 15";
    }
    return "none";
}

Decision rule_decide(const risk::EncounterGeometry& geometry, const risk::RiskBreakdown& risk,
                     const DecisionState& state, const Thresholds& thresholds) {
    Decision d;
    if (!state.active) {
        d.situation = classify(classification_input_deg(geometry.relative_heading, thresholds));
        if (risk.risk >= thresholds.risk) {
            d.phase = Phase::initiate;
            d.action = determine_role(d.situation, geometry.bearing, geometry.own_speed, geometry.target_speed,
                                      geometry.closing());
            d.reasoning = initiation_reasoning(d.situation, d.action, geometry, risk, thresholds);
        } else {
            d.phase = Phase::monitor;
            d.action = ManeuverAction::stand_on();
            d.reasoning = fmt::format(
                "No encounter requiring action: risk {:.2f} is below the {:.2f} threshold ({}). Continuing "
                "waypoint tracking.",
                risk.risk, thresholds.risk, telemetry(geometry, risk));
        }
    } else if (release_conditions_met(geometry, risk, thresholds)) {
        d.phase = Phase::release;
        d.situation = state.situation;
        d.action = ManeuverAction::stand_on();
        d.reasoning = fmt::format(
            "Encounter clear: risk {:.2f} is below the {:.2f} release level and the vessels are past CPA ({}). "
            "Resuming waypoint tracking.",
            risk.risk, thresholds.risk - thresholds.hysteresis_risk, telemetry(geometry, risk));
    } else {
        d.phase = Phase::hold;
        d.situation = state.situation;
        d.action = state.action;
        if (state.action.role == Role::give_way)
            d.reasoning = fmt::format(
                "Continuing the {} give-way manoeuvre (turn {}) latched at cycle {} until the vessels are past "
                "CPA; {}.",
                to_string(state.situation), to_string(state.action.turn), state.initiation_index.value_or(-1),
                telemetry(geometry, risk));
        else
            d.reasoning = fmt::format(
                "Maintaining stand-on duty in the latched {} situation and monitoring the target; {}.",
                to_string(state.situation), telemetry(geometry, risk));
    }
    d.rule_citation = rule_citation(d.situation, d.action, d.phase);
    return d;
}

StateUpdate update_state(const DecisionState& state, const Decision& decision, long cycle_index) {
    auto reject = [&](std::string why) { return StateUpdate{state, std::move(why)}; };
    switch (decision.phase) {
        case Phase::monitor:
            if (state.active) return reject("monitor decision while an encounter is active");
            return {state, std::nullopt};
        case Phase::initiate: {
            if (state.active) return reject("initiation while an encounter is already active");
            if (decision.action.role == Role::stand_on && decision.action.turn != Turn::none)
                return reject("stand-on action carrying a turn");
            DecisionState next;
            next.active = true;
            next.situation = decision.situation;
            next.action = decision.action;
            next.turning = decision.action.role == Role::give_way;
            next.initiation_index = next.turning ? std::optional<long>(cycle_index) : std::nullopt;
            return {next, std::nullopt};
        }
        case Phase::hold:
            if (!state.active) return reject("hold decision without an active encounter");
            if (decision.situation != state.situation)
                return reject(fmt::format("hold decision changes the latched situation from {} to {}",
                                          to_string(state.situation), to_string(decision.situation)));
            if (decision.action != state.action)
                return reject(fmt::format("hold decision changes the latched action from {} to {}",
                                          display_name(state.action.role), display_name(decision.action.role)));
            return {state, std::nullopt};
        case Phase::release: {
            if (!state.active) return reject("release without an active encounter");
            DecisionState next = state;
            next.active = false;
            next.turning = false;
            next.action = ManeuverAction::stand_on();
            return {next, std::nullopt};
        }
    }
    return reject("unknown phase");
}

Turn steering_turn(const DecisionState& state) {
    if (!state.active || state.action.role != Role::give_way) return Turn::none;
    return state.action.turn;
}

std::string_view to_string(Situation s) {
    switch (s) {
        case Situation::head_on: return "head-on";
        case Situation::overtaking: return "overtaking";
        case Situation::crossing: return "crossing";
    }
    return "?";
}

std::string_view to_string(Role r) { return r == Role::give_way ? "give-way" : "stand-on"; }

std::string_view display_name(Role r) { return r == Role::give_way ? "Give-way" : "Stand-on"; }

std::string_view to_string(Turn t) {
    switch (t) {
        case Turn::port: return "port";
        case Turn::starboard: return "starboard";
        case Turn::none: return "none";
    }
    return "?";
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::monitor: return "monitor";
        case Phase::initiate: return "initiate";
        case Phase::hold: return "hold";
        case Phase::release: return "release";
    }
    return "?";
}

}  // namespace colav::colregs
