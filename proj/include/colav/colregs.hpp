#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "colav/geometry.hpp"
#include "colav/risk.hpp"

namespace colav::colregs {

enum class Situation { head_on, overtaking, crossing };

enum class Role { stand_on, give_way };

/// Role plus turn direction. A stand-on action never carries a turn.
struct ManeuverAction {
    Role role = Role::stand_on;
    Turn turn = Turn::none;

    static ManeuverAction stand_on() { return {Role::stand_on, Turn::none}; }
    static ManeuverAction give_way(Turn t) { return {Role::give_way, t}; }

    bool operator==(const ManeuverAction&) const = default;
};

/// Where a decision sits in the encounter lifecycle.
///   monitor  - no encounter active, nothing to do
///   initiate - an encounter starts with the given role
///   hold     - the latched encounter continues unchanged
///   release  - the encounter ends and pure waypoint tracking resumes
enum class Phase { monitor, initiate, hold, release };

/// Latched encounter memory: situation, action, turning flag and the decision
/// cycle at which the give-way manoeuvre started.
struct DecisionState {
    Situation situation = Situation::crossing;
    ManeuverAction action = ManeuverAction::stand_on();
    bool turning = false;
    std::optional<long> initiation_index;
    bool active = false;

    bool operator==(const DecisionState&) const = default;
};

struct Thresholds {
    double risk = 0.75;
    double range = 1000.0;  // [m]
    double d_cpa = 250.0;   // [m]
    double t_cpa = 60.0;    // [s]
    double hysteresis_risk = 0.2;
    // Added to the relative heading before the situation bands are applied.
    // 0 applies the bands to wrap(psi_target - psi_own) as is.
    double relative_heading_offset_deg = 0.0;

    void validate() const;
};

struct Decision {
    Situation situation = Situation::crossing;
    ManeuverAction action = ManeuverAction::stand_on();
    Phase phase = Phase::monitor;
    std::string rule_citation;
    std::string reasoning;

    bool operator==(const Decision&) const = default;
};

struct StateUpdate {
    DecisionState state;
    std::optional<std::string> discrepancy;  // set when the transition was rejected
};

/// Situation bands on the relative heading in degrees, (-180, 180]:
/// head-on for |psi| <= 6, overtaking for |psi| <= 112, crossing otherwise.
/// Band edges belong to the earlier case.
Situation classify(double relative_heading_deg);

/// Relative heading (rad) after the configured offset, in degrees.
double classification_input_deg(double relative_heading, const Thresholds& thresholds);

/// Give-way or stand-on duty for own ship.
///   crossing:   give way (starboard) when the target is on the starboard side, bearing in (0, 112.5 deg]
///   head-on:    give way (starboard)
///   overtaking: give way (starboard) when the target is within 45 deg of the bow,
///               own ship is faster and the range is closing
ManeuverAction determine_role(Situation situation, double bearing, double own_speed, double target_speed,
                              bool closing);

/// Release predicate for an active encounter: risk below the hysteresis band
/// and the vessels past CPA (or not closing at all).
bool release_conditions_met(const risk::EncounterGeometry& geometry, const risk::RiskBreakdown& risk,
                            const Thresholds& thresholds);

/// Rule reference for a (situation, action, phase) triple.
std::string rule_citation(Situation situation, const ManeuverAction& action, Phase phase);

/// Deterministic rule-based decision function.
Decision rule_decide(const risk::EncounterGeometry& geometry, const risk::RiskBreakdown& risk,
                     const DecisionState& state, const Thresholds& thresholds);

/// Applies a decision to the latched state. Legal transitions are
/// inactive -> initiate, inactive -> monitor, active -> hold (same situation
/// and action) and active -> release. Anything else leaves the state unchanged
/// and reports a discrepancy.
StateUpdate update_state(const DecisionState& state, const Decision& decision, long cycle_index);

/// Turn direction the guidance layer should apply for this state.
Turn steering_turn(const DecisionState& state);

std::string_view to_string(Situation s);
std::string_view to_string(Role r);
std::string_view to_string(Turn t);
std::string_view to_string(Phase p);
/// "Give-way" / "Stand-on"
std::string_view display_name(Role r);

}  // namespace colav::colregs
