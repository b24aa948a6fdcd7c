#pragma once

// Language-model decision adapter: prompt rendering, response parsing and the
// consistency guard that keeps model output inside the legal encounter
// transitions.

#include <stdexcept>
#include <string>
#include <vector>

#include "colav/colregs.hpp"
#include "colav/risk.hpp"

namespace colav::llm {

/// The three prompt blocks: situation bands, rule constraints and decision
/// parameters (output contract plus thresholds).
struct PromptTemplate {
    std::string bearing_map_text;
    std::string rule_constraints_text;
    std::string decision_params_text;
    // Offset applied to the relative heading before it is shown to the model,
    // mirroring Thresholds::relative_heading_offset_deg.
    double relative_heading_offset_deg = 0.0;

    /// Built-in template; the decision block quotes the given thresholds.
    static PromptTemplate standard(const colregs::Thresholds& thresholds);

    void validate() const;
};

struct LlmConfig {
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string model_name = "gpt-4";
    double temperature = 0.2;
    double timeout_s = 5.0;  // per attempt
    int max_retries = 2;
    std::string api_key_env_var = "OPENAI_API_KEY";

    void validate() const;
};

/// What the model answered, before the consistency guard.
struct ExplainableAction {
    colregs::Situation situation = colregs::Situation::crossing;
    colregs::ManeuverAction action = colregs::ManeuverAction::stand_on();
    std::string reasoning;

    bool operator==(const ExplainableAction&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string raw) : std::runtime_error(what), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

/// Renders the user prompt. Telemetry is printed with two decimals; the
/// relative heading in degrees. Throws std::invalid_argument on non-finite
/// telemetry (an infinite T_CPA is allowed and printed as "inf").
std::string build_prompt(const risk::EncounterGeometry& geometry, const risk::RiskBreakdown& risk,
                         const colregs::DecisionState& state, const PromptTemplate& tmpl);

/// System message sent ahead of the prompt.
std::string system_message();

/// Extracts the SITUATION / ACTION / REASONING fields. Labels are matched
/// case-insensitively and may be separated by newlines or " / ". Throws
/// ParseError on a missing field, an unknown or ambiguous token, or a
/// contradictory action such as "stand-on, turn starboard".
ExplainableAction parse_response(const std::string& text);

/// Canonical three-line response text; parse_response(render_response(a)) == a
/// for any action with a single-line reasoning.
std::string render_response(const ExplainableAction& action);

/// Consistency guard. Maps a model answer onto a legal decision for the
/// current latched state:
///   inactive: give-way initiates; stand-on initiates a stand-on encounter
///             when risk is at or above threshold, otherwise it is a monitor decision
///   active:   stand-on releases when the release predicate holds; anything
///             else holds the latched situation and action, and every mismatch
///             with the latched state is reported in `discrepancies`
colregs::Decision resolve_action(const ExplainableAction& proposed, const risk::EncounterGeometry& geometry,
                                 const risk::RiskBreakdown& risk, const colregs::DecisionState& state,
                                 const colregs::Thresholds& thresholds, std::vector<std::string>& discrepancies);

}  // namespace colav::llm
