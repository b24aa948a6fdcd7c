#include "colav/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <regex>

#include <fmt/format.h>

namespace colav::llm {

using colregs::ManeuverAction;
using colregs::Phase;
using colregs::Role;
using colregs::Situation;

PromptTemplate PromptTemplate::standard(const colregs::Thresholds& t) {
    PromptTemplate p;
    p.relative_heading_offset_deg = t.relative_heading_offset_deg;
    p.bearing_map_text =
        "SITUATION CLASSIFICATION\n"
        "Classify the encounter from the relative heading psi_rel (degrees, wrapped to (-180, 180]).\n"
        "Evaluate the cases in this order and take the first that matches:\n"
        "  1. Head-on:    -6 <= psi_rel <= 6\n"
        "  2. Overtaking: -112 <= psi_rel <= 112\n"
        "  3. Crossing:   otherwise";
    p.rule_constraints_text = fmt::format(
        "COLREGS CONSTRAINTS\n"
        "  Rule 13 (overtaking): own vessel is the overtaking vessel when the target lies within 45 deg of the "
        "bow, own vessel is faster and the range is closing; it must keep out of the way: Give-way, turn "
        "starboard. Otherwise stand on.\n"
        "  Rule 14 (head-on): both vessels alter course to starboard: Give-way, turn starboard.\n"
        "  Rule 15 (crossing): a target on the starboard side (bearing in (0, 112.5] deg) makes own vessel the "
        "give-way vessel: Give-way, turn starboard and pass astern. A target on the port side makes own vessel "
        "the stand-on vessel.\n"
        "  Rule 16: the give-way vessel takes early and substantial action.\n"
        "  Rule 17: the stand-on vessel keeps her course and speed.\n"
        "  Consistency: while a manoeuvre is in progress keep the current status and situation. Report Stand-on "
        "to end it only once the vessels are past CPA and Risk is below {:.2f}.",
        t.risk - t.hysteresis_risk);
    p.decision_params_text = fmt::format(
        "DECISION PARAMETERS\n"
        "  Critical thresholds: Risk {:.2f}, Range {:.0f} m, D_CPA {:.0f} m, T_CPA {:.0f} s.\n"
        "  Start an encounter decision when Risk >= {:.2f}.\n"
        "OUTPUT FORMAT\n"
        "Answer with exactly three labelled lines and nothing else:\n"
        "SITUATION: <head-on | overtaking | crossing>\n"
        "ACTION: <Give-way, turn starboard | Give-way, turn port | Stand-on>\n"
        "REASONING: <one paragraph citing the applicable rule>",
        t.risk, t.range, t.d_cpa, t.t_cpa, t.risk);
    return p;
}

void PromptTemplate::validate() const {
    if (bearing_map_text.empty() || rule_constraints_text.empty() || decision_params_text.empty())
        throw std::invalid_argument("prompt template: all three blocks must be non-empty");
    if (!std::isfinite(relative_heading_offset_deg))
        throw std::invalid_argument("prompt template: relative heading offset must be finite");
}

void LlmConfig::validate() const {
    if (endpoint_url.empty()) throw std::invalid_argument("llm.endpoint_url: must be non-empty");
    if (model_name.empty()) throw std::invalid_argument("llm.model_name: must be non-empty");
    if (!std::isfinite(temperature) || temperature < 0.0 || temperature > 2.0)
        throw std::invalid_argument("llm.temperature: must be in [0, 2]");
    if (!std::isfinite(timeout_s) || !(timeout_s > 0.0)) throw std::invalid_argument("llm.timeout: must be > 0");
    if (max_retries < 0) throw std::invalid_argument("llm.max_retries: must be >= 0");
}

std::string system_message() {
    return "You are the collision-avoidance decision maker of an autonomous surface vessel. Apply the COLREGs "
           "exactly as instructed and answer only in the requested format.";
}

namespace {

std::string maneuver_status(const colregs::DecisionState& s) {
    if (!s.active) return "none (no active encounter)";
    if (s.action.role == Role::give_way)
        return fmt::format("Give-way, turn {} ({} encounter, manoeuvre initiated at decision cycle {})",
                           colregs::to_string(s.action.turn), colregs::to_string(s.situation),
                           s.initiation_index.value_or(-1));
    return fmt::format("Stand-on ({} encounter in progress)", colregs::to_string(s.situation));
}

std::string fixed2(double v) { return std::isinf(v) ? std::string(v > 0 ? "inf" : "-inf") : fmt::format("{:.2f}", v); }

}  // namespace

std::string build_prompt(const risk::EncounterGeometry& g, const risk::RiskBreakdown& r,
                         const colregs::DecisionState& state, const PromptTemplate& tmpl) {
    tmpl.validate();
    for (double v : {g.range, g.bearing, g.relative_heading, g.d_cpa, g.own_speed, g.target_speed, r.risk})
        if (!std::isfinite(v)) throw std::invalid_argument("build_prompt: non-finite telemetry");
    if (std::isnan(g.t_cpa)) throw std::invalid_argument("build_prompt: non-finite telemetry");

    const double rel_deg = wrap_degrees(rad2deg(g.relative_heading) + tmpl.relative_heading_offset_deg);
    const double bearing_deg = rad2deg(g.bearing);
    const char* side = bearing_deg > 0.0 ? "starboard" : (bearing_deg < 0.0 ? "port" : "dead ahead");

    return fmt::format(
        "{}\n\n{}\n\n{}\n\n"
        "CURRENT ENCOUNTER\n"
        "Relative heading (psi_rel): {} deg\n"
        "Risk: {}\n"
        "D_CPA: {} m\n"
        "Range: {} m\n"
        "T_CPA: {} s\n"
        "Target bearing: {} deg ({} side)\n"
        "Own speed: {} m/s, target speed: {} m/s\n"
        "Current manoeuvre status: {}\n",
        tmpl.bearing_map_text, tmpl.rule_constraints_text, tmpl.decision_params_text, fixed2(rel_deg),
        fixed2(r.risk), fixed2(g.d_cpa), fixed2(g.range), fixed2(g.t_cpa), fixed2(bearing_deg), side,
        fixed2(g.own_speed), fixed2(g.target_speed), maneuver_status(state));
}

namespace {

std::string trim_field(std::string_view v) {
    auto junk = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '_' || c == '/'; };
    std::size_t b = 0, e = v.size();
    while (b < e && junk(v[b])) ++b;
    while (e > b && junk(v[e - 1])) --e;
    return std::string(v.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool contains(const std::string& text, const std::regex& re) { return std::regex_search(text, re); }

Situation parse_situation(const std::string& value, const std::string& raw) {
    static const std::regex head_on(R"(\bhead[- ]?on\b)");
    static const std::regex overtaking(R"(\bovertak(e|en|ing)\b)");
    static const std::regex crossing(R"(\bcrossing\b)");
    const std::string v = lower(value);
    std::optional<Situation> found;
    int hits = 0;
    if (contains(v, head_on)) ++hits, found = Situation::head_on;
    if (contains(v, overtaking)) ++hits, found = Situation::overtaking;
    if (contains(v, crossing)) ++hits, found = Situation::crossing;
    if (hits == 0) throw ParseError("unrecognised situation '" + value + "'", raw);
    if (hits > 1) throw ParseError("ambiguous situation '" + value + "'", raw);
    return *found;
}

ManeuverAction parse_action(const std::string& value, const std::string& raw) {
    static const std::regex give_way(R"(\bgive[- ]?way\b)");
    static const std::regex stand_on(R"(\bstand[- ]?on\b)");
    static const std::regex starboard(R"(\bstarboard\b)");
    static const std::regex port(R"(\bport\b)");
    const std::string v = lower(value);
    const bool gw = contains(v, give_way), so = contains(v, stand_on);
    const bool stbd = contains(v, starboard), prt = contains(v, port);
    if (gw == so) throw ParseError("action must name exactly one of give-way / stand-on: '" + value + "'", raw);
    if (so) {
        if (stbd || prt) throw ParseError("contradictory action (stand-on with a turn): '" + value + "'", raw);
        return ManeuverAction::stand_on();
    }
    if (stbd && prt) throw ParseError("contradictory action (both turn directions): '" + value + "'", raw);
    return ManeuverAction::give_way(stbd ? Turn::starboard : (prt ? Turn::port : Turn::none));
}

}  // namespace

ExplainableAction parse_response(const std::string& text) {
    static const std::regex label(R"(\b(situation|action|reasoning)\b[\s*_]*:)", std::regex::icase);

    struct Field {
        std::size_t label_pos = std::string::npos;
        std::size_t value_pos = 0;
    };
    Field fields[3];
    for (auto it = std::sregex_iterator(text.begin(), text.end(), label); it != std::sregex_iterator(); ++it) {
        const std::string name = lower((*it)[1].str());
        const int idx = name == "situation" ? 0 : (name == "action" ? 1 : 2);
        if (fields[idx].label_pos != std::string::npos) continue;
        fields[idx].label_pos = static_cast<std::size_t>(it->position());
        fields[idx].value_pos = static_cast<std::size_t>(it->position() + it->length());
        // Everything after the reasoning label belongs to the reasoning.
        if (idx == 2) break;
    }
    static const char* names[3] = {"SITUATION", "ACTION", "REASONING"};
    for (int i = 0; i < 3; ++i)
        if (fields[i].label_pos == std::string::npos)
            throw ParseError(std::string("missing ") + names[i] + " field", text);

    auto value_of = [&](int i) {
        std::size_t end = text.size();
        for (int j = 0; j < 3; ++j)
            if (fields[j].label_pos > fields[i].label_pos) end = std::min(end, fields[j].label_pos);
        return trim_field(std::string_view(text).substr(fields[i].value_pos, end - fields[i].value_pos));
    };

    ExplainableAction out;
    out.situation = parse_situation(value_of(0), text);
    out.action = parse_action(value_of(1), text);
    out.reasoning = value_of(2);
    if (out.reasoning.empty()) throw ParseError("empty REASONING field", text);
    return out;
}

std::string render_response(const ExplainableAction& a) {
    std::string action;
    if (a.action.role == Role::stand_on)
        action = "Stand-on";
    else if (a.action.turn == Turn::none)
        action = "Give-way";
    else
        action = fmt::format("Give-way, turn {}", colregs::to_string(a.action.turn));
    return fmt::format("SITUATION: {}\nACTION: {}\nREASONING: {}", colregs::to_string(a.situation), action,
                       a.reasoning);
}

colregs::Decision resolve_action(const ExplainableAction& proposed, const risk::EncounterGeometry& geometry,
                                 const risk::RiskBreakdown& risk, const colregs::DecisionState& state,
                                 const colregs::Thresholds& thresholds, std::vector<std::string>& discrepancies) {
    colregs::Decision d;
    d.reasoning = proposed.reasoning;
    ManeuverAction action = proposed.action;
    if (action.role == Role::give_way && action.turn == Turn::none) action.turn = Turn::starboard;

    if (!state.active) {
        d.situation = proposed.situation;
        d.action = action;
        if (action.role == Role::give_way || risk.risk >= thresholds.risk)
            d.phase = Phase::initiate;
        else
            d.phase = Phase::monitor;
    } else if (action.role == Role::stand_on && colregs::release_conditions_met(geometry, risk, thresholds)) {
        d.phase = Phase::release;
        d.situation = state.situation;
        d.action = ManeuverAction::stand_on();
    } else {
        d.phase = Phase::hold;
        d.situation = state.situation;
        d.action = state.action;
        const std::size_t before = discrepancies.size();
        if (proposed.situation != state.situation)
            discrepancies.push_back(fmt::format("model situation {} contradicts latched {}; latched kept",
                                                colregs::to_string(proposed.situation),
                                                colregs::to_string(state.situation)));
        if (action != state.action)
            discrepancies.push_back(fmt::format(
                "model action {} (turn {}) contradicts latched {} (turn {}) while release conditions are not met; "
                "latched kept",
                colregs::to_string(action.role), colregs::to_string(action.turn),
                colregs::to_string(state.action.role), colregs::to_string(state.action.turn)));
        if (discrepancies.size() != before)
            d.reasoning = fmt::format("Consistency guard kept the latched {} decision. Model reasoning: {}",
                                      colregs::to_string(state.action.role), proposed.reasoning);
    }
    d.rule_citation = colregs::rule_citation(d.situation, d.action, d.phase);
    return d;
}

}  // namespace colav::llm
