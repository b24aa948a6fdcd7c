#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "colav/colregs.hpp"
#include "colav/controller.hpp"
#include "colav/decider.hpp"
#include "colav/dynamics.hpp"
#include "colav/guidance.hpp"
#include "colav/llm.hpp"
#include "colav/risk.hpp"

namespace colav::sim {

enum class DeciderKind { rule, llm, mock };

std::string_view to_string(DeciderKind k);
/// Throws std::invalid_argument for anything but "rule", "llm" or "mock".
DeciderKind parse_decider_kind(const std::string& s);

/// Problems loading a scenario. `field` names the offending JSON path when
/// there is one.
class ConfigError : public std::runtime_error {
public:
    enum class Kind { missing_file, syntax, invalid };

    ConfigError(Kind kind, std::string field, const std::string& message)
        : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

    Kind kind() const { return kind_; }
    const std::string& field() const { return field_; }

private:
    Kind kind_;
    std::string field_;
};

/// The closed loop hit a non-finite state or a degenerate geometry.
class SimulationError : public std::runtime_error {
public:
    SimulationError(long step, const std::string& message)
        : std::runtime_error("step " + std::to_string(step) + ": " + message), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string description;

    guidance::Route own_route{{{0.0, 0.0}, {1000.0, 0.0}}};
    double own_speed_cmd = 16.0;  // [m/s]
    // Target keeps course and speed; only x, y, heading and speed are used.
    dynamics::VesselState target_initial;

    dynamics::VesselParams vessel_params;  // thrust_cmd is derived from own_speed_cmd
    guidance::GuidanceParams guidance;
    control::ControllerGains gains;
    colregs::Thresholds thresholds;
    risk::RiskKnees zmf_knees;

    DeciderKind decider = DeciderKind::rule;
    llm::LlmConfig llm;
    std::filesystem::path mock_fixture;  // empty: the mock echoes the rule decider

    std::uint64_t seed = 0;
    double duration = 0.0;     // [s]
    double dt_control = 0.01;  // [s]
    double dt_decision = 1.0;  // [s]
    // Resolve model queries on a worker thread while control keeps stepping.
    // Not deterministic; off for every bundled scenario.
    bool concurrent_decisions = false;

    long control_steps() const;
    long steps_per_decision() const;

    /// Throws ConfigError(Kind::invalid) naming the offending field.
    void validate() const;
};

/// Reads and validates a scenario file. Omitted optional fields keep their
/// defaults. Relative fixture paths resolve against the file's directory.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Same, from an already parsed document.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// One row per control step.
struct TrajectoryRow {
    double time = 0.0;
    dynamics::VesselState own;
    dynamics::VesselState target;
    std::size_t wp_index = 1;
    double psi_d = 0.0;
    double psi_los = 0.0;
    double psi_cte = 0.0;
    double psi_colav = 0.0;
    double u_c = 0.0;
    double cross_track = 0.0;
    double range = 0.0;
    double risk = 0.0;
};

/// One row per decision cycle.
struct DecisionRecord {
    long cycle = 0;
    double time = 0.0;
    risk::EncounterGeometry geometry;
    risk::RiskBreakdown risk;
    colregs::Decision decision;
    colregs::DecisionState state_after;
    llm::Source source = llm::Source::rule;
    bool reused = false;  // concurrent mode: no fresh answer this cycle
    std::vector<std::string> discrepancies;
    std::vector<std::string> errors;
    std::string raw_response;
};

struct TrajectoryLog {
    std::vector<TrajectoryRow> rows;
    std::vector<DecisionRecord> decisions;
};

struct SummaryMetrics {
    double min_range = 0.0;
    std::optional<double> min_dcpa_during_encounter;
    double max_risk = 0.0;
    int give_way_initiations = 0;
    int action_transitions = 0;
    double final_cross_track = 0.0;
    bool collision = false;
    Turn first_give_way_turn = Turn::none;
    std::optional<double> max_track_deviation_during_encounter_deg;
    int llm_decisions = 0;
    int fallback_decisions = 0;
    int discrepancies = 0;
};

struct RunResult {
    TrajectoryLog log;
    SummaryMetrics metrics;
};

inline constexpr double kCollisionRange = 50.0;  // [m]

std::unique_ptr<llm::Decider> make_decider(const ScenarioConfig& config);

/// Closed loop with the decider the config asks for.
RunResult run(const ScenarioConfig& config);

/// Closed loop with a caller-supplied decider. Throws SimulationError.
RunResult run(const ScenarioConfig& config, llm::Decider& decider);

// Output writers. Column lists are documented in docs/outputs.md.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);
void write_decisions_csv(std::ostream& out, const TrajectoryLog& log);
nlohmann::json summary_json(const RunResult& result, const ScenarioConfig& config);
std::string render_svg(const TrajectoryLog& log, const ScenarioConfig& config);

inline constexpr const char* kOwnTrackColor = "#000000";
inline constexpr const char* kZeroRiskColor = "#1a9850";
/// Colour of the target track for a risk value.
std::string risk_color(double risk);

/// Writes trajectory.csv, decisions.csv, summary.json and trajectory.svg.
/// Throws std::runtime_error when the directory cannot be created or written.
void emit_outputs(const RunResult& result, const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace colav::sim
