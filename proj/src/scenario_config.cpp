#include <cmath>
#include <fstream>
#include <set>

#include "colav/scenario.hpp"

namespace colav::sim {

using nlohmann::json;

std::string_view to_string(DeciderKind k) {
    switch (k) {
        case DeciderKind::rule: return "rule";
        case DeciderKind::llm: return "llm";
        case DeciderKind::mock: return "mock";
    }
    return "?";
}

DeciderKind parse_decider_kind(const std::string& s) {
    if (s == "rule") return DeciderKind::rule;
    if (s == "llm") return DeciderKind::llm;
    if (s == "mock") return DeciderKind::mock;
    throw std::invalid_argument("unknown decider '" + s + "' (expected rule, llm or mock)");
}

long ScenarioConfig::control_steps() const { return std::lround(duration / dt_control); }

long ScenarioConfig::steps_per_decision() const { return std::lround(dt_decision / dt_control); }

namespace {

ConfigError invalid(const std::string& field, const std::string& msg) {
    return ConfigError(ConfigError::Kind::invalid, field, field + ": " + msg);
}

// Re-throws a module validate() failure as a ConfigError; the module messages
// already start with the field path.
template <typename F>
void checked(F&& f) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        throw ConfigError(ConfigError::Kind::invalid, msg.substr(0, msg.find(':')), msg);
    }
}

bool nearly_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

/// Typed access to one JSON object, with every key checked against a known set.
class Reader {
public:
    Reader(const json& obj, std::string path, std::set<std::string> known) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw invalid(path_.empty() ? "<root>" : path_, "must be an object");
        for (const auto& [key, _] : obj_.items())
            if (!known.count(key)) throw invalid(field(key), "unknown field");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return obj_.contains(key); }
    const json& at(const std::string& key) const { return obj_.at(key); }

    void number(const std::string& key, double& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number()) throw invalid(field(key), "must be a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw invalid(field(key), "must be finite");
    }

    double required_number(const std::string& key) const {
        if (!has(key)) throw invalid(field(key), "is required");
        double v = 0.0;
        number(key, v);
        return v;
    }

    void integer(const std::string& key, int& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_integer()) throw invalid(field(key), "must be an integer");
        out = v.get<int>();
    }

    void text(const std::string& key, std::string& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_string()) throw invalid(field(key), "must be a string");
        out = v.get<std::string>();
    }

    void boolean(const std::string& key, bool& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_boolean()) throw invalid(field(key), "must be true or false");
        out = v.get<bool>();
    }

    void knees(const std::string& key, risk::ZmfKnees& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw invalid(field(key), "must be a two-number array [a, b]");
        out = {v[0].get<double>(), v[1].get<double>()};
        try {
            out.validate();
        } catch (const std::invalid_argument& e) {
            throw invalid(field(key), e.what());
        }
    }

private:
    const json& obj_;
    std::string path_;
};

guidance::Route parse_route(const json& v) {
    if (!v.is_array()) throw invalid("own.route", "must be an array of [x, y] pairs");
    std::vector<guidance::Waypoint> wps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw invalid("own.route[" + std::to_string(i) + "]", "must be a two-number array [x, y]");
        wps.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
        return guidance::Route(std::move(wps));
    } catch (const std::invalid_argument& e) {
        throw invalid("own.route", e.what());
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    if (name.empty()) throw invalid("name", "must be non-empty");
    if (!std::isfinite(own_speed_cmd) || own_speed_cmd < 0.0) throw invalid("own.speed", "must be >= 0");
    for (double v : {target_initial.x, target_initial.y, target_initial.heading, target_initial.speed})
        if (!std::isfinite(v)) throw invalid("target", "must be finite");
    if (target_initial.speed < 0.0) throw invalid("target.speed", "must be >= 0");
    checked([&] { vessel_params.validate(); });
    if (vessel_params.k_u == 0.0 && own_speed_cmd != 0.0)
        throw invalid("vessel.k_u", "must be non-zero to reach the commanded speed");
    checked([&] { guidance.validate(); });
    checked([&] { gains.validate(); });
    checked([&] { thresholds.validate(); });
    checked([&] { zmf_knees.validate(); });
    if (decider != DeciderKind::rule) checked([&] { llm.validate(); });

    if (!std::isfinite(duration) || !(duration >= 0.0)) throw invalid("duration", "must be finite and >= 0");
    if (!std::isfinite(dt_control) || !(dt_control > 0.0)) throw invalid("dt_control", "must be > 0");
    if (!std::isfinite(dt_decision) || !(dt_decision > 0.0)) throw invalid("dt_decision", "must be > 0");
    const double ratio = dt_decision / dt_control;
    if (ratio < 1.0 - 1e-9 || !nearly_integer(ratio))
        throw invalid("dt_decision", "must be an integer multiple of dt_control");
    if (!nearly_integer(duration / dt_control))
        throw invalid("duration", "must be an integer multiple of dt_control");
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    ScenarioConfig c;
    const Reader root(doc, "",
                      {"name", "description", "duration", "dt_control", "dt_decision", "seed", "decider", "own",
                       "target", "vessel", "guidance", "controller", "thresholds", "risk_knees", "llm",
                       "mock_fixture", "concurrent_decisions"});
    root.text("name", c.name);
    root.text("description", c.description);
    c.duration = root.required_number("duration");
    root.number("dt_control", c.dt_control);
    root.number("dt_decision", c.dt_decision);
    if (root.has("seed")) {
        const auto& s = root.at("seed");
        if (!s.is_number_unsigned()) throw invalid("seed", "must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (root.has("decider")) {
        std::string d;
        root.text("decider", d);
        try {
            c.decider = parse_decider_kind(d);
        } catch (const std::invalid_argument& e) {
            throw invalid("decider", e.what());
        }
    }
    root.boolean("concurrent_decisions", c.concurrent_decisions);

    if (!root.has("own")) throw invalid("own", "is required");
    const Reader own(root.at("own"), "own", {"route", "speed"});
    if (!own.has("route")) throw invalid("own.route", "is required");
    c.own_route = parse_route(own.at("route"));
    own.number("speed", c.own_speed_cmd);

    if (!root.has("target")) throw invalid("target", "is required");
    const Reader tgt(root.at("target"), "target", {"x", "y", "heading_deg", "speed"});
    c.target_initial.x = tgt.required_number("x");
    c.target_initial.y = tgt.required_number("y");
    c.target_initial.heading = wrap_angle(deg2rad(tgt.required_number("heading_deg")));
    c.target_initial.speed = tgt.required_number("speed");

    if (root.has("vessel")) {
        const Reader v(root.at("vessel"), "vessel", {"t_psi", "k_psi", "t_u", "k_u", "t_d", "sigma_omega", "u_c_max"});
        v.number("t_psi", c.vessel_params.t_psi);
        v.number("k_psi", c.vessel_params.k_psi);
        v.number("t_u", c.vessel_params.t_u);
        v.number("k_u", c.vessel_params.k_u);
        v.number("t_d", c.vessel_params.t_d);
        v.number("sigma_omega", c.vessel_params.sigma_omega);
        v.number("u_c_max", c.vessel_params.u_c_max);
    }
    if (c.vessel_params.k_u != 0.0) c.vessel_params.thrust_cmd = c.own_speed_cmd / c.vessel_params.k_u;

    if (root.has("guidance")) {
        const Reader g(root.at("guidance"), "guidance", {"mu", "k_colav", "range_knees", "acceptance_radius"});
        g.number("mu", c.guidance.mu);
        g.number("k_colav", c.guidance.k_colav);
        g.knees("range_knees", c.guidance.range_knees);
        g.number("acceptance_radius", c.guidance.acceptance_radius);
    }
    if (root.has("controller")) {
        const Reader g(root.at("controller"), "controller", {"kp", "kd"});
        g.number("kp", c.gains.kp);
        g.number("kd", c.gains.kd);
    }
    if (root.has("thresholds")) {
        const Reader t(root.at("thresholds"), "thresholds",
                       {"risk", "range", "d_cpa", "t_cpa", "hysteresis_risk", "relative_heading_offset_deg"});
        t.number("risk", c.thresholds.risk);
        t.number("range", c.thresholds.range);
        t.number("d_cpa", c.thresholds.d_cpa);
        t.number("t_cpa", c.thresholds.t_cpa);
        t.number("hysteresis_risk", c.thresholds.hysteresis_risk);
        t.number("relative_heading_offset_deg", c.thresholds.relative_heading_offset_deg);
    }
    if (root.has("risk_knees")) {
        const Reader k(root.at("risk_knees"), "risk_knees", {"d_cpa", "t_cpa", "range"});
        k.knees("d_cpa", c.zmf_knees.d_cpa);
        k.knees("t_cpa", c.zmf_knees.t_cpa);
        k.knees("range", c.zmf_knees.range);
    }
    if (root.has("llm")) {
        const Reader l(root.at("llm"), "llm",
                       {"endpoint_url", "model_name", "temperature", "timeout", "max_retries", "api_key_env_var"});
        l.text("endpoint_url", c.llm.endpoint_url);
        l.text("model_name", c.llm.model_name);
        l.number("temperature", c.llm.temperature);
        l.number("timeout", c.llm.timeout_s);
        l.integer("max_retries", c.llm.max_retries);
        l.text("api_key_env_var", c.llm.api_key_env_var);
    }
    if (root.has("mock_fixture")) {
        std::string f;
        root.text("mock_fixture", f);
        c.mock_fixture = f.empty() ? std::filesystem::path{} : base_dir / f;
    }

    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Kind::missing_file, "", "cannot open scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(ConfigError::Kind::syntax, "", path.string() + ": malformed JSON: " + e.what());
    }
    return parse_scenario(doc, path.parent_path());
}

}  // namespace colav::sim
