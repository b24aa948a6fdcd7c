#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include "colav/scenario.hpp"

namespace colav::sim {

namespace {

/// Standard normal samples from mt19937_64 via Box-Muller. Written out rather
/// than std::normal_distribution so the stream is identical on every standard
/// library.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return mag * std::cos(kTwoPi * u2);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Runs decisions on a worker thread. The control loop submits inputs at a
/// decision boundary and later collects the finished outcome; the handoff is a
/// locked swap of a complete DeciderOutcome.
class AsyncDecider {
public:
    explicit AsyncDecider(llm::Decider& inner)
        : inner_(inner), worker_([this](std::stop_token st) { loop(st); }) {}

    ~AsyncDecider() {
        {
            std::lock_guard lock(mutex_);
            worker_.request_stop();
        }
        cv_.notify_all();
    }

    bool submit(const llm::DecisionInputs& in) {
        std::lock_guard lock(mutex_);
        if (pending_ || busy_) return false;
        pending_ = in;
        cv_.notify_all();
        return true;
    }

    std::optional<std::pair<llm::DecisionInputs, llm::DeciderOutcome>> take() {
        std::lock_guard lock(mutex_);
        auto out = std::move(done_);
        done_.reset();
        return out;
    }

private:
    void loop(std::stop_token st) {
        while (true) {
            llm::DecisionInputs in;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return st.stop_requested() || pending_.has_value(); });
                if (st.stop_requested()) return;
                in = *pending_;
                pending_.reset();
                busy_ = true;
            }
            llm::DeciderOutcome out = inner_.decide(in);
            std::lock_guard lock(mutex_);
            done_.emplace(in, std::move(out));
            busy_ = false;
        }
    }

    llm::Decider& inner_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::optional<llm::DecisionInputs> pending_;
    std::optional<std::pair<llm::DecisionInputs, llm::DeciderOutcome>> done_;
    bool busy_ = false;
    std::jthread worker_;
};

int effective_action(const colregs::DecisionState& s) {
    if (!s.active) return 0;
    return s.action.role == colregs::Role::give_way ? 1 : 2;
}

dynamics::VesselState propagate_target(const dynamics::VesselState& initial, double t) {
    dynamics::VesselState s = initial;
    const Vec2 p = Vec2{initial.x, initial.y} + (initial.speed * t) * heading_vector(initial.heading);
    s.x = p.x;
    s.y = p.y;
    return s;
}

}  // namespace

std::unique_ptr<llm::Decider> make_decider(const ScenarioConfig& config) {
    const auto tmpl = llm::PromptTemplate::standard(config.thresholds);
    switch (config.decider) {
        case DeciderKind::rule: return std::make_unique<llm::RuleDecider>();
        case DeciderKind::mock: {
            std::unique_ptr<llm::ChatTransport> transport;
            if (config.mock_fixture.empty())
                transport = llm::make_rule_echo_transport();
            else
                transport = llm::FixtureTransport::from_file(config.mock_fixture);
            return std::make_unique<llm::LlmDecider>(tmpl, config.llm, std::move(transport));
        }
        case DeciderKind::llm: {
            const char* key = std::getenv(config.llm.api_key_env_var.c_str());
            return std::make_unique<llm::LlmDecider>(
                tmpl, config.llm, std::make_unique<llm::HttpChatTransport>(config.llm.endpoint_url, key ? key : ""));
        }
    }
    throw std::invalid_argument("unknown decider kind");
}

RunResult run(const ScenarioConfig& config) {
    auto decider = make_decider(config);
    return run(config, *decider);
}

RunResult run(const ScenarioConfig& config, llm::Decider& decider) {
    config.validate();
    const long n_steps = config.control_steps();
    const long per_decision = config.steps_per_decision();
    const double dt = config.dt_control;

    RunResult result;
    auto& log = result.log;
    auto& m = result.metrics;
    log.rows.reserve(static_cast<std::size_t>(n_steps) + 1);

    guidance::Route route = config.own_route;
    const auto& wps = route.waypoints();
    dynamics::VesselState own;
    own.x = wps[0].x;
    own.y = wps[0].y;
    own.heading = std::atan2(wps[1].y - wps[0].y, wps[1].x - wps[0].x);
    own.speed = config.own_speed_cmd;
    const dynamics::VesselState target0 = config.target_initial;
    dynamics::VesselState target = target0;

    GaussianStream noise(config.seed);
    colregs::DecisionState state;
    std::optional<AsyncDecider> async;
    if (config.concurrent_decisions) async.emplace(decider);

    m.min_range = std::numeric_limits<double>::infinity();
    int last_action = 0;

    auto apply = [&](DecisionRecord rec, const llm::DeciderOutcome& out, long apply_cycle) {
        rec.decision = out.decision;
        rec.source = out.source;
        rec.discrepancies = out.discrepancies;
        rec.errors = out.errors;
        rec.raw_response = out.raw_response;
        auto upd = colregs::update_state(state, out.decision, apply_cycle);
        if (upd.discrepancy) rec.discrepancies.push_back(*upd.discrepancy);
        if (!upd.discrepancy && out.decision.phase == colregs::Phase::initiate &&
            out.decision.action.role == colregs::Role::give_way) {
            if (m.give_way_initiations == 0) m.first_give_way_turn = out.decision.action.turn;
            ++m.give_way_initiations;
        }
        state = upd.state;
        rec.state_after = state;
        return rec;
    };

    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Vec2 pos{own.x, own.y};
        route = guidance::advance_waypoint(route, pos, config.guidance.acceptance_radius);

        risk::EncounterGeometry geo;
        try {
            geo = risk::relative_geometry(own, target);
        } catch (const std::invalid_argument& e) {
            throw SimulationError(k, e.what());
        }
        const risk::RiskBreakdown rk = risk::risk_index(geo, config.zmf_knees);

        if (k % per_decision == 0) {
            const long cycle = k / per_decision;
            DecisionRecord rec;
            rec.cycle = cycle;
            rec.time = t;
            rec.geometry = geo;
            rec.risk = rk;
            if (!async) {
                rec = apply(std::move(rec), decider.decide({geo, rk, state, config.thresholds, cycle}), cycle);
            } else {
                // Concurrent mode: apply whatever finished since the last
                // boundary, then queue this cycle's query.
                if (auto done = async->take()) {
                    rec = apply(std::move(rec), done->second, cycle);
                } else {
                    rec.reused = true;
                    rec.decision = log.decisions.empty() ? colregs::rule_decide(geo, rk, state, config.thresholds)
                                                         : log.decisions.back().decision;
                    rec.state_after = state;
                }
                async->submit({geo, rk, state, config.thresholds, cycle});
            }
            m.discrepancies += static_cast<int>(rec.discrepancies.size());
            if (!rec.reused) {
                if (rec.source == llm::Source::llm) ++m.llm_decisions;
                if (rec.source == llm::Source::fallback) ++m.fallback_decisions;
            }
            m.max_risk = std::max(m.max_risk, rk.risk);
            if (state.active)
                m.min_dcpa_during_encounter = std::min(m.min_dcpa_during_encounter.value_or(geo.d_cpa), geo.d_cpa);
            const int action = effective_action(state);
            if (action != last_action) ++m.action_transitions;
            last_action = action;
            log.decisions.push_back(std::move(rec));
        }

        const Turn turn = colregs::steering_turn(state);
        const auto& wp = route.active();
        const auto frame = guidance::path_frame(pos, route.previous(), wp);
        const bool arrived = route.at_final() && std::hypot(wp.x - pos.x, wp.y - pos.y) < config.guidance.acceptance_radius;
        double los = frame.leg_heading;
        if (!arrived) {
            try {
                los = guidance::los_heading(pos, wp);
            } catch (const guidance::WaypointReached&) {
            }
        }
        const double cte = guidance::cte_correction(frame, config.guidance.mu);
        const double colav = guidance::colav_offset(geo.range, geo.bearing, turn, config.guidance);
        const double psi_d = guidance::desired_heading(los, cte, colav);
        const double u_c = control::control(psi_d, own.heading, own.yaw_rate, config.gains, config.vessel_params.u_c_max);

        TrajectoryRow row;
        row.time = t;
        row.own = own;
        row.target = target;
        row.wp_index = route.active_index();
        row.psi_d = psi_d;
        row.psi_los = los;
        row.psi_cte = cte;
        row.psi_colav = colav;
        row.u_c = u_c;
        row.cross_track = frame.cross_track;
        row.range = geo.range;
        row.risk = rk.risk;
        log.rows.push_back(row);

        m.min_range = std::min(m.min_range, geo.range);
        if (state.active) {
            const double dev = std::abs(rad2deg(wrap_angle(own.heading - frame.leg_heading)));
            m.max_track_deviation_during_encounter_deg =
                std::max(m.max_track_deviation_during_encounter_deg.value_or(0.0), dev);
        }
        m.final_cross_track = frame.cross_track;

        if (k == n_steps) break;
        const double w = config.vessel_params.sigma_omega * noise.next();
        try {
            own = dynamics::step(own, u_c, config.vessel_params, dt, w);
        } catch (const dynamics::NumericalError& e) {
            throw SimulationError(k, e.what());
        }
        target = propagate_target(target0, static_cast<double>(k + 1) * dt);
    }

    m.collision = m.min_range < kCollisionRange;
    return result;
}

}  // namespace colav::sim
