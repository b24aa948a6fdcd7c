#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "colav/scenario.hpp"

namespace colav::sim {

namespace {

std::string f6(double v) { return fmt::format("{:.6f}", v); }

std::string f2(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.2f}", v);
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
    out << "time,own_x,own_y,own_heading,own_yaw_rate,own_speed,own_disturbance,"
           "target_x,target_y,target_heading,target_speed,wp_index,"
           "psi_d,psi_los,psi_cte,psi_colav,u_c,cross_track,range,risk\n";
    for (const auto& r : log.rows) {
        out << f6(r.time) << ',' << f6(r.own.x) << ',' << f6(r.own.y) << ',' << f6(r.own.heading) << ','
            << f6(r.own.yaw_rate) << ',' << f6(r.own.speed) << ',' << f6(r.own.disturbance) << ','
            << f6(r.target.x) << ',' << f6(r.target.y) << ',' << f6(r.target.heading) << ','
            << f6(r.target.speed) << ',' << r.wp_index << ',' << f6(r.psi_d) << ',' << f6(r.psi_los) << ','
            << f6(r.psi_cte) << ',' << f6(r.psi_colav) << ',' << f6(r.u_c) << ',' << f6(r.cross_track) << ','
            << f6(r.range) << ',' << f6(r.risk) << '\n';
    }
}

void write_decisions_csv(std::ostream& out, const TrajectoryLog& log) {
    out << "cycle,time,phase,situation,action,turn,risk,range,d_cpa,t_cpa,rule,reasoning\n";
    for (const auto& d : log.decisions) {
        const std::string phase = d.reused ? "reused" : std::string(colregs::to_string(d.decision.phase));
        out << d.cycle << ',' << f2(d.time) << ',' << phase << ',' << colregs::to_string(d.decision.situation)
            << ',' << colregs::display_name(d.decision.action.role) << ','
            << colregs::to_string(d.decision.action.turn) << ',' << f2(d.risk.risk) << ','
            << f2(d.geometry.range) << ',' << f2(d.geometry.d_cpa) << ',' << f2(d.geometry.t_cpa) << ','
            << csv_quote(d.decision.rule_citation) << ',' << csv_quote(d.decision.reasoning) << '\n';
    }
}

nlohmann::json summary_json(const RunResult& result, const ScenarioConfig& config) {
    using nlohmann::json;
    const auto& m = result.metrics;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };

    json discrepancies = json::array();
    json errors = json::array();
    for (const auto& d : result.log.decisions) {
        for (const auto& msg : d.discrepancies) discrepancies.push_back({{"cycle", d.cycle}, {"message", msg}});
        for (const auto& msg : d.errors) errors.push_back({{"cycle", d.cycle}, {"message", msg}});
    }

    return {
        {"scenario", config.name},
        {"decider", to_string(config.decider)},
        {"seed", config.seed},
        {"duration", config.duration},
        {"control_steps", result.log.rows.size()},
        {"decision_cycles", result.log.decisions.size()},
        {"min_range", m.min_range},
        {"min_dcpa_during_encounter", opt(m.min_dcpa_during_encounter)},
        {"max_risk", m.max_risk},
        {"give_way_initiations", m.give_way_initiations},
        {"action_transitions", m.action_transitions},
        {"first_give_way_turn", colregs::to_string(m.first_give_way_turn)},
        {"final_cross_track", m.final_cross_track},
        {"max_track_deviation_during_encounter_deg", opt(m.max_track_deviation_during_encounter_deg)},
        {"collision", m.collision},
        {"llm_decisions", m.llm_decisions},
        {"fallback_decisions", m.fallback_decisions},
        {"discrepancies", std::move(discrepancies)},
        {"decider_errors", std::move(errors)},
    };
}

std::string risk_color(double risk) {
    // Green -> yellow -> red in ten bins; bin 0 is the zero-risk colour.
    static const char* kBins[10] = {kZeroRiskColor, "#66bd63", "#a6d96a", "#d9ef8b", "#ffffbf",
                                    "#fee08b",      "#fdae61", "#f46d43", "#d73027", "#a50026"};
    const double r = std::clamp(std::isfinite(risk) ? risk : 0.0, 0.0, 1.0);
    return kBins[std::min(9, static_cast<int>(r * 10.0))];
}

std::string render_svg(const TrajectoryLog& log, const ScenarioConfig& config) {
    constexpr double kSize = 800.0, kMargin = 40.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    auto extend = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const auto& r : log.rows) {
        extend(r.own.x, r.own.y);
        extend(r.target.x, r.target.y);
    }
    for (const auto& w : config.own_route.waypoints()) extend(w.x, w.y);
    const double span = std::max({xmax - xmin, ymax - ymin, 1.0});
    const double scale = (kSize - 2 * kMargin) / span;
    // North up, East right.
    auto sx = [&](double y) { return kMargin + (y - ymin) * scale; };
    auto sy = [&](double x) { return kMargin + (xmax - x) * scale; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{0:.0f}\" viewBox=\"0 0 {0:.0f} "
        "{0:.0f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        "<text x=\"{1:.0f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{2}</text>\n",
        kSize, kMargin, config.name);

    const std::size_t stride = std::max<std::size_t>(1, log.rows.size() / 2000);

    // Own track.
    std::string pts;
    for (std::size_t i = 0; i < log.rows.size(); i += stride)
        pts += fmt::format("{:.1f},{:.1f} ", sx(log.rows[i].own.y), sy(log.rows[i].own.x));
    if (!log.rows.empty())
        pts += fmt::format("{:.1f},{:.1f}", sx(log.rows.back().own.y), sy(log.rows.back().own.x));
    svg += fmt::format("<polyline id=\"own\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                       kOwnTrackColor, pts);

    // Target track, one polyline per run of equal colour.
    std::size_t i = 0;
    while (i + 1 < log.rows.size()) {
        const std::string color = risk_color(log.rows[i].risk);
        std::string seg = fmt::format("{:.1f},{:.1f}", sx(log.rows[i].target.y), sy(log.rows[i].target.x));
        std::size_t j = i;
        while (j + 1 < log.rows.size()) {
            j = std::min(j + stride, log.rows.size() - 1);
            seg += fmt::format(" {:.1f},{:.1f}", sx(log.rows[j].target.y), sy(log.rows[j].target.x));
            if (risk_color(log.rows[j].risk) != color) break;
        }
        svg += fmt::format(
            "<polyline class=\"target\" fill=\"none\" stroke=\"{}\" stroke-width=\"3\" points=\"{}\"/>\n", color,
            seg);
        i = j;
    }

    const auto& wps = config.own_route.waypoints();
    for (std::size_t w = 0; w < wps.size(); ++w)
        svg += fmt::format(
            "<circle class=\"waypoint\" cx=\"{0:.1f}\" cy=\"{1:.1f}\" r=\"5\" fill=\"none\" stroke=\"#1f78b4\" "
            "stroke-width=\"2\"/>\n<text x=\"{2:.1f}\" y=\"{3:.1f}\" font-family=\"sans-serif\" "
            "font-size=\"11\">WP{4}</text>\n",
            sx(wps[w].y), sy(wps[w].x), sx(wps[w].y) + 7, sy(wps[w].x) - 7, w);

    svg += "</svg>\n";
    return svg;
}

void emit_outputs(const RunResult& result, const ScenarioConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    auto write = [&](const char* name, auto&& body) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("error while writing " + path.string());
    };
    write("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, result.log); });
    write("decisions.csv", [&](std::ostream& o) { write_decisions_csv(o, result.log); });
    write("summary.json", [&](std::ostream& o) { o << summary_json(result, config).dump(2) << '\n'; });
    write("trajectory.svg", [&](std::ostream& o) { o << render_svg(result.log, config); });
}

}  // namespace colav::sim
