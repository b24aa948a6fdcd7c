// colav-sim: run, validate and list encounter scenarios.
//
//   colav-sim run --scenario <file|name> [--decider rule|llm|mock] [--seed N] [--out DIR]
//   colav-sim validate --scenario <file|name>
//   colav-sim list-scenarios [--dir DIR]
//
// Exit codes: 0 ok, 2 usage, 3 scenario config, 4 simulation, 5 output i/o, 6 decider setup.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "colav/scenario.hpp"

namespace fs = std::filesystem;
using namespace colav;

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kSimulation = 4, kOutput = 5, kDecider = 6 };

#ifndef COLAV_SCENARIO_DIR
#define COLAV_SCENARIO_DIR "scenarios"
#endif

// A bundled scenario can be named without its directory or extension.
fs::path resolve_scenario(const std::string& arg, const fs::path& dir) {
    if (fs::exists(arg)) return arg;
    for (const fs::path candidate : {dir / arg, dir / (arg + ".json")})
        if (fs::exists(candidate)) return candidate;
    return arg;
}

const char* kind_name(sim::ConfigError::Kind k) {
    switch (k) {
        case sim::ConfigError::Kind::missing_file: return "missing-file";
        case sim::ConfigError::Kind::syntax: return "syntax";
        case sim::ConfigError::Kind::invalid: return "invalid";
    }
    return "?";
}

int config_failure(const sim::ConfigError& e) {
    std::cerr << "colav-sim: config error [" << kind_name(e.kind()) << "]";
    if (!e.field().empty()) std::cerr << " field '" << e.field() << "'";
    std::cerr << ": " << e.what() << '\n';
    return kConfig;
}

void print_summary(const sim::RunResult& r, const sim::ScenarioConfig& c) {
    const auto& m = r.metrics;
    std::cout << fmt::format("scenario              {}\n", c.name)
              << fmt::format("decider               {}\n", sim::to_string(c.decider))
              << fmt::format("min range             {:.2f} m\n", m.min_range)
              << fmt::format("max risk              {:.3f}\n", m.max_risk)
              << fmt::format("give-way initiations  {}\n", m.give_way_initiations)
              << fmt::format("action transitions    {}\n", m.action_transitions)
              << fmt::format("final cross-track     {:.2f} m\n", m.final_cross_track)
              << fmt::format("collision             {}\n", m.collision ? "yes" : "no");
    if (c.decider != sim::DeciderKind::rule)
        std::cout << fmt::format("llm / fallback        {} / {}\n", m.llm_decisions, m.fallback_decisions)
                  << fmt::format("discrepancies         {}\n", m.discrepancies);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encounter simulator for COLREGs decision making on a surface vessel"};
    app.require_subcommand(1);

    fs::path scenario_dir = COLAV_SCENARIO_DIR;

    std::string run_scenario, decider, out_dir, fixture;
    std::optional<std::uint64_t> seed;
    bool concurrent = false;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write trajectory, decisions, summary and plot");
    run_cmd->add_option("--scenario", run_scenario, "Scenario file or bundled scenario name")->required();
    run_cmd->add_option("--decider", decider, "Override the decider")->check(CLI::IsMember({"rule", "llm", "mock"}));
    run_cmd->add_option("--seed", seed, "Override the disturbance seed");
    run_cmd->add_option("--out", out_dir, "Output directory (default: out/<scenario name>)");
    run_cmd->add_option("--fixture", fixture, "Canned responses for the mock decider");
    run_cmd->add_flag("--concurrent", concurrent, "Resolve decisions on a worker thread (not deterministic)");

    std::string validate_scenario;
    auto* validate_cmd = app.add_subcommand("validate", "Load and validate a scenario file");
    validate_cmd->add_option("--scenario", validate_scenario, "Scenario file or bundled scenario name")->required();

    auto* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenarios");
    list_cmd->add_option("--dir", scenario_dir, "Scenario directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (*list_cmd) {
        std::vector<fs::path> files;
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(scenario_dir, ec))
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        if (ec) {
            std::cerr << "colav-sim: cannot read " << scenario_dir << ": " << ec.message() << '\n';
            return kConfig;
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            try {
                const auto c = sim::load_scenario(f);
                std::cout << fmt::format("{:<20} {}\n", f.stem().string(), c.description);
            } catch (const sim::ConfigError& e) {
                std::cout << fmt::format("{:<20} (invalid: {})\n", f.stem().string(), e.what());
            }
        }
        return kOk;
    }

    if (*validate_cmd) {
        try {
            const auto c = sim::load_scenario(resolve_scenario(validate_scenario, scenario_dir));
            std::cout << fmt::format("ok: {} ({} control steps, {} decision cycles, decider {})\n", c.name,
                                     c.control_steps(), c.control_steps() / c.steps_per_decision() + 1,
                                     sim::to_string(c.decider));
            return kOk;
        } catch (const sim::ConfigError& e) {
            return config_failure(e);
        }
    }

    sim::ScenarioConfig config;
    try {
        config = sim::load_scenario(resolve_scenario(run_scenario, scenario_dir));
        if (!decider.empty()) config.decider = sim::parse_decider_kind(decider);
        if (seed) config.seed = *seed;
        if (!fixture.empty()) config.mock_fixture = fixture;
        if (concurrent) config.concurrent_decisions = true;
        config.validate();
    } catch (const sim::ConfigError& e) {
        return config_failure(e);
    }

    std::unique_ptr<llm::Decider> dec;
    try {
        dec = sim::make_decider(config);
    } catch (const std::exception& e) {
        std::cerr << "colav-sim: decider error: " << e.what() << '\n';
        return kDecider;
    }

    sim::RunResult result;
    try {
        result = sim::run(config, *dec);
    } catch (const sim::SimulationError& e) {
        std::cerr << "colav-sim: simulation error: " << e.what() << '\n';
        return kSimulation;
    }

    const fs::path out = out_dir.empty() ? fs::path("out") / config.name : fs::path(out_dir);
    try {
        sim::emit_outputs(result, config, out);
    } catch (const std::exception& e) {
        std::cerr << "colav-sim: output error: " << e.what() << '\n';
        return kOutput;
    }
    print_summary(result, config);
    std::cout << "outputs written to " << out.string() << '\n';
    return kOk;
}
