#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace {

const std::string kExe = COLAV_SIM_EXE;
const std::filesystem::path kDir = COLAV_SCENARIO_DIR;

int sim(const std::string& args) {
    const std::string cmd = kExe + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("successful commands exit 0") {
    CHECK(sim("validate --scenario " + (kDir / "head_on.json").string()) == 0);
    CHECK(sim("validate --scenario overtaking") == 0);
    CHECK(sim("list-scenarios") == 0);
    const auto out = temp("colav_cli_run");
    std::filesystem::remove_all(out);
    CHECK(sim("run --scenario crossing_standon --out " + out.string()) == 0);
    CHECK(std::filesystem::exists(out / "trajectory.svg"));
}

TEST_CASE("failure categories have distinct exit codes") {
    CHECK(sim("") == 2);
    CHECK(sim("run") == 2);
    CHECK(sim("run --scenario head_on --decider oracle") == 2);
    CHECK(sim("validate --scenario /nonexistent.json") == 3);

    const auto bad = temp("colav_cli_bad.json");
    std::ofstream(bad) << R"({"name": "x", "duration": 10, "dt_decision": 0.015,
        "own": {"route": [[0, 0], [100, 0]]}, "target": {"x": 1, "y": 1, "heading_deg": 0, "speed": 1}})";
    CHECK(sim("validate --scenario " + bad.string()) == 3);

    CHECK(sim("run --scenario head_on --decider mock --fixture /nonexistent/f.json --out " +
              temp("colav_cli_x").string()) == 6);

    const auto blow = temp("colav_cli_blow.json");
    std::ofstream(blow) << R"({"name": "x", "duration": 10, "vessel": {"t_psi": 1e-6},
        "own": {"route": [[0, 0], [200, 0], [200, 5000]]}, "target": {"x": 3000, "y": 0, "heading_deg": 0, "speed": 1}})";
    CHECK(sim("run --scenario " + blow.string() + " --out " + temp("colav_cli_y").string()) == 4);

    const auto blocker = temp("colav_cli_blocker");
    std::ofstream(blocker) << "x";
    CHECK(sim("run --scenario head_on --out " + (blocker / "sub").string()) == 5);
}
