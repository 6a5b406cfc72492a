// End-to-end checks of the command-line binary: exit codes, CSV shapes, and
// strict config rejection. Paths are injected by the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef CNOTSIM_BINARY
#error "CNOTSIM_BINARY must be defined by the build system"
#endif
#ifndef CNOTSIM_TMPDIR
#error "CNOTSIM_TMPDIR must be defined by the build system"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CNOTSIM_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) {
    return std::string(CNOTSIM_TMPDIR) + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string first_line(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

int count_lines(const std::string& path) {
    std::ifstream in(path);
    int n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

const char* kDeviceJson = R"({
  "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115}
})";

}  // namespace

TEST_CASE("missing config file exits with the config code") {
    CHECK(run("spectrum --config /nonexistent.json --out " + tmp_path("x.csv")) == 2);
}

TEST_CASE("unknown config keys are rejected") {
    const std::string cfg = tmp_path("bad_key.json");
    write_file(cfg, R"({
      "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115,
                 "surprise": 1.0},
      "epsilon_grid": {"min": 6.0, "max": 7.0, "points": 3}
    })");
    CHECK(run("spectrum --config " + cfg + " --out " + tmp_path("x.csv")) == 2);
}

TEST_CASE("spectrum command writes the labeled-branch csv") {
    const std::string cfg = tmp_path("spectrum.json");
    write_file(cfg, R"({
      "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115},
      "epsilon_grid": {"min": 5.8, "max": 7.4, "points": 9}
    })");
    const std::string out = tmp_path("spectrum.csv");
    CHECK(run("spectrum --config " + cfg + " --out " + out) == 0);
    CHECK(first_line(out) == "epsilon_ghz,E00,E01,E10,E02,E11,E20,E21");
    CHECK(count_lines(out) == 10);  // header + 9 grid points
}

TEST_CASE("sensitivity command writes the sweep csv") {
    const std::string cfg = tmp_path("sens.json");
    write_file(cfg, R"({
      "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115},
      "sweep": "detuning",
      "grid": {"min": -0.3, "max": 0.3, "points": 13}
    })");
    const std::string out = tmp_path("sens.csv");
    CHECK(run("sensitivity --config " + cfg + " --out " + out) == 0);
    CHECK(first_line(out) == "detuning_ghz,coupling_ghz,s_c_mhz,s_l_mhz");
    CHECK(count_lines(out) == 14);
}

TEST_CASE("simulate command round-trips a schedule config") {
    const std::string cfg = tmp_path("simulate.json");
    write_file(cfg, R"({
      "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115},
      "schedule": {
        "t_gate_ns": 45.0, "t_ramp_ns": 7.5,
        "epsilon_park_ghz": 7.2, "epsilon_drive_ghz": 6.7,
        "theta": 3.1415926535, "sigma_frac": 0.16666666666666666,
        "omega_c_ghz": 6.66, "scale3": 1.0, "scale5": 1.0, "scale_det": 1.0,
        "theta_pre": 0.0, "theta_post": 0.0, "dt_ns": 0.002
      }
    })");
    const std::string out = tmp_path("simulate.json.out");
    const std::string eps = tmp_path("epsilon.csv");
    const std::string pop = tmp_path("pop.csv");
    CHECK(run("simulate --config " + cfg + " --out " + out + " --epsilon-csv " + eps +
              " --populations-csv " + pop) == 0);

    std::ifstream in(out);
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.contains("u_comp"));
    CHECK(j.at("u_comp").size() == 4);
    const double f = j.at("fidelity").get<double>();
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
    CHECK(first_line(eps) == "t_ns,epsilon_ghz");
    CHECK(first_line(pop) == "t_ns,p00,p01,p10,p11,leak");
    CHECK(count_lines(pop) > 10);
}

TEST_CASE("simulate rejects a schedule with unknown keys") {
    const std::string cfg = tmp_path("bad_schedule.json");
    write_file(cfg, R"({
      "device": {"epsilon_ghz": 7.2, "omega_ghz": 6.5, "delta_ghz": 0.2, "g_ghz": 0.115},
      "schedule": {
        "t_gate_ns": 45.0, "t_ramp_ns": 7.5,
        "epsilon_park_ghz": 7.2, "epsilon_drive_ghz": 6.7,
        "theta": 3.14, "sigma_frac": 0.1667,
        "omega_c_ghz": 6.66, "scale3": 1.0, "scale5": 1.0, "scale_det": 1.0,
        "theta_pre": 0.0, "theta_post": 0.0, "dt_ns": 0.002,
        "delta_anh_ghz": -0.13
      }
    })");
    CHECK(run("simulate --config " + cfg) == 2);
}

TEST_CASE("optimize with a minimal budget emits a record") {
    const std::string cfg = tmp_path("device.json");
    write_file(cfg, kDeviceJson);
    const std::string out = tmp_path("record.json");
    CHECK(run("--dt-ns 0.05 optimize --config " + cfg +
              " --t-gate-ns 45 --budget 1 --restarts 0 --seed 3 --out " + out) == 0);
    std::ifstream in(out);
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.contains("device"));
    CHECK(j.contains("schedule"));
    CHECK(j.at("result").contains("fidelity"));
    CHECK(j.at("result").at("budget_exhausted").get<bool>());
}

TEST_CASE("bad t-gate list exits with the config code") {
    const std::string cfg = tmp_path("device.json");
    write_file(cfg, kDeviceJson);
    CHECK(run("curve --config " + cfg + " --t-gate-list 50:40:-2 --budget 2 --out " +
              tmp_path("curve.csv")) == 2);
}
