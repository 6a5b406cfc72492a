// Command-line driver: spectrum/sensitivity sweeps, schedule simulation,
// single-point gate optimization, and the fidelity-vs-gate-time curve.
// All data outputs are CSV/JSON; exit codes: 0 ok, 2 config error,
// 3 numeric/labeling error, 4 convergence failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cnotsim/fidelity.hpp"
#include "cnotsim/model.hpp"
#include "cnotsim/optimizer.hpp"
#include "cnotsim/propagator.hpp"
#include "cnotsim/pulses.hpp"
#include "cnotsim/spectrum.hpp"

using nlohmann::json;
using namespace cnotsim;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
}

// Unknown keys are rejected everywhere to catch unit mistakes early.
void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(where + ": key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

DeviceParams parse_device(const json& root) {
    if (!root.contains("device")) throw ConfigError("config: missing 'device' block");
    const json& j = root.at("device");
    check_keys(j, {"epsilon_ghz", "omega_ghz", "delta_ghz", "g_ghz"}, "device");
    DeviceParams p;
    p.epsilon = get_number(j, "epsilon_ghz", "device");
    p.omega = get_number(j, "omega_ghz", "device");
    p.delta = get_number(j, "delta_ghz", "device");
    p.g = get_number(j, "g_ghz", "device");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

json device_to_json(const DeviceParams& p) {
    return json{{"epsilon_ghz", p.epsilon},
                {"omega_ghz", p.omega},
                {"delta_ghz", p.delta},
                {"g_ghz", p.g}};
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
    if (j.is_array()) {
        std::vector<double> v = j.get<std::vector<double>>();
        if (v.empty()) throw ConfigError(where + ": grid is empty");
        return v;
    }
    check_keys(j, {"min", "max", "points"}, where);
    const double lo = get_number(j, "min", where);
    const double hi = get_number(j, "max", where);
    const int n = static_cast<int>(get_number(j, "points", where));
    if (n < 1) throw ConfigError(where + ": points must be >= 1");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

// Data files carry full precision; only the human-readable report rounds.
std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

json ucomp_to_json(const Matrix4& u) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < 4; ++j2)
            row.push_back(json{{"re", u(i, j2).real()}, {"im", u(i, j2).imag()}});
        rows.push_back(row);
    }
    return rows;
}

// Parses "33:51:2" (begin:end:step, inclusive) or "33,35,37".
std::vector<double> parse_t_gate_list(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double b, e, s;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &b, &e, &s) != 3 || s <= 0)
            throw ConfigError("--t-gate-list: expected begin:end:step");
        for (double t = b; t <= e + 1e-9; t += s) out.push_back(t);
    } else {
        size_t pos = 0;
        while (pos < text.size()) {
            size_t next = text.find(',', pos);
            if (next == std::string::npos) next = text.size();
            out.push_back(std::stod(text.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    if (out.empty()) throw ConfigError("--t-gate-list: empty list");
    return out;
}

GateSchedule parse_schedule(const json& root, const DeviceParams& device,
                            std::optional<double> dt_override) {
    if (!root.contains("schedule")) throw ConfigError("config: missing 'schedule' block");
    GateSchedule s;
    try {
        s = GateSchedule::from_json(root.at("schedule"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (dt_override) s.dt = *dt_override;
    s.drive.delta_anh = dressed_anharmonicity(device, s.epsilon_drive);
    return s;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_path) {
    const json cfg = load_json(config_path);
    check_keys(cfg, {"device", "epsilon_grid"}, "config");
    const DeviceParams device = parse_device(cfg);
    if (!cfg.contains("epsilon_grid")) throw ConfigError("config: missing 'epsilon_grid'");
    const std::vector<double> grid = parse_grid(cfg.at("epsilon_grid"), "epsilon_grid");

    const SpectrumCurve curve = spectrum_curve(device, grid);
    std::ofstream out = open_out(out_path);
    out << "epsilon_ghz,E00,E01,E10,E02,E11,E20,E21\n";
    // column order within the curve: 00,01,10,02,11,20,12,21,22
    static const int kCols[7] = {0, 1, 2, 3, 4, 5, 7};
    for (size_t i = 0; i < curve.epsilon_ghz.size(); ++i) {
        out << num(curve.epsilon_ghz[i]);
        for (int c : kCols) out << ',' << num(curve.energies_ghz[i][c]);
        out << '\n';
    }
    std::cout << "wrote " << curve.epsilon_ghz.size() << " rows to " << out_path << "\n";
    return 0;
}

int cmd_sensitivity(const std::string& config_path, const std::string& out_path) {
    const json cfg = load_json(config_path);
    check_keys(cfg, {"device", "sweep", "grid", "detuning_ghz"}, "config");
    const DeviceParams device = parse_device(cfg);
    if (!cfg.contains("sweep")) throw ConfigError("config: missing 'sweep'");
    const std::string sweep = cfg.at("sweep").get<std::string>();
    if (!cfg.contains("grid")) throw ConfigError("config: missing 'grid'");
    const std::vector<double> grid = parse_grid(cfg.at("grid"), "grid");

    std::vector<SensitivityPoint> points;
    if (sweep == "detuning") {
        points = sweep_detuning(device, grid);
    } else if (sweep == "coupling") {
        DeviceParams dev = device;
        dev.epsilon = device.omega + get_number(cfg, "detuning_ghz", "config");
        points = sweep_coupling(dev, grid);
    } else {
        throw ConfigError("config: sweep must be 'detuning' or 'coupling'");
    }

    std::ofstream out = open_out(out_path);
    out << "detuning_ghz,coupling_ghz,s_c_mhz,s_l_mhz\n";
    for (const SensitivityPoint& p : points)
        out << num(p.detuning) << ',' << num(p.coupling) << ',' << num(p.s_c * 1e3) << ','
            << num(p.s_l * 1e3) << '\n';
    std::cout << "wrote " << points.size() << " rows to " << out_path << "\n";
    return 0;
}

Vector4c parse_initial_state(const json& cfg) {
    Vector4c psi = Vector4c::Zero();
    if (!cfg.contains("initial_state")) {
        psi(0) = 1.0;
        return psi;
    }
    const std::string s = cfg.at("initial_state").get<std::string>();
    static const char* kNames[4] = {"00", "01", "10", "11"};
    for (int i = 0; i < 4; ++i)
        if (s == kNames[i]) {
            psi(i) = 1.0;
            return psi;
        }
    throw ConfigError("config: initial_state must be one of 00, 01, 10, 11");
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& epsilon_csv, const std::string& populations_csv,
                 bool guard, std::optional<double> dt_override) {
    const json cfg = load_json(config_path);
    check_keys(cfg, {"device", "schedule", "initial_state", "result"}, "config");
    const DeviceParams device = parse_device(cfg);
    const GateSchedule schedule = parse_schedule(cfg, device, dt_override);

    PropagateOptions opts;
    opts.convergence_guard = guard;
    const EvolutionResult r = propagate(schedule, device, opts);
    const double fidelity = trace_fidelity(r.u_comp, TargetGate::cnot_on_qubit());

    json out_json{{"u_comp", ucomp_to_json(r.u_comp)},
                  {"fidelity", std::min(fidelity, 1.0)},
                  {"theta_pre", schedule.theta_pre},
                  {"theta_post", schedule.theta_post}};
    if (!out_path.empty()) open_out(out_path) << out_json.dump(2) << '\n';

    if (!epsilon_csv.empty()) {
        std::ofstream out = open_out(epsilon_csv);
        out << "t_ns,epsilon_ghz\n";
        const int n = 400;
        for (int i = 0; i <= n; ++i) {
            const double t = schedule.t_gate * i / n;
            out << num(t) << ',' << num(epsilon_of_t(schedule, t)) << '\n';
        }
    }
    if (!populations_csv.empty()) {
        const Vector4c psi0 = parse_initial_state(cfg);
        const std::vector<PopulationRow> rows =
            propagate_populations(schedule, device, psi0, 50);
        std::ofstream out = open_out(populations_csv);
        out << "t_ns,p00,p01,p10,p11,leak\n";
        for (const PopulationRow& row : rows)
            out << num(row.t) << ',' << num(row.p00) << ',' << num(row.p01) << ','
                << num(row.p10) << ',' << num(row.p11) << ',' << num(row.leak) << '\n';
    }

    std::printf("trace fidelity: %.4f%%\n", std::min(fidelity, 1.0) * 100.0);
    return 0;
}

json record_to_json(const OptimizationRecord& rec, const DeviceParams& base_device) {
    DeviceParams dev = base_device;
    dev.g = rec.params(kParamG);
    return json{
        {"device", device_to_json(dev)},
        {"schedule", rec.schedule.to_json()},
        {"result",
         {{"t_gate_ns", rec.t_gate},
          {"fidelity", rec.fidelity},
          {"fidelity_pct", rec.fidelity * 100.0},
          {"theta_pre", rec.theta_pre},
          {"theta_post", rec.theta_post},
          {"evaluations", rec.evaluations},
          {"converged", rec.converged},
          {"budget_exhausted", rec.budget_exhausted},
          {"params",
           {{"g_ghz", rec.params(kParamG)},
            {"detuning_ghz", rec.params(kParamDetuning)},
            {"omega_c_ghz", rec.params(kParamOmegaC)},
            {"theta", rec.params(kParamTheta)},
            {"t_ramp_ns", rec.params(kParamTRamp)},
            {"scale3", rec.params(kParamScale3)},
            {"scale5", rec.params(kParamScale5)},
            {"scale_det", rec.params(kParamScaleDet)}}}}}};
}

SearchSpace make_space(const DeviceParams& device, int budget, int restarts,
                       std::uint64_t seed) {
    SearchSpace space = default_search_space(device);
    space.budget = budget;
    space.restarts = restarts;
    space.seed = seed;
    return space;
}

int cmd_optimize(const std::string& config_path, double t_gate, int budget, int restarts,
                 std::uint64_t seed, const std::string& out_path,
                 std::optional<double> dt_override, int threads) {
    (void)threads;
    const json cfg = load_json(config_path);
    check_keys(cfg, {"device"}, "config");
    const DeviceParams device = parse_device(cfg);

    OptimizerSettings settings;
    if (dt_override) settings.dt_final = *dt_override;
    const SearchSpace space = make_space(device, budget, restarts, seed);
    const OptimizationRecord rec = optimize_gate(t_gate, space, device, settings);

    const json out_json = record_to_json(rec, device);
    if (!out_path.empty()) open_out(out_path) << out_json.dump(2) << '\n';
    std::printf("t_gate %.4g ns: fidelity %.4f%% (%d evaluations%s)\n", t_gate,
                rec.fidelity * 100.0, rec.evaluations,
                rec.budget_exhausted ? ", budget exhausted" : "");
    return 0;
}

int cmd_curve(const std::string& config_path, const std::string& t_gate_list, int budget,
              int restarts, std::uint64_t seed, const std::string& out_path,
              std::optional<double> dt_override, int threads) {
    const json cfg = load_json(config_path);
    check_keys(cfg, {"device"}, "config");
    const DeviceParams device = parse_device(cfg);
    const std::vector<double> gate_times = parse_t_gate_list(t_gate_list);

    OptimizerSettings settings;
    if (dt_override) settings.dt_final = *dt_override;
    settings.threads = threads;
    const SearchSpace space = make_space(device, budget, restarts, seed);
    const std::vector<OptimizationRecord> records =
        fidelity_curve(gate_times, space, device, settings);

    std::ofstream out = open_out(out_path);
    out << "t_gate_ns,t_ramp_ns,g_mhz,detuning_mhz,fidelity_pct\n";
    for (const OptimizationRecord& rec : records) {
        out << num(rec.t_gate) << ',' << num(rec.params(kParamTRamp)) << ','
            << num(rec.params(kParamG) * 1e3) << ',' << num(rec.params(kParamDetuning) * 1e3)
            << ',' << num(rec.fidelity * 100.0) << '\n';
        std::printf("t_gate %.4g ns: fidelity %.4f%%\n", rec.t_gate, rec.fidelity * 100.0);
    }
    std::cout << "wrote " << records.size() << " rows to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectroscopic conditional-NOT gate simulator and optimizer"};
    app.require_subcommand(1);

    std::optional<double> dt_override;
    int threads = 1;
    app.add_option("--dt-ns", dt_override, "override the integrator step everywhere");
    app.add_option("--threads", threads, "worker parallelism cap")->check(CLI::PositiveNumber);

    std::string config_path, out_path = "out.csv";
    std::string epsilon_csv, populations_csv;
    bool guard = false;
    double t_gate = 45.0;
    int budget = 2000, restarts = 0;
    std::uint64_t seed = 1;
    std::string t_gate_list = "33:51:2";

    CLI::App* sp = app.add_subcommand("spectrum", "labeled energy levels vs qubit frequency");
    sp->add_option("--config", config_path)->required();
    sp->add_option("--out", out_path);

    CLI::App* se = app.add_subcommand("sensitivity", "control/leakage sensitivity sweeps");
    se->add_option("--config", config_path)->required();
    se->add_option("--out", out_path);

    CLI::App* si = app.add_subcommand("simulate", "propagate a gate schedule");
    si->add_option("--config", config_path)->required();
    si->add_option("--out", out_path)->default_val("");
    si->add_option("--epsilon-csv", epsilon_csv);
    si->add_option("--populations-csv", populations_csv);
    si->add_flag("--guard", guard, "enable the dt-halving convergence guard");

    CLI::App* op = app.add_subcommand("optimize", "optimize the 8 control parameters");
    op->add_option("--config", config_path)->required();
    op->add_option("--t-gate-ns", t_gate)->required();
    op->add_option("--budget", budget);
    op->add_option("--restarts", restarts);
    op->add_option("--seed", seed);
    op->add_option("--out", out_path)->default_val("");

    CLI::App* cu = app.add_subcommand("curve", "fidelity vs total gate time");
    cu->add_option("--config", config_path)->required();
    cu->add_option("--t-gate-list", t_gate_list);
    cu->add_option("--budget", budget);
    cu->add_option("--restarts", restarts);
    cu->add_option("--seed", seed);
    cu->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) return cmd_spectrum(config_path, out_path);
        if (se->parsed()) return cmd_sensitivity(config_path, out_path);
        if (si->parsed())
            return cmd_simulate(config_path, out_path, epsilon_csv, populations_csv, guard,
                                dt_override);
        if (op->parsed())
            return cmd_optimize(config_path, t_gate, budget, restarts, seed, out_path,
                                dt_override, threads);
        if (cu->parsed())
            return cmd_curve(config_path, t_gate_list, budget, restarts, seed, out_path,
                             dt_override, threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const StepTooCoarse& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
