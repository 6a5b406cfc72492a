#ifndef CNOTSIM_OPTIMIZER_HPP
#define CNOTSIM_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "cnotsim/model.hpp"
#include "cnotsim/pulses.hpp"

namespace cnotsim {

using Params8 = Eigen::Matrix<double, 8, 1>;

// Order of the 8 control parameters in a Params8 vector.
enum ParamIndex {
    kParamG = 0,         // coupling, GHz
    kParamDetuning = 1,  // epsilon_drive - omega, GHz
    kParamOmegaC = 2,    // base carrier, GHz (linear)
    kParamTheta = 3,     // drive rotation angle, rad
    kParamTRamp = 4,     // ramp duration, ns
    kParamScale3 = 5,
    kParamScale5 = 6,
    kParamScaleDet = 7,
};

struct SearchSpace {
    Params8 lower;
    Params8 upper;
    Params8 guess;
    int budget = 2000;    // total objective evaluations across restarts
    int restarts = 0;     // perturbed restarts in addition to the seeded start
    std::uint64_t seed = 1;

    void validate() const;
};

struct OptimizationRecord {
    double t_gate = 0.0;
    Params8 params = Params8::Zero();
    double theta_pre = 0.0;
    double theta_post = 0.0;
    double fidelity = 0.0;  // from the fine-dt verification pass
    int evaluations = 0;
    bool converged = false;
    bool budget_exhausted = false;  // no candidate beat the initial guess
    GateSchedule schedule;          // fine-dt schedule at the optimum, z-angles filled in
};

struct OptimizerSettings {
    double dt_search = 0.01;  // coarse step used during the search, ns
    double dt_final = 0.002;  // fine step for the reported verification pass, ns
    // Calibrated drive width, slightly wider than the textbook t_g/6. Widths
    // near t_g/4 squeeze out another ~0.3 pp at 45 ns but overshoot the
    // achievable short-gate fidelities; 0.18 is the best single width across
    // the 33-51 ns window.
    double sigma_frac = 0.18;
    int threads = 1;  // parallelism across gate times in fidelity_curve
};

// Builds the full schedule for a candidate parameter vector. The carrier is
// clamped to omega_on +/- S_c/2 evaluated at the candidate's (g, detuning), and
// the DRAG anharmonicity is the dressed ladder value at the drive point.
GateSchedule build_schedule(const Params8& params, const DeviceParams& device, double t_gate,
                            double dt, double sigma_frac = 0.18);

// 1 - trace_fidelity after z-angle optimization; returns 1.0 for infeasible
// geometry (t_g <= 0 or dt > t_ramp/50) instead of throwing, so a search can
// step out of a bad region. Checks u_full unitarity to 1e-8 on every call.
double objective(const Params8& params, const DeviceParams& device, double t_gate,
                 const OptimizerSettings& settings = {});

// Initial guess: (g, detuning) from the sensitivity landscape (detuning in
// [200, 250] MHz, g in [100, 125] MHz), carrier at omega_on, and drive-shape
// seeds (theta = 2 pi, t_ramp = 7 ns, reshaped correction scales) from a
// one-time calibration of the 45 ns gate.
Params8 seed_from_sensitivity(const DeviceParams& device);

// Bounds bracketing the seeded guess; budget/restarts/seed at their defaults.
SearchSpace default_search_space(const DeviceParams& device);

OptimizationRecord optimize_gate(double t_gate, const SearchSpace& space,
                                 const DeviceParams& device,
                                 const OptimizerSettings& settings = {});

std::vector<OptimizationRecord> fidelity_curve(const std::vector<double>& t_gate_list,
                                               const SearchSpace& space,
                                               const DeviceParams& device,
                                               const OptimizerSettings& settings = {});

}  // namespace cnotsim

#endif
