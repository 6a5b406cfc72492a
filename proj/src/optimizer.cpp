#include "cnotsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "cnotsim/fidelity.hpp"
#include "cnotsim/nelder_mead.hpp"
#include "cnotsim/propagator.hpp"
#include "cnotsim/spectrum.hpp"

namespace cnotsim {

void SearchSpace::validate() const {
    for (int i = 0; i < 8; ++i) {
        if (!(lower(i) < upper(i)))
            throw std::invalid_argument("SearchSpace: lower must be < upper in every dimension");
        if (guess(i) < lower(i) || guess(i) > upper(i))
            throw std::invalid_argument("SearchSpace: guess must lie within bounds");
    }
    if (budget < 1) throw std::invalid_argument("SearchSpace: budget must be >= 1");
    if (restarts < 0) throw std::invalid_argument("SearchSpace: restarts must be >= 0");
}

GateSchedule build_schedule(const Params8& params, const DeviceParams& device, double t_gate,
                            double dt, double sigma_frac) {
    DeviceParams dev = device;
    dev.g = params(kParamG);
    const double eps_drive = device.omega + params(kParamDetuning);

    DeviceParams at_drive = dev;
    at_drive.epsilon = eps_drive;
    const LabeledSpectrum spec = adiabatic_labeled_spectrum(at_drive);
    const auto [omega_on, omega_off] = transition_frequencies(spec);
    const double s_c = std::abs(omega_on - omega_off);

    GateSchedule s;
    s.t_gate = t_gate;
    s.t_ramp = params(kParamTRamp);
    s.epsilon_park = device.epsilon;
    s.epsilon_drive = eps_drive;
    s.dt = dt;
    s.drive.theta = params(kParamTheta);
    s.drive.t_g = t_gate - 2.0 * s.t_ramp;
    s.drive.sigma_frac = sigma_frac;
    // Carrier stays within the conditional window around the on-transition.
    s.drive.omega_c =
        std::clamp(kTwoPi * params(kParamOmegaC), omega_on - s_c / 2.0, omega_on + s_c / 2.0);
    s.drive.delta_anh =
        (spec.energy(1, 1) - spec.energy(0, 1)) - (spec.energy(2, 1) - spec.energy(1, 1));
    s.drive.scale3 = params(kParamScale3);
    s.drive.scale5 = params(kParamScale5);
    s.drive.scale_det = params(kParamScaleDet);
    return s;
}

double objective(const Params8& params, const DeviceParams& device, double t_gate,
                 const OptimizerSettings& settings) {
    const double t_ramp = params(kParamTRamp);
    const double t_g = t_gate - 2.0 * t_ramp;
    if (t_g <= 0.0 || settings.dt_search > t_ramp / 50.0) return 1.0;  // infeasible geometry

    const GateSchedule schedule =
        build_schedule(params, device, t_gate, settings.dt_search, settings.sigma_frac);
    DeviceParams dev = device;
    dev.g = params(kParamG);
    const EvolutionResult r = propagate(schedule, dev);
    const double unitarity =
        ((r.u_full.adjoint() * r.u_full) - Matrix9::Identity()).cwiseAbs().maxCoeff();
    if (unitarity > 1e-8)
        throw std::runtime_error("objective: propagator lost unitarity: " +
                                 std::to_string(unitarity));
    return 1.0 - optimize_z_angles(r.u_frame).fidelity;
}

Params8 seed_from_sensitivity(const DeviceParams& device) {
    // Scan the stated guess windows and keep the point with the best combined
    // sensitivity (both need to be large; geometric mean balances them).
    std::vector<double> det_grid;
    for (int i = 0; i <= 10; ++i) det_grid.push_back(0.200 + 0.005 * i);
    double best_score = -1.0, best_det = 0.215, best_g = 0.1125;
    for (int j = 0; j <= 5; ++j) {
        DeviceParams dev = device;
        dev.g = 0.100 + 0.005 * j;
        const std::vector<SensitivityPoint> pts = sweep_detuning(dev, det_grid);
        for (const SensitivityPoint& p : pts) {
            if (!p.ok) continue;
            const double score = std::sqrt(p.s_c * p.s_l);
            if (score > best_score) {
                best_score = score;
                best_det = p.detuning;
                best_g = p.coupling;
            }
        }
    }

    DeviceParams at_drive = device;
    at_drive.g = best_g;
    at_drive.epsilon = device.omega + best_det;
    const double omega_on = transition_frequencies(adiabatic_labeled_spectrum(at_drive)).first;

    Params8 guess;
    guess(kParamG) = best_g;
    guess(kParamDetuning) = best_det;
    guess(kParamOmegaC) = omega_on / kTwoPi;
    // Drive-shape seeds from a one-time calibration of the 45 ns gate: a full
    // rotation angle of 2 pi through the dressed matrix element, ramps near
    // the 7 ns family, and strongly reshaped amplitude corrections.
    guess(kParamTheta) = kTwoPi;
    guess(kParamTRamp) = 7.0;
    guess(kParamScale3) = 16.0;
    guess(kParamScale5) = -64.0;
    guess(kParamScaleDet) = -2.0;
    return guess;
}

SearchSpace default_search_space(const DeviceParams& device) {
    SearchSpace space;
    space.guess = seed_from_sensitivity(device);
    space.lower(kParamG) = 0.095;
    space.upper(kParamG) = 0.130;
    space.lower(kParamDetuning) = 0.19;
    space.upper(kParamDetuning) = 0.26;
    space.lower(kParamOmegaC) = space.guess(kParamOmegaC) - 0.12;
    space.upper(kParamOmegaC) = space.guess(kParamOmegaC) + 0.12;
    space.lower(kParamTheta) = 4.0;
    space.upper(kParamTheta) = 9.0;
    space.lower(kParamTRamp) = 4.5;
    space.upper(kParamTRamp) = 10.0;
    space.lower(kParamScale3) = -10.0;
    space.upper(kParamScale3) = 40.0;
    space.lower(kParamScale5) = -90.0;
    space.upper(kParamScale5) = -20.0;
    space.lower(kParamScaleDet) = -6.0;
    space.upper(kParamScaleDet) = 2.0;
    return space;
}

OptimizationRecord optimize_gate(double t_gate, const SearchSpace& space,
                                 const DeviceParams& device, const OptimizerSettings& settings) {
    space.validate();
    device.validate();

    int total_evals = 0;
    auto counted_objective = [&](const Eigen::VectorXd& x) {
        ++total_evals;
        return objective(Params8(x), device, t_gate, settings);
    };

    const int n_starts = space.restarts + 1;
    const int per_start = std::max(1, space.budget / n_starts);
    std::mt19937_64 rng(space.seed);

    Eigen::VectorXd lo = space.lower, hi = space.upper;
    Eigen::VectorXd best_x = space.guess;
    double best_f = std::numeric_limits<double>::infinity();
    bool any_converged = false;

    for (int s = 0; s < n_starts && total_evals < space.budget; ++s) {
        Eigen::VectorXd x0 = s == 0 ? Eigen::VectorXd(space.guess) : best_x;
        if (s > 0) {
            // Restarts alternate between a fresh uniform draw over the box
            // (odd s, hops between basins) and a small perturbation of the
            // incumbent (even s, refines the current basin).
            for (int i = 0; i < 8; ++i) {
                if (s % 2 == 1) {
                    std::uniform_real_distribution<double> d(lo(i), hi(i));
                    x0(i) = d(rng);
                } else {
                    std::uniform_real_distribution<double> d(-0.05, 0.05);
                    x0(i) = std::clamp(x0(i) + d(rng) * (hi(i) - lo(i)), lo(i), hi(i));
                }
            }
        }
        // Chained simplex rounds: a wide exploration round followed by two
        // progressively tighter polish rounds from the round's best point.
        for (double step : {0.08, 0.02, 0.006}) {
            if (total_evals >= space.budget) break;
            NelderMeadOptions opts;
            opts.max_evals = std::min(per_start / 3 + 1, space.budget - total_evals);
            opts.x_tol = 1e-9;
            opts.f_tol = 1e-12;
            opts.initial_step = step;
            const NelderMeadResult r = nelder_mead(counted_objective, x0, lo, hi, opts);
            any_converged = any_converged || r.converged;
            if (r.f < best_f) {
                best_f = r.f;
                best_x = r.x;
            }
            x0 = best_x;
        }
    }

    // Value of the unoptimized seed, for the budget_exhausted contract.
    const double guess_value = objective(space.guess, device, t_gate, settings);

    OptimizationRecord rec;
    rec.t_gate = t_gate;
    rec.params = Params8(best_x);
    rec.evaluations = total_evals;
    rec.converged = any_converged;
    rec.budget_exhausted = !(best_f < guess_value);
    if (rec.budget_exhausted) {
        best_x = space.guess;
    }

    // Reported numbers always come from a fine-dt verification pass.
    GateSchedule schedule =
        build_schedule(Params8(best_x), device, t_gate, settings.dt_final, settings.sigma_frac);
    DeviceParams dev = device;
    dev.g = best_x(kParamG);
    const EvolutionResult r = propagate(schedule, dev);
    const ZAngleResult z = optimize_z_angles(r.u_frame);
    schedule.theta_pre = z.theta_pre;
    schedule.theta_post = z.theta_post;
    rec.params = Params8(best_x);
    rec.theta_pre = z.theta_pre;
    rec.theta_post = z.theta_post;
    rec.fidelity = std::min(z.fidelity, 1.0);  // clamp float roundoff in reports
    rec.schedule = schedule;
    return rec;
}

std::vector<OptimizationRecord> fidelity_curve(const std::vector<double>& t_gate_list,
                                               const SearchSpace& space,
                                               const DeviceParams& device,
                                               const OptimizerSettings& settings) {
    if (t_gate_list.empty()) throw std::invalid_argument("fidelity_curve: empty gate-time list");
    std::vector<OptimizationRecord> records(t_gate_list.size());
    if (settings.threads <= 1) {
        for (size_t i = 0; i < t_gate_list.size(); ++i)
            records[i] = optimize_gate(t_gate_list[i], space, device, settings);
        return records;
    }
    std::vector<std::future<OptimizationRecord>> futures;
    futures.reserve(t_gate_list.size());
    size_t next = 0;
    while (next < t_gate_list.size()) {
        const size_t batch =
            std::min<size_t>(settings.threads, t_gate_list.size() - next);
        for (size_t j = 0; j < batch; ++j) {
            const double tg = t_gate_list[next + j];
            futures.push_back(std::async(std::launch::async, [=, &space, &device]() {
                return optimize_gate(tg, space, device, settings);
            }));
        }
        for (size_t j = 0; j < batch; ++j) records[next + j] = futures[next + j].get();
        next += batch;
    }
    return records;
}

}  // namespace cnotsim
