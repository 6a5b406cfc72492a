#ifndef CNOTSIM_PROPAGATOR_HPP
#define CNOTSIM_PROPAGATOR_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cnotsim/model.hpp"
#include "cnotsim/pulses.hpp"

namespace cnotsim {

// Raised by the opt-in convergence guard when halving dt moves u_comp entries
// by more than the configured tolerance.
struct StepTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvolutionResult {
    Matrix9 u_full;   // lab-frame propagator over [0, t_gate]
    Matrix9 u_frame;  // rotating-frame propagator R(t_gate)^dag * u_full * R(0)
    Matrix4 u_comp;   // P * Z_post * u_frame * Z_pre * P^dag, |qr> order 00,01,10,11
};

struct PropagateOptions {
    std::optional<double> dt;       // overrides schedule.dt
    bool convergence_guard = false; // rerun at dt/2 and compare u_comp
    double guard_tol = 1e-6;
    // The ramps carry no drive and vary on ns scales, so they are integrated
    // with steps this factor coarser than dt (still capped at t_ramp/50).
    double ramp_step_factor = 20.0;
};

// Fourth-order commutator-free Magnus step: H is sampled at the two Gauss
// points of each step and the step propagator is the product of two exact
// exponentials exp(-i*h*(x∓ A + x± B)) with x± = (3 ± 2√3)/12 (right factor
// first). Exactly unitary for any h; O(h^4) accurate; exact for constant H.
// This is the integration core; tests drive it directly with synthetic H(t).
Matrix9 propagate_piecewise(const std::function<RealMatrix9(double)>& h_of_t, double t0,
                            double t1, int n_steps);

// Discretization of a schedule: the fixed step grid plus the precomputed drive
// coefficient at the two Gauss nodes of every step (the accumulated carrier
// phase is a prefix sum, so sub-range products compose exactly).
class SchedulePropagator {
  public:
    SchedulePropagator(const GateSchedule& schedule, const DeviceParams& params,
                       const PropagateOptions& options = {});

    int num_steps() const { return static_cast<int>(steps_.size()); }
    // Start time of step k (grid_time(num_steps()) == t_gate).
    double grid_time(int k) const;
    // Lab-frame propagator over steps [begin, end).
    Matrix9 product(int begin, int end) const;

    EvolutionResult full() const;

  private:
    struct Step {
        double t_begin;
        double h;
        double eps1, eps2;      // qubit frequency (GHz) at the two Gauss nodes
        double coeff1, coeff2;  // drive coefficient (rad/ns) at the Gauss nodes
    };
    GateSchedule schedule_;
    DeviceParams params_;
    std::vector<Step> steps_;
};

EvolutionResult propagate(const GateSchedule& schedule, const DeviceParams& params,
                          const PropagateOptions& options = {});

// R(t_end)^dag * u_lab * R(t_begin) with R(t) = exp(-i*(Phi_q(t) n_q (x) I +
// 2 pi omega t I (x) n_r)) and Phi_q(t) = 2 pi int_0^t epsilon dt'.
Matrix9 frame_transform(const Matrix9& u_lab, const GateSchedule& schedule,
                        const DeviceParams& params);

Matrix4 project_computational(const Matrix9& u_frame, double theta_pre, double theta_post);

struct PopulationRow {
    double t;
    double p00, p01, p10, p11;
    double leak;
};

// Evolves a computational-subspace initial state and records populations every
// `stride` steps. Populations are basis-diagonal, hence frame-independent.
std::vector<PopulationRow> propagate_populations(const GateSchedule& schedule,
                                                 const DeviceParams& params,
                                                 const Vector4c& psi0_comp, int stride,
                                                 const PropagateOptions& options = {});

}  // namespace cnotsim

#endif
