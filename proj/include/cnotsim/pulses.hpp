#ifndef CNOTSIM_PULSES_HPP
#define CNOTSIM_PULSES_HPP

#include <nlohmann/json_fwd.hpp>

#include "cnotsim/model.hpp"

namespace cnotsim {

// Shifted-Gaussian DRAG drive with 3rd/5th-order amplitude corrections and a
// dynamic carrier. Angular units (rad, rad/ns) throughout.
struct DragPulse {
    double theta;                     // target rotation angle, rad
    double t_g;                       // drive duration, ns
    double omega_c;                   // base carrier, rad/ns
    double lambda = 1.4142135623730951;  // relative 1->2 matrix element
    // Anharmonicity entering the corrections, rad/ns. Not serialized: derived
    // from the device spectrum at the drive point (see dressed_anharmonicity).
    double delta_anh = 0.0;
    double sigma_frac = 1.0 / 6.0;    // Gaussian sigma as a fraction of t_g
    double scale3 = 1.0;              // multiplier on the f^3 amplitude term
    double scale5 = 1.0;              // multiplier on the f^5 amplitude term
    double scale_det = 1.0;           // multiplier on the f^2/f^4 carrier corrections
    bool first_order_y = true;        // derivative quadrature on/off (off only for comparisons)

    void validate() const;
};

// Vertically shifted Gaussian with f(0) = f(t_g) = 0 and integral exactly theta.
double envelope(const DragPulse& pulse, double t);
// Closed-form time derivative of the envelope.
double envelope_derivative(const DragPulse& pulse, double t);

struct DragQuadratures {
    double omega_x;   // in-phase amplitude, rad/ns
    double omega_y;   // quadrature amplitude, rad/ns
    double omega_rf;  // instantaneous carrier, rad/ns
};

DragQuadratures drag_quadratures(const DragPulse& pulse, double t);

// Full control program. The gate is a linear ramp to the drive point, the DRAG
// pulse, a linear ramp back, wrapped by virtual z-rotations.
struct GateSchedule {
    double t_gate;         // ns; must equal 2*t_ramp + drive.t_g
    double t_ramp;         // ns
    double epsilon_park;   // GHz
    double epsilon_drive;  // GHz
    DragPulse drive;
    double theta_pre = 0.0;   // rad
    double theta_post = 0.0;  // rad
    double dt = 0.0005;       // integrator step, ns

    void validate() const;
    double drive_start() const { return t_ramp; }
    double drive_end() const { return t_ramp + drive.t_g; }

    nlohmann::json to_json() const;
    static GateSchedule from_json(const nlohmann::json& j);
};

// Piecewise-linear qubit frequency, GHz.
double epsilon_of_t(const GateSchedule& schedule, double t);

// Exact closed-form of int_0^t epsilon(t') dt', GHz*ns (used by the rotating frame).
double integrated_epsilon(const GateSchedule& schedule, double t);

// Drive sample at time t in the drive window; accumulated_phase is
// int omega_rf dt' from the drive start, maintained by the propagator.
// The real drive coefficient is amplitude_x*cos(phase) + amplitude_y*sin(phase).
DriveSample drive_sample(const GateSchedule& schedule, double t, double accumulated_phase);

// Virtual z-rotation exp(-i*theta*n_q) (x) I with n_q = diag(0,1,2).
Matrix9 z_rotation(double theta);

}  // namespace cnotsim

#endif
