#include "cnotsim/propagator.hpp"

#include <cmath>

namespace cnotsim {

namespace {

Matrix9 step_exponential(const RealMatrix9& h, double dt) {
    Eigen::SelfAdjointEigenSolver<RealMatrix9> es(h);
    Eigen::Matrix<Complex, 9, 1> phases;
    for (int k = 0; k < 9; ++k)
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * dt));
    // V * diag(e^{-i e dt}) * V^T; V is real, so the transpose (not adjoint) closes it.
    const Matrix9 v = es.eigenvectors().cast<Complex>();
    return (v * phases.asDiagonal()) * v.transpose();
}

// Gauss nodes of [0,1] and the fourth-order commutator-free Magnus weights:
// U_step = exp(-i h (xm A + xp B)) * exp(-i h (xp A + xm B)), right factor
// first, A/B the Hamiltonian at the early/late Gauss node.
constexpr double kGauss1 = 0.5 - 0.28867513459481287;  // 1/2 - sqrt(3)/6
constexpr double kGauss2 = 0.5 + 0.28867513459481287;
constexpr double kCf4P = (3.0 + 2.0 * 1.7320508075688772) / 12.0;
constexpr double kCf4M = (3.0 - 2.0 * 1.7320508075688772) / 12.0;

Matrix9 cf4_step(const RealMatrix9& a, const RealMatrix9& b, double h) {
    return step_exponential(kCf4M * a + kCf4P * b, h) *
           step_exponential(kCf4P * a + kCf4M * b, h);
}

}  // namespace

Matrix9 propagate_piecewise(const std::function<RealMatrix9(double)>& h_of_t, double t0,
                            double t1, int n_steps) {
    if (n_steps <= 0) throw std::invalid_argument("propagate_piecewise: n_steps must be > 0");
    const double h = (t1 - t0) / n_steps;
    Matrix9 u = Matrix9::Identity();
    for (int k = 0; k < n_steps; ++k) {
        const double tk = t0 + k * h;
        u = cf4_step(h_of_t(tk + kGauss1 * h), h_of_t(tk + kGauss2 * h), h) * u;
    }
    return u;
}

SchedulePropagator::SchedulePropagator(const GateSchedule& schedule, const DeviceParams& params,
                                       const PropagateOptions& options)
    : schedule_(schedule), params_(params) {
    schedule_.dt = options.dt.value_or(schedule.dt);
    schedule_.validate();
    params_.validate();

    const double dt = schedule_.dt;
    const double t_ramp = schedule_.t_ramp;
    const double t_g = schedule_.drive.t_g;

    const double ramp_dt = std::min(dt * options.ramp_step_factor, t_ramp / 50.0);
    const int n_ramp = std::max(1, static_cast<int>(std::ceil(t_ramp / ramp_dt)));
    const int n_drive = std::max(1, static_cast<int>(std::ceil(t_g / dt)));
    steps_.reserve(2 * n_ramp + n_drive);

    auto push_step = [&](double t_begin, double h, double c1, double c2) {
        const double e1 = epsilon_of_t(schedule_, t_begin + kGauss1 * h);
        const double e2 = epsilon_of_t(schedule_, t_begin + kGauss2 * h);
        steps_.push_back(Step{t_begin, h, e1, e2, c1, c2});
    };

    const double h_ramp = t_ramp / n_ramp;
    for (int k = 0; k < n_ramp; ++k)
        push_step(k * h_ramp, h_ramp, 0.0, 0.0);

    // Drive segment: the carrier phase Phi = int omega_rf dt' is accumulated to
    // the Gauss nodes of each step with two-point Gauss quadrature, matching the
    // fourth order of the stepper. The drive coefficient is sampled at the nodes.
    const DragPulse& pulse = schedule_.drive;
    auto phase_increment = [&](double a, double b) {
        const double m = 0.5 * (a + b), d = (b - a) * 0.28867513459481287;
        return 0.5 * (b - a) *
               (drag_quadratures(pulse, m - d).omega_rf + drag_quadratures(pulse, m + d).omega_rf);
    };
    auto coeff_at = [&](double tau, double phi) {
        const DriveSample s = drive_sample(schedule_, t_ramp + tau, phi);
        return s.amplitude_x * std::cos(s.carrier_phase) +
               s.amplitude_y * std::sin(s.carrier_phase);
    };
    const double h_drive = t_g / n_drive;
    double phase = 0.0;
    for (int k = 0; k < n_drive; ++k) {
        const double tau0 = k * h_drive;  // time since drive start
        const double g1 = tau0 + kGauss1 * h_drive, g2 = tau0 + kGauss2 * h_drive;
        const double phi1 = phase + phase_increment(tau0, g1);
        const double phi2 = phi1 + phase_increment(g1, g2);
        phase = phi2 + phase_increment(g2, tau0 + h_drive);
        steps_.push_back(Step{t_ramp + tau0, h_drive, epsilon_of_t(schedule_, t_ramp + g1),
                              epsilon_of_t(schedule_, t_ramp + g2), coeff_at(g1, phi1),
                              coeff_at(g2, phi2)});
    }

    const double t_down = schedule_.drive_end();
    for (int k = 0; k < n_ramp; ++k)
        push_step(t_down + k * h_ramp, h_ramp, 0.0, 0.0);
}

double SchedulePropagator::grid_time(int k) const {
    if (k < 0 || k > num_steps()) throw std::out_of_range("grid_time: step out of range");
    if (k == num_steps()) return schedule_.t_gate;
    return steps_[k].t_begin;
}

Matrix9 SchedulePropagator::product(int begin, int end) const {
    if (begin < 0 || end > num_steps() || begin > end)
        throw std::out_of_range("product: invalid step range");
    const RealMatrix9 xop = build_drive_operator();
    const RealMatrix9 hint = build_hint(params_);
    DeviceParams p = params_;
    Matrix9 u = Matrix9::Identity();
    for (int k = begin; k < end; ++k) {
        const Step& s = steps_[k];
        p.epsilon = s.eps1;
        const RealMatrix9 a = build_h0(p) + hint + s.coeff1 * xop;
        p.epsilon = s.eps2;
        const RealMatrix9 b = build_h0(p) + hint + s.coeff2 * xop;
        u = cf4_step(a, b, s.h) * u;
    }
    return u;
}

EvolutionResult SchedulePropagator::full() const {
    EvolutionResult r;
    r.u_full = product(0, num_steps());
    r.u_frame = frame_transform(r.u_full, schedule_, params_);
    r.u_comp = project_computational(r.u_frame, schedule_.theta_pre, schedule_.theta_post);
    return r;
}

EvolutionResult propagate(const GateSchedule& schedule, const DeviceParams& params,
                          const PropagateOptions& options) {
    SchedulePropagator prop(schedule, params, options);
    EvolutionResult r = prop.full();
    if (options.convergence_guard) {
        PropagateOptions halved = options;
        halved.convergence_guard = false;
        halved.dt = options.dt.value_or(schedule.dt) / 2.0;
        const EvolutionResult fine = SchedulePropagator(schedule, params, halved).full();
        const double diff = (r.u_comp - fine.u_comp).cwiseAbs().maxCoeff();
        if (diff > options.guard_tol)
            throw StepTooCoarse("propagate: halving dt moved u_comp by " + std::to_string(diff));
    }
    return r;
}

Matrix9 frame_transform(const Matrix9& u_lab, const GateSchedule& schedule,
                        const DeviceParams& params) {
    auto frame_at = [&](double t) {
        const double phi_q = kTwoPi * integrated_epsilon(schedule, t);
        const double phi_r = kTwoPi * params.omega * t;
        Matrix9 r = Matrix9::Zero();
        for (int q = 0; q < 3; ++q)
            for (int rr = 0; rr < 3; ++rr)
                r(bare_index(q, rr), bare_index(q, rr)) =
                    std::exp(Complex(0.0, -(phi_q * q + phi_r * rr)));
        return r;
    };
    return frame_at(schedule.t_gate).adjoint() * u_lab * frame_at(0.0);
}

Matrix4 project_computational(const Matrix9& u_frame, double theta_pre, double theta_post) {
    const Matrix9 wrapped = z_rotation(theta_post) * u_frame * z_rotation(theta_pre);
    Matrix4 u;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            u(i, j) = wrapped(kComputationalIndex[i], kComputationalIndex[j]);
    return u;
}

std::vector<PopulationRow> propagate_populations(const GateSchedule& schedule,
                                                 const DeviceParams& params,
                                                 const Vector4c& psi0_comp, int stride,
                                                 const PropagateOptions& options) {
    if (stride <= 0) throw std::invalid_argument("propagate_populations: stride must be > 0");
    SchedulePropagator prop(schedule, params, options);
    Vector9c psi = Vector9c::Zero();
    for (int i = 0; i < 4; ++i) psi(kComputationalIndex[i]) = psi0_comp(i);

    std::vector<PopulationRow> rows;
    auto record = [&](double t) {
        PopulationRow r;
        r.t = t;
        r.p00 = std::norm(psi(kComputationalIndex[0]));
        r.p01 = std::norm(psi(kComputationalIndex[1]));
        r.p10 = std::norm(psi(kComputationalIndex[2]));
        r.p11 = std::norm(psi(kComputationalIndex[3]));
        r.leak = 1.0 - (r.p00 + r.p01 + r.p10 + r.p11);
        rows.push_back(r);
    };
    record(0.0);
    const int n = prop.num_steps();
    for (int k = 0; k < n; k += stride) {
        const int end = std::min(k + stride, n);
        psi = prop.product(k, end) * psi;
        record(prop.grid_time(end));
    }
    return rows;
}

}  // namespace cnotsim
