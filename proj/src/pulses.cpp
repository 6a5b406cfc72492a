#include "cnotsim/pulses.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cnotsim {

namespace {

// Normalization A of f(t) = A*[exp(-(t-t_g/2)^2/(2 sigma^2)) - base] with
// base = exp(-t_g^2/(8 sigma^2)), chosen so that int_0^{t_g} f dt = theta.
// The Gaussian part integrates to sigma*sqrt(2 pi)*erf(t_g/(2 sqrt2 sigma)).
struct EnvelopeShape {
    double sigma;
    double base;
    double amplitude;
};

EnvelopeShape envelope_shape(const DragPulse& p) {
    EnvelopeShape s;
    s.sigma = p.sigma_frac * p.t_g;
    s.base = std::exp(-p.t_g * p.t_g / (8.0 * s.sigma * s.sigma));
    const double gauss_area =
        s.sigma * std::sqrt(kTwoPi) * std::erf(p.t_g / (2.0 * std::sqrt(2.0) * s.sigma));
    s.amplitude = p.theta / (gauss_area - p.t_g * s.base);
    return s;
}

void check_drive_domain(const DragPulse& p, double t) {
    if (t < 0.0 || t > p.t_g)
        throw std::domain_error("pulse: t outside [0, t_g]");
}

}  // namespace

void DragPulse::validate() const {
    if (!(t_g > 0.0)) throw std::invalid_argument("DragPulse: t_g must be > 0");
    if (!(sigma_frac > 0.0 && sigma_frac < 0.5))
        throw std::invalid_argument("DragPulse: sigma_frac must be in (0, 0.5)");
    if (!std::isfinite(theta)) throw std::invalid_argument("DragPulse: theta must be finite");
}

double envelope(const DragPulse& pulse, double t) {
    pulse.validate();
    check_drive_domain(pulse, t);
    const EnvelopeShape s = envelope_shape(pulse);
    const double u = t - pulse.t_g / 2.0;
    return s.amplitude * (std::exp(-u * u / (2.0 * s.sigma * s.sigma)) - s.base);
}

double envelope_derivative(const DragPulse& pulse, double t) {
    pulse.validate();
    check_drive_domain(pulse, t);
    const EnvelopeShape s = envelope_shape(pulse);
    const double u = t - pulse.t_g / 2.0;
    return s.amplitude * std::exp(-u * u / (2.0 * s.sigma * s.sigma)) * (-u / (s.sigma * s.sigma));
}

DragQuadratures drag_quadratures(const DragPulse& pulse, double t) {
    if (pulse.delta_anh == 0.0)
        throw std::invalid_argument("drag_quadratures: delta_anh must be nonzero");
    const double f = envelope(pulse, t);
    const double fd = envelope_derivative(pulse, t);
    const double l2 = pulse.lambda * pulse.lambda;
    const double l4 = l2 * l2;
    const double d = pulse.delta_anh;
    const double d2 = d * d;

    DragQuadratures q;
    q.omega_x = f + pulse.scale3 * (l2 - 4.0) * f * f * f / (8.0 * d2) -
                pulse.scale5 * (13.0 * l4 - 76.0 * l2 + 112.0) * f * f * f * f * f /
                    (128.0 * d2 * d2);
    q.omega_y = 0.0;
    if (pulse.first_order_y) {
        q.omega_y = -fd / d + 33.0 * (l2 - 2.0) * f * f * fd / (24.0 * d2 * d);
    }
    q.omega_rf = pulse.omega_c +
                 pulse.scale_det * ((l2 - 4.0) * f * f / (4.0 * d) -
                                    (l4 - 7.0 * l2 + 12.0) * f * f * f * f / (16.0 * d2 * d));
    return q;
}

void GateSchedule::validate() const {
    drive.validate();
    if (!(t_ramp > 0.0)) throw std::invalid_argument("GateSchedule: t_ramp must be > 0");
    if (std::abs(t_gate - (2.0 * t_ramp + drive.t_g)) > 1e-9 * std::max(1.0, t_gate))
        throw std::invalid_argument("GateSchedule: t_gate must equal 2*t_ramp + t_g");
    if (!(dt > 0.0)) throw std::invalid_argument("GateSchedule: dt must be > 0");
    if (dt > t_ramp / 50.0)
        throw std::invalid_argument("GateSchedule: dt must be <= t_ramp/50");
}

double epsilon_of_t(const GateSchedule& s, double t) {
    if (t < 0.0 || t > s.t_gate) throw std::domain_error("epsilon_of_t: t outside [0, t_gate]");
    if (t <= s.t_ramp)
        return s.epsilon_park + (s.epsilon_drive - s.epsilon_park) * (t / s.t_ramp);
    if (t <= s.drive_end()) return s.epsilon_drive;
    return s.epsilon_drive + (s.epsilon_park - s.epsilon_drive) * ((t - s.drive_end()) / s.t_ramp);
}

double integrated_epsilon(const GateSchedule& s, double t) {
    if (t < 0.0 || t > s.t_gate)
        throw std::domain_error("integrated_epsilon: t outside [0, t_gate]");
    auto ramp_integral = [&](double e0, double e1, double tau) {
        // int_0^tau of the linear ramp e0 -> e1 over [0, t_ramp]
        return e0 * tau + (e1 - e0) * tau * tau / (2.0 * s.t_ramp);
    };
    if (t <= s.t_ramp) return ramp_integral(s.epsilon_park, s.epsilon_drive, t);
    double acc = ramp_integral(s.epsilon_park, s.epsilon_drive, s.t_ramp);
    if (t <= s.drive_end()) return acc + s.epsilon_drive * (t - s.t_ramp);
    acc += s.epsilon_drive * s.drive.t_g;
    return acc + ramp_integral(s.epsilon_drive, s.epsilon_park, t - s.drive_end());
}

DriveSample drive_sample(const GateSchedule& s, double t, double accumulated_phase) {
    if (t < s.drive_start() - 1e-12 || t > s.drive_end() + 1e-12)
        throw std::domain_error("drive_sample: t outside the drive window");
    const double tau = std::clamp(t - s.drive_start(), 0.0, s.drive.t_g);
    const DragQuadratures q = drag_quadratures(s.drive, tau);
    return DriveSample{q.omega_x, q.omega_y, accumulated_phase};
}

Matrix9 z_rotation(double theta) {
    Matrix9 z = Matrix9::Zero();
    for (int q = 0; q < 3; ++q) {
        const Complex phase = std::exp(Complex(0.0, -theta * q));
        for (int r = 0; r < 3; ++r) z(bare_index(q, r), bare_index(q, r)) = phase;
    }
    return z;
}

nlohmann::json GateSchedule::to_json() const {
    return nlohmann::json{{"t_gate_ns", t_gate},
                          {"t_ramp_ns", t_ramp},
                          {"epsilon_park_ghz", epsilon_park},
                          {"epsilon_drive_ghz", epsilon_drive},
                          {"theta", drive.theta},
                          {"sigma_frac", drive.sigma_frac},
                          {"omega_c_ghz", drive.omega_c / kTwoPi},
                          {"scale3", drive.scale3},
                          {"scale5", drive.scale5},
                          {"scale_det", drive.scale_det},
                          {"theta_pre", theta_pre},
                          {"theta_post", theta_post},
                          {"dt_ns", dt}};
}

GateSchedule GateSchedule::from_json(const nlohmann::json& j) {
    static const char* kKeys[] = {"t_gate_ns",  "t_ramp_ns", "epsilon_park_ghz",
                                  "epsilon_drive_ghz", "theta", "sigma_frac",
                                  "omega_c_ghz", "scale3", "scale5",
                                  "scale_det",  "theta_pre", "theta_post", "dt_ns"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : kKeys) known = known || (it.key() == k);
        if (!known)
            throw std::invalid_argument("GateSchedule: unknown key '" + it.key() + "'");
    }
    GateSchedule s;
    s.t_gate = j.at("t_gate_ns").get<double>();
    s.t_ramp = j.at("t_ramp_ns").get<double>();
    s.epsilon_park = j.at("epsilon_park_ghz").get<double>();
    s.epsilon_drive = j.at("epsilon_drive_ghz").get<double>();
    s.drive.theta = j.at("theta").get<double>();
    s.drive.t_g = s.t_gate - 2.0 * s.t_ramp;
    s.drive.sigma_frac = j.at("sigma_frac").get<double>();
    s.drive.omega_c = j.at("omega_c_ghz").get<double>() * kTwoPi;
    s.drive.scale3 = j.at("scale3").get<double>();
    s.drive.scale5 = j.at("scale5").get<double>();
    s.drive.scale_det = j.at("scale_det").get<double>();
    s.theta_pre = j.at("theta_pre").get<double>();
    s.theta_post = j.at("theta_post").get<double>();
    s.dt = j.at("dt_ns").get<double>();
    s.validate();
    return s;
}

}  // namespace cnotsim
