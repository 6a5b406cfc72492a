#include "cnotsim/fidelity.hpp"

#include <cmath>
#include <stdexcept>

#include "cnotsim/nelder_mead.hpp"
#include "cnotsim/propagator.hpp"

namespace cnotsim {

double state_fidelity(const Matrix4& u, const TargetGate& target, const Vector4c& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("state_fidelity: psi must be normalized");
    const Complex overlap = psi.dot(target.matrix.adjoint() * u * psi);
    return std::norm(overlap);
}

double trace_fidelity(const Matrix4& u, const TargetGate& target) {
    const double tr_uu = (u * u.adjoint()).trace().real();
    const Complex tr_tu = (target.matrix.adjoint() * u).trace();
    return (tr_uu + std::norm(tr_tu)) / 20.0;
}

ZAngleResult optimize_z_angles(const Matrix9& u_frame) {
    const TargetGate target = TargetGate::cnot_on_qubit();
    const Matrix4 u = project_computational(u_frame, 0.0, 0.0);

    // Tr(u u^dag) is invariant under the diagonal z-phases, so only the trace
    // term depends on the angles. qubit quantum number of |00,01,10,11>:
    static const int kQ[4] = {0, 0, 1, 1};
    const double tr_uu = (u * u.adjoint()).trace().real();
    auto fidelity_at = [&](double pre, double post) {
        Complex tr(0.0, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Complex t = target.matrix(i, j);
                if (t == Complex(0.0, 0.0)) continue;
                tr += std::conj(t) * u(i, j) *
                      std::exp(Complex(0.0, -(kQ[i] * post + kQ[j] * pre)));
            }
        return (tr_uu + std::norm(tr)) / 20.0;
    };

    double best_pre = 0.0, best_post = 0.0, best_f = -1.0;
    const int n = 64;
    for (int a = 0; a < n; ++a) {
        const double post = -M_PI + kTwoPi * a / n;
        for (int b = 0; b < n; ++b) {
            const double pre = -M_PI + kTwoPi * b / n;
            const double f = fidelity_at(pre, post);
            if (f > best_f) {
                best_f = f;
                best_pre = pre;
                best_post = post;
            }
        }
    }

    Eigen::VectorXd x0(2), lo(2), hi(2);
    x0 << best_pre, best_post;
    lo << best_pre - kTwoPi / n, best_post - kTwoPi / n;
    hi << best_pre + kTwoPi / n, best_post + kTwoPi / n;
    NelderMeadOptions opts;
    opts.max_evals = 400;
    opts.x_tol = 1e-12;
    opts.f_tol = 1e-15;
    opts.initial_step = 0.25;
    const NelderMeadResult r = nelder_mead(
        [&](const Eigen::VectorXd& x) { return -fidelity_at(x(0), x(1)); }, x0, lo, hi, opts);

    auto wrap = [](double a) {
        a = std::fmod(a + M_PI, kTwoPi);
        if (a < 0.0) a += kTwoPi;
        return a - M_PI;
    };
    return ZAngleResult{wrap(r.x(0)), wrap(r.x(1)), -r.f};
}

}  // namespace cnotsim
