#ifndef CNOTSIM_FIDELITY_HPP
#define CNOTSIM_FIDELITY_HPP

#include "cnotsim/model.hpp"

namespace cnotsim {

// The conditioned-NOT target SWAP*CNOT*SWAP in |qr> order: the resonator state
// controls a NOT on the qubit.
struct TargetGate {
    Matrix4 matrix = (Matrix4() << 1, 0, 0, 0,
                                   0, 0, 0, 1,
                                   0, 0, 1, 0,
                                   0, 1, 0, 0).finished();
    static TargetGate cnot_on_qubit() { return TargetGate{}; }
};

// |<psi|target^dag u|psi>|^2. Throws std::invalid_argument if psi is not
// normalized to 1e-9.
double state_fidelity(const Matrix4& u, const TargetGate& target, const Vector4c& psi);

// [Tr(u u^dag) + |Tr(target^dag u)|^2] / 20 - the Hilbert-space average of
// state_fidelity over the 4-dimensional computational subspace. Valid for
// non-unitary (leaky) u.
double trace_fidelity(const Matrix4& u, const TargetGate& target);

struct ZAngleResult {
    double theta_pre;   // rad, in [-pi, pi)
    double theta_post;  // rad, in [-pi, pi)
    double fidelity;    // best trace fidelity
};

// Maximizes trace_fidelity of P*Z(theta_post)*u_frame*Z(theta_pre)*P^dag over
// the two virtual z-angles: 64x64 coarse grid, then local refinement to 1e-10.
// Deterministic for a given u_frame.
ZAngleResult optimize_z_angles(const Matrix9& u_frame);

}  // namespace cnotsim

#endif
