#include "cnotsim/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cnotsim {

void DeviceParams::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("DeviceParams: delta must be > 0");
    if (!(omega > 0.0)) throw std::invalid_argument("DeviceParams: omega must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("DeviceParams: g must be >= 0");
    if (!std::isfinite(epsilon) || !std::isfinite(omega) || !std::isfinite(delta) ||
        !std::isfinite(g)) {
        throw std::invalid_argument("DeviceParams: all parameters must be finite");
    }
}

RealMatrix9 build_h0(const DeviceParams& params) {
    params.validate();
    const double eq[3] = {0.0, params.epsilon, 2.0 * params.epsilon - params.delta};
    const double er[3] = {0.0, params.omega, 2.0 * params.omega};
    RealMatrix9 h = RealMatrix9::Zero();
    for (int q = 0; q < 3; ++q)
        for (int r = 0; r < 3; ++r)
            h(bare_index(q, r), bare_index(q, r)) = kTwoPi * (eq[q] + er[r]);
    return h;
}

RealMatrix9 build_drive_operator() {
    const double s2 = std::sqrt(2.0);
    Eigen::Matrix3d x;
    x << 0, 1, 0,
         1, 0, s2,
         0, s2, 0;
    RealMatrix9 op = RealMatrix9::Zero();
    for (int q = 0; q < 3; ++q)
        for (int qp = 0; qp < 3; ++qp)
            for (int r = 0; r < 3; ++r)
                op(bare_index(qp, r), bare_index(q, r)) = x(qp, q);
    return op;
}

RealMatrix9 build_hint(const DeviceParams& params) {
    const double s2 = std::sqrt(2.0);
    // Y = [[0,-i,0],[i,0,-sqrt2 i],[0,sqrt2 i,0]]; Y (x) Y is real.
    Eigen::Matrix3cd y;
    const Complex i(0.0, 1.0);
    y << 0, -i, 0,
         i, 0, -s2 * i,
         0, s2 * i, 0;
    RealMatrix9 h;
    for (int q = 0; q < 3; ++q)
        for (int qp = 0; qp < 3; ++qp)
            for (int r = 0; r < 3; ++r)
                for (int rp = 0; rp < 3; ++rp)
                    h(bare_index(qp, rp), bare_index(q, r)) =
                        kTwoPi * params.g * (y(qp, q) * y(rp, r)).real();
    return h;
}

}  // namespace cnotsim
