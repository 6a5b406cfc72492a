#ifndef CNOTSIM_MODEL_HPP
#define CNOTSIM_MODEL_HPP

#include <complex>
#include <Eigen/Dense>

namespace cnotsim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

using Complex = std::complex<double>;
using Matrix9 = Eigen::Matrix<Complex, 9, 9>;
using RealMatrix9 = Eigen::Matrix<double, 9, 9>;
using Matrix4 = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Vector4cd;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

// Basis convention: |qr> with q, r in {0,1,2}, flattened as index = 3*q + r.
constexpr int bare_index(int q, int r) { return 3 * q + r; }

// Computational subspace |00>,|01>,|10>,|11> within the 9-level space.
inline constexpr int kComputationalIndex[4] = {bare_index(0, 0), bare_index(0, 1),
                                               bare_index(1, 0), bare_index(1, 1)};

// Static device parameters. All frequencies are linear (GHz, quoted against h);
// conversion to angular frequency (rad/ns) happens once, inside the builders.
struct DeviceParams {
    double epsilon;  // qubit 0->1 transition frequency, GHz
    double omega;    // resonator frequency, GHz
    double delta;    // qubit anharmonicity, GHz
    double g;        // qubit-resonator coupling, GHz

    // Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

// One sample of the shaped drive, in angular units.
struct DriveSample {
    double amplitude_x;   // in-phase amplitude, rad/ns
    double amplitude_y;   // quadrature amplitude, rad/ns
    double carrier_phase; // accumulated carrier phase, rad
};

// Bare (uncoupled) Hamiltonian diag_q(0, eps, 2 eps - delta) (+) diag_r(0, omega, 2 omega),
// returned in rad/ns. Diagonal, hence trivially real symmetric.
RealMatrix9 build_h0(const DeviceParams& params);

// Qubit charge-type drive operator [[0,1,0],[1,0,sqrt2],[0,sqrt2,0]] tensored with
// the resonator identity. Dimensionless; the time-dependent coefficient multiplies it.
RealMatrix9 build_drive_operator();

// Interaction 2*pi*g * Y_q (x) Y_r with Y = [[0,-i,0],[i,0,-sqrt2 i],[0,sqrt2 i,0]].
// The tensor product of the two imaginary antisymmetric factors is real symmetric.
RealMatrix9 build_hint(const DeviceParams& params);

}  // namespace cnotsim

#endif
