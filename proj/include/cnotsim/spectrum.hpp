#ifndef CNOTSIM_SPECTRUM_HPP
#define CNOTSIM_SPECTRUM_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "cnotsim/model.hpp"

namespace cnotsim {

// Raised when dressed levels are so degenerate that bare labels are meaningless.
struct AssignmentAmbiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BareLabel {
    int q;
    int r;
};

// Eigenvalues of H0 + Hint with a bare product label attached to each one.
struct LabeledSpectrum {
    std::array<BareLabel, 9> labels;   // labels[k] tags energies[k]
    std::array<double, 9> energies;    // rad/ns, ascending
    std::array<double, 9> overlaps;    // |<label|eigenvector>|^2, in (0,1]

    double energy(int q, int r) const;
    double overlap(int q, int r) const;
};

struct SensitivityPoint {
    double detuning;  // epsilon - omega, GHz
    double coupling;  // g, GHz
    double s_c;       // conditional control sensitivity, GHz
    double s_l;       // leakage sensitivity, GHz
    bool ok = true;   // false if labeling failed at this grid point (s_c/s_l are NaN)
};

// Maximum-total-weight one-to-one assignment of columns to rows of a square
// weight matrix (Hungarian / shortest augmenting path). Returns row_of_col.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight);

// Diagonalizes H0 + Hint and labels each eigenvector by maximum squared overlap
// with the bare states, resolved as a globally optimal assignment.
LabeledSpectrum labeled_spectrum(const DeviceParams& params);

// (omega_on, omega_off) = (E11 - E01, E10 - E00), rad/ns.
std::pair<double, double> transition_frequencies(const LabeledSpectrum& spec);

// S_c = |(E11-E01) - (E10-E00)|, S_l = |(E21-E11) - (E11-E01)|, per-point labels.
SensitivityPoint sensitivities(const DeviceParams& params);

// Sweeps vary epsilon = omega + detuning (or g) and track labels adiabatically:
// seeded from the bare assignment at the most-detuned (or least-coupled) grid
// point and continued by maximum eigenvector overlap between neighbors. Ties in
// |detuning| are broken toward positive detuning, which matches labeling the
// branches from above the resonance.
std::vector<SensitivityPoint> sweep_detuning(const DeviceParams& base,
                                             const std::vector<double>& detuning_grid);
std::vector<SensitivityPoint> sweep_coupling(const DeviceParams& base,
                                             const std::vector<double>& coupling_grid);

// Labeled energy branches along an epsilon grid, for figure reproduction.
struct SpectrumCurve {
    std::vector<double> epsilon_ghz;
    // energies_ghz[i][k]: energy of label order {00,01,10,02,11,20,12,21,22} at point i
    std::vector<std::array<double, 9>> energies_ghz;
    static constexpr std::array<BareLabel, 9> kLabelOrder = {
        BareLabel{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {1, 2}, {2, 1}, {2, 2}};
};

SpectrumCurve spectrum_curve(const DeviceParams& base, const std::vector<double>& epsilon_grid);

// Labeled spectrum at a single operating point with labels continued
// adiabatically from the far-detuned limit (epsilon well above omega), i.e. the
// branch convention of the energy-level and sensitivity figures.
LabeledSpectrum adiabatic_labeled_spectrum(const DeviceParams& params);

// Signed effective anharmonicity (E11-E01) - (E21-E11) of the driven ladder with
// the resonator on, rad/ns, evaluated at epsilon = epsilon_drive_ghz. Reduces to
// 2*pi*delta in the uncoupled limit. This is the anharmonicity the DRAG
// corrections act against at the operating point.
double dressed_anharmonicity(const DeviceParams& base, double epsilon_drive_ghz);

}  // namespace cnotsim

#endif
