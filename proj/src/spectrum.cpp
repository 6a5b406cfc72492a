#include "cnotsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnotsim {

double LabeledSpectrum::energy(int q, int r) const {
    for (int k = 0; k < 9; ++k)
        if (labels[k].q == q && labels[k].r == r) return energies[k];
    throw std::logic_error("LabeledSpectrum: label not found");
}

double LabeledSpectrum::overlap(int q, int r) const {
    for (int k = 0; k < 9; ++k)
        if (labels[k].q == q && labels[k].r == r) return overlaps[k];
    throw std::logic_error("LabeledSpectrum: label not found");
}

// Shortest-augmenting-path assignment (minimizes cost = -weight), O(n^3).
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight) {
    const int n = static_cast<int>(weight.rows());
    const double kInf = std::numeric_limits<double>::infinity();
    // 1-based potentials, p[j] = row matched to column j
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_of_col(n);
    for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
    return row_of_col;
}

namespace {

struct Decomposition {
    std::array<double, 9> energies;  // ascending
    RealMatrix9 vecs;                // column k pairs with energies[k]
};

Decomposition decompose(const DeviceParams& params) {
    const RealMatrix9 h = build_h0(params) + build_hint(params);
    Eigen::SelfAdjointEigenSolver<RealMatrix9> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigendecomposition failed");
    Decomposition d;
    for (int k = 0; k < 9; ++k) d.energies[k] = es.eigenvalues()(k);
    d.vecs = es.eigenvectors();
    return d;
}

double assignment_total(const Eigen::MatrixXd& w, const std::vector<int>& row_of_col) {
    double t = 0.0;
    for (int j = 0; j < static_cast<int>(row_of_col.size()); ++j) t += w(row_of_col[j], j);
    return t;
}

// Bare labels by globally optimal overlap assignment; throws AssignmentAmbiguous
// when the best assignment is both low-confidence and essentially tied with a
// competitor obtained by swapping two labels.
std::array<BareLabel, 9> assign_bare(const RealMatrix9& vecs, std::array<double, 9>* overlaps) {
    Eigen::MatrixXd w = vecs.array().square();  // w(bare, k)
    std::vector<int> row_of_col = max_weight_assignment(w);
    double min_overlap = 1.0;
    for (int k = 0; k < 9; ++k) min_overlap = std::min(min_overlap, w(row_of_col[k], k));
    if (min_overlap < 0.5) {
        const double best = assignment_total(w, row_of_col);
        for (int a = 0; a < 9; ++a) {
            for (int b = a + 1; b < 9; ++b) {
                std::vector<int> alt = row_of_col;
                std::swap(alt[a], alt[b]);
                if (best - assignment_total(w, alt) < 1e-9)
                    throw AssignmentAmbiguous(
                        "labeled_spectrum: degenerate dressed levels, bare labels ambiguous");
            }
        }
    }
    std::array<BareLabel, 9> labels;
    for (int k = 0; k < 9; ++k) {
        labels[k] = BareLabel{row_of_col[k] / 3, row_of_col[k] % 3};
        if (overlaps) (*overlaps)[k] = w(row_of_col[k], k);
    }
    return labels;
}

// Propagates labels to a neighboring grid point by maximum eigenvector overlap.
std::array<BareLabel, 9> continue_labels(const RealMatrix9& prev_vecs,
                                         const std::array<BareLabel, 9>& prev_labels,
                                         const RealMatrix9& vecs) {
    const Eigen::MatrixXd w = (prev_vecs.transpose() * vecs).array().square();
    const std::vector<int> prev_of_cur = max_weight_assignment(w);
    std::array<BareLabel, 9> labels;
    for (int k = 0; k < 9; ++k) labels[k] = prev_labels[prev_of_cur[k]];
    return labels;
}

double labeled_energy(const std::array<BareLabel, 9>& labels, const std::array<double, 9>& e,
                      int q, int r) {
    for (int k = 0; k < 9; ++k)
        if (labels[k].q == q && labels[k].r == r) return e[k];
    throw std::logic_error("spectrum: label not found");
}

SensitivityPoint make_point(const DeviceParams& p, const std::array<BareLabel, 9>& labels,
                            const std::array<double, 9>& e) {
    const double e00 = labeled_energy(labels, e, 0, 0);
    const double e01 = labeled_energy(labels, e, 0, 1);
    const double e10 = labeled_energy(labels, e, 1, 0);
    const double e11 = labeled_energy(labels, e, 1, 1);
    const double e21 = labeled_energy(labels, e, 2, 1);
    SensitivityPoint s;
    s.detuning = p.epsilon - p.omega;
    s.coupling = p.g;
    s.s_c = std::abs((e11 - e01) - (e10 - e00)) / kTwoPi;
    s.s_l = std::abs((e21 - e11) - (e11 - e01)) / kTwoPi;
    return s;
}

// Shared tracked sweep: device(i) describes the grid, seed is the index whose
// labels come from the bare assignment; labels continue outward from there.
template <typename MakeDevice, typename Visit>
void tracked_sweep(int n, int seed, MakeDevice&& device_at, Visit&& visit) {
    const Decomposition seed_dec = decompose(device_at(seed));
    std::array<double, 9> seed_ov;
    const std::array<BareLabel, 9> seed_labels = assign_bare(seed_dec.vecs, &seed_ov);
    visit(seed, device_at(seed), seed_labels, seed_dec.energies, seed_dec.vecs);

    for (int dir : {+1, -1}) {
        RealMatrix9 prev_vecs = seed_dec.vecs;
        std::array<BareLabel, 9> prev_labels = seed_labels;
        for (int i = seed + dir; i >= 0 && i < n; i += dir) {
            const DeviceParams p = device_at(i);
            const Decomposition d = decompose(p);
            const std::array<BareLabel, 9> labels = continue_labels(prev_vecs, prev_labels, d.vecs);
            visit(i, p, labels, d.energies, d.vecs);
            prev_vecs = d.vecs;
            prev_labels = labels;
        }
    }
}

int seed_index_by_magnitude(const std::vector<double>& values, bool prefer_positive) {
    int seed = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        const double a = std::abs(values[i]), b = std::abs(values[seed]);
        if (a > b + 0.0 || (a == b && prefer_positive && values[i] > values[seed])) seed = i;
    }
    return seed;
}

void check_grid(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
    for (double v : grid)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite grid value");
}

}  // namespace

LabeledSpectrum labeled_spectrum(const DeviceParams& params) {
    const Decomposition d = decompose(params);
    LabeledSpectrum spec;
    spec.energies = d.energies;
    spec.labels = assign_bare(d.vecs, &spec.overlaps);
    return spec;
}

std::pair<double, double> transition_frequencies(const LabeledSpectrum& spec) {
    return {spec.energy(1, 1) - spec.energy(0, 1), spec.energy(1, 0) - spec.energy(0, 0)};
}

SensitivityPoint sensitivities(const DeviceParams& params) {
    const Decomposition d = decompose(params);
    const std::array<BareLabel, 9> labels = assign_bare(d.vecs, nullptr);
    return make_point(params, labels, d.energies);
}

std::vector<SensitivityPoint> sweep_detuning(const DeviceParams& base,
                                             const std::vector<double>& grid) {
    check_grid(grid, "sweep_detuning");
    const int n = static_cast<int>(grid.size());
    const int seed = seed_index_by_magnitude(grid, /*prefer_positive=*/true);
    std::vector<SensitivityPoint> out(n);
    auto device_at = [&](int i) {
        DeviceParams p = base;
        p.epsilon = base.omega + grid[i];
        return p;
    };
    try {
        tracked_sweep(n, seed, device_at,
                      [&](int i, const DeviceParams& p, const std::array<BareLabel, 9>& labels,
                          const std::array<double, 9>& e, const RealMatrix9&) {
                          out[i] = make_point(p, labels, e);
                      });
    } catch (const AssignmentAmbiguous&) {
        // Seed labeling failed; record failure per-row rather than aborting the sweep.
        for (int i = 0; i < n; ++i) {
            out[i] = SensitivityPoint{grid[i], base.g, std::nan(""), std::nan(""), false};
        }
    }
    return out;
}

std::vector<SensitivityPoint> sweep_coupling(const DeviceParams& base,
                                             const std::vector<double>& grid) {
    check_grid(grid, "sweep_coupling");
    const int n = static_cast<int>(grid.size());
    // Seed where the system is closest to uncoupled.
    int seed = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(grid[i]) < std::abs(grid[seed])) seed = i;
    std::vector<SensitivityPoint> out(n);
    auto device_at = [&](int i) {
        DeviceParams p = base;
        p.g = grid[i];
        return p;
    };
    try {
        tracked_sweep(n, seed, device_at,
                      [&](int i, const DeviceParams& p, const std::array<BareLabel, 9>& labels,
                          const std::array<double, 9>& e, const RealMatrix9&) {
                          out[i] = make_point(p, labels, e);
                      });
    } catch (const AssignmentAmbiguous&) {
        for (int i = 0; i < n; ++i) {
            out[i] = SensitivityPoint{base.epsilon - base.omega, grid[i], std::nan(""),
                                      std::nan(""), false};
        }
    }
    return out;
}

LabeledSpectrum adiabatic_labeled_spectrum(const DeviceParams& params) {
    params.validate();
    const double det_target = params.epsilon - params.omega;
    const double det_far = std::max(det_target + 3.0, 3.0);
    const int n = 61;  // 50 MHz continuation steps from the far-detuned seed
    LabeledSpectrum out{};
    auto device_at = [&](int i) {
        DeviceParams p = params;
        p.epsilon = params.omega + det_far + (det_target - det_far) * (double(i) / (n - 1));
        return p;
    };
    tracked_sweep(n, 0, device_at,
                  [&](int i, const DeviceParams&, const std::array<BareLabel, 9>& labels,
                      const std::array<double, 9>& e, const RealMatrix9& vecs) {
                      if (i != n - 1) return;
                      out.labels = labels;
                      out.energies = e;
                      for (int k = 0; k < 9; ++k) {
                          const double v = vecs(bare_index(labels[k].q, labels[k].r), k);
                          out.overlaps[k] = v * v;
                      }
                  });
    return out;
}

double dressed_anharmonicity(const DeviceParams& base, double epsilon_drive_ghz) {
    DeviceParams p = base;
    p.epsilon = epsilon_drive_ghz;
    const LabeledSpectrum spec = adiabatic_labeled_spectrum(p);
    const double e01 = spec.energy(0, 1);
    const double e11 = spec.energy(1, 1);
    const double e21 = spec.energy(2, 1);
    return (e11 - e01) - (e21 - e11);
}

SpectrumCurve spectrum_curve(const DeviceParams& base, const std::vector<double>& epsilon_grid) {
    check_grid(epsilon_grid, "spectrum_curve");
    const int n = static_cast<int>(epsilon_grid.size());
    std::vector<double> det(n);
    for (int i = 0; i < n; ++i) det[i] = epsilon_grid[i] - base.omega;
    const int seed = seed_index_by_magnitude(det, /*prefer_positive=*/true);

    SpectrumCurve curve;
    curve.epsilon_ghz = epsilon_grid;
    curve.energies_ghz.resize(n);
    auto device_at = [&](int i) {
        DeviceParams p = base;
        p.epsilon = epsilon_grid[i];
        return p;
    };
    tracked_sweep(n, seed, device_at,
                  [&](int i, const DeviceParams&, const std::array<BareLabel, 9>& labels,
                      const std::array<double, 9>& e, const RealMatrix9&) {
                      for (int c = 0; c < 9; ++c) {
                          const BareLabel l = SpectrumCurve::kLabelOrder[c];
                          curve.energies_ghz[i][c] = labeled_energy(labels, e, l.q, l.r) / kTwoPi;
                      }
                  });
    return curve;
}

}  // namespace cnotsim
