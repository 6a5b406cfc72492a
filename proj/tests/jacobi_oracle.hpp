// Test-only eigensolver: classic cyclic Jacobi rotations for real symmetric
// matrices. Deliberately independent of Eigen's solvers so spectrum results
// can be cross-checked against a second implementation.
#ifndef CNOTSIM_TESTS_JACOBI_ORACLE_HPP
#define CNOTSIM_TESTS_JACOBI_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace testutil {

// Ascending eigenvalues of a real symmetric matrix.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100) {
    const int n = static_cast<int>(a.rows());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-26 * a.squaredNorm()) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = s;
                rot(q, p) = -s;
                a = rot.transpose() * a * rot;
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace testutil

#endif
