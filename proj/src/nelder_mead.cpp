#include "cnotsim/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cnotsim {

namespace {

Eigen::VectorXd clamped(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, const NelderMeadOptions& options) {
    const int n = static_cast<int>(x0.size());
    if (lower.size() != n || upper.size() != n)
        throw std::invalid_argument("nelder_mead: bound dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (!(lower(i) < upper(i)))
            throw std::invalid_argument("nelder_mead: lower must be < upper");

    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return objective(x);
    };

    // Initial simplex: x0 plus per-coordinate steps scaled by the bound range.
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> fv;
    pts.push_back(clamped(x0, lower, upper));
    fv.push_back(eval(pts[0]));
    for (int i = 0; i < n && evals < options.max_evals; ++i) {
        Eigen::VectorXd p = pts[0];
        const double step = options.initial_step * (upper(i) - lower(i));
        p(i) = (p(i) + step <= upper(i)) ? p(i) + step : p(i) - step;
        pts.push_back(clamped(p, lower, upper));
        fv.push_back(eval(pts.back()));
    }

    NelderMeadResult best{pts[0], fv[0], evals, false};
    auto track_best = [&](const Eigen::VectorXd& x, double f) {
        if (f < best.f) {
            best.x = x;
            best.f = f;
        }
    };
    for (size_t i = 0; i < pts.size(); ++i) track_best(pts[i], fv[i]);
    if (static_cast<int>(pts.size()) < n + 1) {
        best.evaluations = evals;
        return best;  // budget exhausted while building the simplex
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<int> order(n + 1);
    while (evals < options.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fv[a] < fv[b]; });
        {
            std::vector<Eigen::VectorXd> p2(n + 1);
            std::vector<double> f2(n + 1);
            for (int i = 0; i <= n; ++i) {
                p2[i] = pts[order[i]];
                f2[i] = fv[order[i]];
            }
            pts.swap(p2);
            fv.swap(f2);
        }

        double diam = 0.0;
        for (int i = 1; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
        if (diam < options.x_tol && std::abs(fv[n] - fv[0]) < options.f_tol) {
            best.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd xr = clamped(centroid + alpha * (centroid - pts[n]), lower, upper);
        const double fr = eval(xr);
        track_best(xr, fr);
        if (fr < fv[0]) {
            if (evals < options.max_evals) {
                const Eigen::VectorXd xe =
                    clamped(centroid + gamma * (centroid - pts[n]), lower, upper);
                const double fe = eval(xe);
                track_best(xe, fe);
                if (fe < fr) {
                    pts[n] = xe;
                    fv[n] = fe;
                    continue;
                }
            }
            pts[n] = xr;
            fv[n] = fr;
            continue;
        }
        if (fr < fv[n - 1]) {
            pts[n] = xr;
            fv[n] = fr;
            continue;
        }
        if (evals >= options.max_evals) break;
        const Eigen::VectorXd xc = clamped(centroid + rho * (pts[n] - centroid), lower, upper);
        const double fc = eval(xc);
        track_best(xc, fc);
        if (fc < fv[n]) {
            pts[n] = xc;
            fv[n] = fc;
            continue;
        }
        for (int i = 1; i <= n && evals < options.max_evals; ++i) {
            pts[i] = clamped(pts[0] + sigma * (pts[i] - pts[0]), lower, upper);
            fv[i] = eval(pts[i]);
            track_best(pts[i], fv[i]);
        }
    }
    best.evaluations = evals;
    return best;
}

}  // namespace cnotsim
