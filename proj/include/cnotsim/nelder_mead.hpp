#ifndef CNOTSIM_NELDER_MEAD_HPP
#define CNOTSIM_NELDER_MEAD_HPP

#include <functional>

#include <Eigen/Dense>

namespace cnotsim {

struct NelderMeadOptions {
    int max_evals = 1000;
    double x_tol = 1e-10;       // simplex diameter for convergence
    double f_tol = 1e-12;       // function-value spread for convergence
    double initial_step = 0.1;  // per-coordinate, as a fraction of the bound range
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f;
    int evaluations;
    bool converged;  // tolerance reached within the budget
};

// Bounded derivative-free simplex minimization. Every candidate is clamped to
// [lower, upper] before evaluation, so the objective never sees an
// out-of-bounds point. Fully deterministic.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, const NelderMeadOptions& options = {});

}  // namespace cnotsim

#endif
