#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cnotsim/nelder_mead.hpp"
#include "cnotsim/optimizer.hpp"
#include "cnotsim/spectrum.hpp"

using namespace cnotsim;

namespace {
const DeviceParams kDevice{7.2, 6.5, 0.2, 0.115};
}

TEST_CASE("nelder-mead recovers an 8-dimensional quadratic minimum") {
    Eigen::VectorXd target(8), lo(8), hi(8), x0(8);
    for (int i = 0; i < 8; ++i) {
        target(i) = 0.1 * i - 0.3;
        lo(i) = -2.0;
        hi(i) = 2.0;
        x0(i) = 1.0;
    }
    auto f = [&](const Eigen::VectorXd& x) { return (x - target).squaredNorm(); };
    NelderMeadOptions opts;
    opts.max_evals = 8000;
    const NelderMeadResult r = nelder_mead(f, x0, lo, hi, opts);
    CHECK(r.converged);
    CHECK((r.x - target).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(r.f < 1e-8);
}

TEST_CASE("nelder-mead is deterministic") {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -1.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(3, 3.0);
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(3, 2.0);
    auto f = [](const Eigen::VectorXd& x) {
        return std::pow(x(0) - 0.5, 2) + std::pow(x(1) + 0.25, 2) + std::abs(x(2));
    };
    const NelderMeadResult a = nelder_mead(f, x0, lo, hi);
    const NelderMeadResult b = nelder_mead(f, x0, lo, hi);
    CHECK(a.f == b.f);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("nelder-mead respects bounds") {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, 0.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 0.5);
    // unconstrained minimum at (-3, 4), outside the box
    auto f = [](const Eigen::VectorXd& x) {
        return std::pow(x(0) + 3.0, 2) + std::pow(x(1) - 4.0, 2);
    };
    NelderMeadOptions opts;
    opts.max_evals = 2000;
    const NelderMeadResult r = nelder_mead(f, x0, lo, hi, opts);
    CHECK(r.x(0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nelder-mead honors a tiny budget") {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    int calls = 0;
    auto f = [&](const Eigen::VectorXd& x) {
        ++calls;
        return x.squaredNorm();
    };
    NelderMeadOptions opts;
    opts.max_evals = 1;
    const NelderMeadResult r = nelder_mead(f, x0, lo, hi, opts);
    CHECK(calls == 1);
    CHECK(r.evaluations == 1);
    CHECK(!r.converged);
}

TEST_CASE("search space validation") {
    SearchSpace space = default_search_space(kDevice);
    CHECK_NOTHROW(space.validate());
    SearchSpace bad = space;
    bad.lower(0) = bad.upper(0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = space;
    bad.guess(1) = bad.upper(1) + 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = space;
    bad.budget = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("seeded guess sits in the stated windows") {
    const Params8 guess = seed_from_sensitivity(kDevice);
    CHECK(guess(kParamDetuning) >= 0.200);
    CHECK(guess(kParamDetuning) <= 0.250);
    CHECK(guess(kParamG) >= 0.100);
    CHECK(guess(kParamG) <= 0.125);
    CHECK(guess(kParamTRamp) == doctest::Approx(7.0));
    // carrier near the on-transition at the chosen operating point
    DeviceParams at_drive = kDevice;
    at_drive.g = guess(kParamG);
    at_drive.epsilon = kDevice.omega + guess(kParamDetuning);
    const double omega_on =
        transition_frequencies(adiabatic_labeled_spectrum(at_drive)).first / kTwoPi;
    CHECK(guess(kParamOmegaC) == doctest::Approx(omega_on).epsilon(1e-9));
}

TEST_CASE("build_schedule wires the candidate into a valid schedule") {
    Params8 p = seed_from_sensitivity(kDevice);
    const GateSchedule s = build_schedule(p, kDevice, 45.0, 0.002);
    CHECK_NOTHROW(s.validate());
    CHECK(s.drive.t_g == doctest::Approx(45.0 - 2.0 * p(kParamTRamp)));
    CHECK(s.epsilon_park == doctest::Approx(kDevice.epsilon));
    CHECK(s.epsilon_drive == doctest::Approx(kDevice.omega + p(kParamDetuning)));
    CHECK(s.drive.delta_anh < 0.0);  // dressed ladder deficit is negative here

    // carrier clamp: an absurd request lands on the conditional window edge
    Params8 far = p;
    far(kParamOmegaC) = p(kParamOmegaC) + 10.0;
    const GateSchedule clamped = build_schedule(far, kDevice, 45.0, 0.002);
    DeviceParams at_drive = kDevice;
    at_drive.g = p(kParamG);
    at_drive.epsilon = kDevice.omega + p(kParamDetuning);
    const LabeledSpectrum spec = adiabatic_labeled_spectrum(at_drive);
    const auto [omega_on, omega_off] = transition_frequencies(spec);
    const double s_c = std::abs(omega_on - omega_off);
    CHECK(clamped.drive.omega_c == doctest::Approx(omega_on + s_c / 2.0).epsilon(1e-12));
}

TEST_CASE("objective flags infeasible geometry without throwing") {
    Params8 p = seed_from_sensitivity(kDevice);
    p(kParamTRamp) = 23.0;  // t_g = 45 - 46 < 0
    CHECK(objective(p, kDevice, 45.0) == doctest::Approx(1.0));
}

TEST_CASE("tiny-budget optimization reverts to the guess") {
    SearchSpace space = default_search_space(kDevice);
    space.budget = 1;
    space.restarts = 0;
    OptimizerSettings settings;
    settings.dt_search = 0.1;  // keep the single evaluation cheap
    settings.dt_final = 0.05;
    const OptimizationRecord rec = optimize_gate(45.0, space, kDevice, settings);
    CHECK(rec.budget_exhausted);
    CHECK((rec.params - space.guess).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(rec.evaluations == 1);
    CHECK(rec.fidelity > 0.0);
    CHECK(rec.fidelity <= 1.0);
    CHECK_NOTHROW(rec.schedule.validate());
}

TEST_CASE("optimization runs are reproducible for a fixed seed") {
    SearchSpace space = default_search_space(kDevice);
    space.budget = 40;
    space.restarts = 1;
    space.seed = 7;
    OptimizerSettings settings;
    settings.dt_search = 0.1;
    settings.dt_final = 0.05;
    const OptimizationRecord a = optimize_gate(45.0, space, kDevice, settings);
    const OptimizationRecord b = optimize_gate(45.0, space, kDevice, settings);
    CHECK(a.fidelity == b.fidelity);
    CHECK((a.params - b.params).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("fidelity curve parallel execution matches sequential") {
    SearchSpace space = default_search_space(kDevice);
    space.budget = 20;
    space.restarts = 0;
    OptimizerSettings seq;
    seq.dt_search = 0.1;
    seq.dt_final = 0.05;
    OptimizerSettings par = seq;
    par.threads = 2;
    const std::vector<double> gates = {44.0, 46.0};
    const auto a = fidelity_curve(gates, space, kDevice, seq);
    const auto b = fidelity_curve(gates, space, kDevice, par);
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(a[i].fidelity == b[i].fidelity);
        CHECK((a[i].params - b[i].params).cwiseAbs().maxCoeff() == 0.0);
    }
}
