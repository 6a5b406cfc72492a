#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cnotsim/fidelity.hpp"
#include "cnotsim/model.hpp"
#include "cnotsim/pulses.hpp"
#include "cnotsim/propagator.hpp"

using namespace cnotsim;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240817);
    return gen;
}

Vector4c haar_state() {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector4c v;
    for (int i = 0; i < 4; ++i) v(i) = Complex(n(rng()), n(rng()));
    return v / v.norm();
}

Matrix4 random_contraction() {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4 a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = Complex(n(rng()), n(rng()));
    // scale below unit spectral norm so it models a leaky projected propagator
    return a * (0.9 / a.operatorNorm());
}

}  // namespace

TEST_CASE("exact trace-fidelity identities") {
    const TargetGate target = TargetGate::cnot_on_qubit();
    CHECK(trace_fidelity(target.matrix, target) == doctest::Approx(1.0).epsilon(1e-12));
    // identity gate: Tr(U U^dag) = 4, |Tr(target^dag I)| = 2 -> (4+4)/20
    CHECK(trace_fidelity(Matrix4::Identity(), target) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(trace_fidelity(Matrix4::Zero(), target) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("target gate structure") {
    const Matrix4 u = TargetGate::cnot_on_qubit().matrix;
    // resonator-controlled NOT on the qubit: 01 <-> 11, 00 and 10 fixed
    CHECK(std::abs(u(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(u(2, 2) - 1.0) < 1e-15);
    CHECK(std::abs(u(3, 1) - 1.0) < 1e-15);
    CHECK(std::abs(u(1, 3) - 1.0) < 1e-15);
    CHECK((u * u - Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("state fidelity requires a normalized state") {
    const TargetGate target = TargetGate::cnot_on_qubit();
    Vector4c psi = Vector4c::Zero();
    psi(0) = 2.0;
    CHECK_THROWS_AS(state_fidelity(Matrix4::Identity(), target, psi), std::invalid_argument);
}

TEST_CASE("trace formula equals the Haar average of state fidelities") {
    const TargetGate target = TargetGate::cnot_on_qubit();
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix4 u = random_contraction();
        const double exact = trace_fidelity(u, target);
        const int n = 20000;
        double mean = 0.0, m2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = state_fidelity(u, target, haar_state());
            const double d = f - mean;
            mean += d / (i + 1);
            m2 += d * (f - mean);
        }
        const double sem = std::sqrt(m2 / (n - 1.0) / n);
        CHECK(std::abs(mean - exact) < 4.0 * sem + 1e-12);
    }
}

TEST_CASE("z-angle optimization recovers planted angles") {
    const Matrix4 target = TargetGate::cnot_on_qubit().matrix;
    for (double pre : {0.5442, -2.1}) {
        for (double post : {-1.0915, 0.3}) {
            // u_frame = Z(-post) * embed(target) * Z(-pre): applying Z(post), Z(pre)
            // around it restores the target exactly.
            Matrix9 embed = Matrix9::Identity();
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    embed(kComputationalIndex[i], kComputationalIndex[j]) = target(i, j);
            const Matrix9 u_frame = z_rotation(-post) * embed * z_rotation(-pre);
            const ZAngleResult z = optimize_z_angles(u_frame);
            CHECK(z.fidelity == doctest::Approx(1.0).epsilon(1e-9));
            const Matrix4 restored = project_computational(u_frame, z.theta_pre, z.theta_post);
            CHECK(trace_fidelity(restored, TargetGate::cnot_on_qubit()) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("z-angle optimization is deterministic") {
    const Matrix4 target = TargetGate::cnot_on_qubit().matrix;
    Matrix9 embed = Matrix9::Identity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            embed(kComputationalIndex[i], kComputationalIndex[j]) = target(i, j);
    const Matrix9 u_frame = z_rotation(-0.4) * embed * z_rotation(0.9);
    const ZAngleResult a = optimize_z_angles(u_frame);
    const ZAngleResult b = optimize_z_angles(u_frame);
    CHECK(a.theta_pre == b.theta_pre);
    CHECK(a.theta_post == b.theta_post);
    CHECK(a.fidelity == b.fidelity);
    CHECK(a.theta_pre >= -M_PI);
    CHECK(a.theta_pre < M_PI + 1e-12);
}
