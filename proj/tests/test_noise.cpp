#include "doctest.h"
#include "spinsq/efftwo.hpp"
#include "spinsq/noise.hpp"
#include "spinsq/spinframe.hpp"
#include "spinsq/studies.hpp"

#include <cmath>
#include <random>

using namespace spinsq;
using doctest::Approx;

namespace {

// Lyapunov solution through the eigenbasis of B.
MatC eigen_lyapunov(const MatC& B, const MatC& D) {
    Eigen::ComplexEigenSolver<MatC> es(B);
    const MatC V = es.eigenvectors();
    const VecC l = es.eigenvalues();
    const MatC Vi = V.inverse();
    MatC Dt = Vi * D * Vi.adjoint();
    for (int i = 0; i < Dt.rows(); ++i)
        for (int j = 0; j < Dt.cols(); ++j) Dt(i, j) /= l(i) + std::conj(l(j));
    return V * Dt * V.adjoint();
}

double rel(const MatC& a, const MatC& b) { return (a - b).norm() / b.norm(); }

FluctuationSystem table_point(double db, double dc, double I2) {
    const EffectiveParams p = effective(100.0, db, dc);
    return fluctuation_system_5(p, steady_state(p, I2));
}

}  // namespace

TEST_CASE("lyapunov: scalar balance") {
    const MatC B = MatC::Identity(2, 2);
    const MatC D = 2.0 * MatC::Identity(2, 2);
    CHECK(rel(lyapunov(B, D), MatC::Identity(2, 2)) < 1e-14);
}

TEST_CASE("lyapunov: random stable systems against the eigenbasis solution") {
    std::mt19937 rng(7);
    std::normal_distribution<double> d;
    for (int n : {3, 5, 10}) {
        MatC A(n, n), F(n, n);
        for (int i = 0; i < n * n; ++i) {
            A(i) = cplx(d(rng), d(rng));
            F(i) = cplx(d(rng), d(rng));
        }
        const double shift = A.eigenvalues().real().cwiseAbs().maxCoeff() + 0.5;
        const MatC B = A + shift * MatC::Identity(n, n);
        const MatC D = F * F.adjoint();
        double res = 1.0;
        const MatC G = lyapunov(B, D, &res);
        CHECK(res < 1e-12);
        CHECK(rel(G, eigen_lyapunov(B, D)) < 1e-9);
    }
}

TEST_CASE("lyapunov: unstable and singular drift") {
    MatC B = MatC::Identity(2, 2);
    B(1, 1) = -0.5;
    CHECK_THROWS_AS(lyapunov(B, MatC::Identity(2, 2)), InstabilityError);
    MatC S = MatC::Zero(2, 2);
    S(0, 0) = cplx(0.0, 1.0);
    S(1, 1) = 1.0;
    CHECK_THROWS_AS(check_stability(S), InstabilityError);
    MatC T = MatC::Identity(2, 2);
    T(1, 1) = 1e-15;
    CHECK_THROWS_AS(check_stability(T), SingularityError);
}

TEST_CASE("residual on the tabulated optimal operating points") {
    const double pts[][3] = {{0, 0, 0.25}, {5, -0.2, 6.5}, {10, 0, 25.2}, {20, -0.2, 100}};
    for (const auto& q : pts) {
        const CovarianceMatrix c = solve_lyapunov(table_point(q[0], q[1], q[2]));
        CHECK(c.residual <= 1e-10);
    }
}

TEST_CASE("Lorentzian") {
    const double gp = 3.0, v = 0.7;
    const MatC B = MatC::Constant(1, 1, gp);
    const MatC D = MatC::Constant(1, 1, 2.0 * gp * v);
    for (double w : {0.0, 1.0, 10.0})
        CHECK(spectrum_at(B, D, w)(0, 0).real() == Approx(2.0 * gp * v / (gp * gp + w * w)));
    CHECK(integrate_spectrum(B, D)(0, 0).real() == Approx(v).epsilon(1e-9));
}

TEST_CASE("Parseval: integrated spectrum equals the covariance") {
    for (const auto& sys : {table_point(10, 0, 25.2), table_point(12, 0.2, 40)}) {
        const MatC G = solve_lyapunov(sys).G;
        const MatC Gq = integrate_spectrum(sys.B, sys.D);
        CHECK(rel(Gq, G) < 1e-6);
    }
}

TEST_CASE("empty cavity") {
    EffectiveParams p = effective(0.0, 0.0, 0.0);
    p.tau = 2.0;
    const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, 0.0));
    const MatC G = solve_lyapunov(sys).G;
    CHECK(G(0, 0).real() / p.tau == Approx(1.0 / p.tau).epsilon(1e-12));
    const OutgoingSpectrum o = outgoing_spectrum(sys, linspace(0.0, 5e4, 11));
    for (std::size_t i = 0; i < o.omega.size(); ++i) {
        CHECK(o.s_min[i] == Approx(1.0).epsilon(1e-12));
        CHECK(o.s_max[i] == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("empty cavity passes squeezed input through") {
    EffectiveParams p = effective(0.0, 0.0, 0.0);
    p.squeeze = {0.6, 0.0};
    const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, 0.0));
    const OutgoingSpectrum o = outgoing_spectrum(sys, {0.0, 100.0, 1e4});
    for (double s : o.s_min) CHECK(s == Approx(std::exp(-1.2)).epsilon(1e-12));
    for (double s : o.s_max) CHECK(s == Approx(std::exp(1.2)).epsilon(1e-12));
}

TEST_CASE("transfer point agrees with the closed form") {
    for (double C : {10.0, 100.0, 1000.0})
        for (double r : {0.1, 0.5, 1.0, 2.0})
            CHECK(transfer_variance_lyapunov(C, 5e-4, r) == Approx(transfer_variance(C, 5e-4, r)).epsilon(1e-6));
}

TEST_CASE("decompose") {
    const FluctuationSystem sys = table_point(12, 0.2, 40);
    const Decomposition d = decompose(sys);
    CHECK(rel(d.field.G + d.atomic.G, d.total.G) < 1e-10);
    CHECK(d.dS_f + d.dS_atomic == Approx(d.dS_min).epsilon(1e-9));
    CHECK(d.ratio > 0.9);

    FluctuationSystem quiet = sys;
    quiet.D = sys.diffusion_of(Source::field);
    CHECK(decompose(quiet).dS_atomic == 0.0);
}
