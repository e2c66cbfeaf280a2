#include "doctest.h"
#include "spinsq/studies.hpp"

#include <cmath>

using namespace spinsq;
using doctest::Approx;

TEST_CASE("turning points") {
    CHECK(turning_points(effective(0.0, 10.0, 0.0)).empty());
    const auto tp = turning_points(effective(100.0, 10.0, 0.0));
    REQUIRE(tp.size() == 2);
    CHECK(tp[0] < 25.2 * 1.1);
    // the derivative of the input curve changes sign at each root
    const EffectiveParams p = effective(100.0, 10.0, 0.0);
    for (double x : tp) {
        const double h = 1e-4 * x;
        const double l = input_intensity(p, x) - input_intensity(p, x - h);
        const double r = input_intensity(p, x + h) - input_intensity(p, x);
        CHECK(l * r < 0.0);
    }
    const BistabilityCurve c = bistability_curve(p, {0.0, 10.0, 20.0});
    CHECK(c.I2_in.size() == 3);
    CHECK(c.I2_in[0] == 0.0);
}

TEST_CASE("bistability threshold") {
    const double Cth = bistability_threshold(10.0, 0.0);
    CHECK(std::isfinite(Cth));
    CHECK(turning_points(effective(0.99 * Cth, 10.0, 0.0)).empty());
    CHECK(turning_points(effective(1.01 * Cth, 10.0, 0.0)).size() == 2);
}

TEST_CASE("optimizer") {
    OptimizerOptions o;
    const OptimizerResult r = optimize_squeezing(100.0, 0.0, 5e-4, o);
    CHECK(r.dS_min == Approx(0.713).epsilon(0.015));
    CHECK(std::abs(r.delta_c) < 0.1);
    CHECK(r.I2 == Approx(0.25).epsilon(0.1));
    CHECK(r.stability_margin > 0.0);
    CHECK(!r.trace.empty());
    // deterministic
    const OptimizerResult again = optimize_squeezing(100.0, 0.0, 5e-4, o);
    CHECK(again.dS_min == r.dS_min);
    CHECK(again.trace.size() == r.trace.size());

    const OptimizerResult none = optimize_squeezing(0.0, 0.0);
    CHECK(none.dS_min == Approx(1.0));
}

TEST_CASE("squeezing versus cooperativity") {
    const auto c = squeezing_vs_cooperativity(10.0, 0.0, 25.2, {1e-3, 100.0});
    // weak coupling: uncorrelated atoms, 1/(2|s|) with the single-atom Bloch vector s
    const SteadyState2L s = steady_state(effective(1e-3, 10.0, 0.0), 25.2);
    CHECK(c[0].y == Approx(0.5 / std::sqrt(std::norm(s.s_plus) + s.s_z * s.s_z)).epsilon(1e-3));
    CHECK(c[1].y >= 0.70);
    CHECK(c[1].y <= 0.74);
    const auto a = squeezing_vs_cooperativity(0.0, 0.0, 0.25, {1e4}, ModelKind::adiabatic);
    CHECK(a[0].y == Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("transfer") {
    CHECK(transfer_variance(100.0, 5e-4, 0.0) == 1.0);
    CHECK(transfer_efficiency(100.0, 5e-4) == Approx(0.995).epsilon(1e-3));
    CHECK(transfer_efficiency(1e9, 0.5) == Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(transfer_efficiency(1e12, 1e-12) == Approx(1.0));
    CHECK(transfer_efficiency(100.0, 0.5) == Approx(0.663).epsilon(1e-3));
    CHECK(transfer_efficiency(0.0, 0.5) == 0.0);
    for (double r : {0.1, 0.7, 2.0}) {
        const double eta = (1.0 - transfer_variance(100.0, 5e-4, r)) / (1.0 - std::exp(-2.0 * r));
        CHECK(eta == Approx(transfer_efficiency(100.0, 5e-4)).epsilon(1e-12));
    }
}

TEST_CASE("outgoing spectrum study") {
    const SpectrumStudy s = outgoing_study(effective(100.0, 10.0, 0.0), 25.2, 400.0, 801);
    CHECK(s.min_value < 1.0);
    CHECK(s.half_depth_lo < s.omega_at_min);
    CHECK(s.half_depth_hi > s.omega_at_min);
    CHECK(s.gamma_prime == Approx(1.0 + 4.0 * 100.0 * (1.0 + 100.0) / (2.0 * (1.0 + 100.0 + 100.8))));
}

TEST_CASE("closed-regime validation point") {
    ValidationOptions o = default_validation(Regime::closed);
    CHECK(o.Gamma_p_over_gamma0 == 100.0);
    const ValidationPoint v = validate_point(o, 0.0);
    CHECK(std::isfinite(v.dS_two));
    CHECK(v.omega_ratio > 0.0);
    CHECK(v.omega_ratio < 0.05);
}
