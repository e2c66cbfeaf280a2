// Acceptance run: one PASS/FAIL line per criterion, details indented below.
#include "spinsq/efftwo.hpp"
#include "spinsq/lambda3.hpp"
#include "spinsq/noise.hpp"
#include "spinsq/spinframe.hpp"
#include "spinsq/studies.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace spinsq;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class... A>
void note(const char* fmt, A... a) {
    std::printf("    ");
    std::printf(fmt, a...);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double dS_of(const FluctuationSystem& sys, double* residual = nullptr) {
    const CovarianceMatrix c = solve_lyapunov(sys);
    if (residual) *residual = std::max(*residual, c.residual);
    return squeezing_report(sys, c.G).dS_min;
}

void criterion1() {
    const double dt[] = {0, 5, 10, 15, 20};
    const double pdc[] = {0, -0.2, 0, -0.4, -0.2};
    const double pI2[] = {0.25, 6.5, 25.2, 56.5, 100};
    const double pdS[] = {0.713, 0.716, 0.72, 0.72, 0.728};
    const auto t0 = std::chrono::steady_clock::now();
    bool values = true, location = true;
    for (int i = 0; i < 5; ++i) {
        const OptimizerResult r = optimize_squeezing(100.0, dt[i]);
        const bool v = std::abs(r.dS_min - pdS[i]) <= 0.01;
        const bool l = std::abs(r.delta_c - pdc[i]) <= 0.1 && std::abs(r.I2 / pI2[i] - 1.0) <= 0.1;
        values &= v;
        location &= l;
        double at = NAN;
        try {
            at = evaluate_point(effective(100.0, dt[i], pdc[i]), pI2[i]).dS_min;
        } catch (const NumericalError&) {
        }
        note("delta~=%-4g dS=%.4f (reference %.3f) dc=%+.3f (reference %+.1f) I2=%.3g (reference %g) %s%s; "
             "dS at reference point %s",
             dt[i], r.dS_min, pdS[i], r.delta_c, pdc[i], r.I2, pI2[i], v ? "" : "[value off]",
             l ? "" : "[location off]", std::isnan(at) ? "unstable" : std::to_string(at).c_str());
    }
    const double secs = seconds_since(t0);
    note("runtime %.1f s", secs);
    verdict(1, values && location && secs < 120.0,
            std::string("optimizer values ") + (values ? "within 0.01" : "OUT of tolerance") +
                ", (delta_c, I2) locations " + (location ? "within tolerance" : "OUT of tolerance"));
}

void criterion2() {
    auto run = [](double dc, Decomposition& d) {
        const EffectiveParams p = effective(100.0, 12.0, dc);
        const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, 40.0));
        try {
            d = decompose(sys);
            return true;
        } catch (const InstabilityError& e) {
            note("delta_c=%+.1f: %s", dc, e.what());
            return false;
        }
    };
    Decomposition d;
    bool ok = run(-0.2, d);
    if (ok) {
        note("reference point: dS_min=%.4f dS_f=%.4f ratio=%.2f%%", d.dS_min, d.dS_f, 100 * d.ratio);
        ok = std::abs(d.dS_min - 0.716) <= 0.005 && std::abs(d.dS_f - 0.701) <= 0.01 &&
             std::abs(100 * d.ratio - 97.9) <= 0.5;
    }
    Decomposition m;
    if (run(0.2, m))
        note("diagnostic, delta_c=+0.2: dS_min=%.4f dS_f=%.4f ratio=%.2f%%", m.dS_min, m.dS_f, 100 * m.ratio);
    verdict(2, ok, ok ? "decomposition at the reference point"
                      : "reference point (12, -0.2, 40) is not a stable steady state");
}

void criterion3() {
    auto adiabatic = [](double C) { return analytic_min_variance(C); };
    const double s2 = 1.0 / std::sqrt(2.0);
    const double a4 = adiabatic(1e4), a5 = adiabatic(1e5);
    const double full = squeezing_vs_cooperativity(10.0, 0.0, 25.2, {100.0}).front().y;
    note("adiabatic C~=1e4: %.6f (%.3f%% from 1/sqrt2)", a4, 100 * std::abs(a4 / s2 - 1));
    note("adiabatic C~=1e5: %.6f (%.3f%% from 1/sqrt2)", a5, 100 * std::abs(a5 / s2 - 1));
    note("full model C~=100 at (10, 0, 25.2): %.6f", full);
    const bool ok = std::abs(a4 / s2 - 1) <= 0.02 && std::abs(a5 / s2 - 1) <= 0.005 && full >= 0.70 && full <= 0.74;
    verdict(3, ok, "self-squeezing limit 1/sqrt(2) and large-cooperativity saturation");
}

void criterion4() {
    const EffectiveParams p = effective(100.0, 10.0, 0.0);
    const SpectrumStudy s = outgoing_study(p, 25.2, 400.0, 4001);
    note("min S_out_min = %.4f at omega = %.3g gamma0", s.min_value, s.omega_at_min);
    note("half-depth band [%.3g, %.3g], width %.4g; gamma' = %.4g; ratio %.3f", s.half_depth_lo, s.half_depth_hi,
         s.band_width, s.gamma_prime, s.band_width / s.gamma_prime);
    const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, 25.2));
    const OutgoingSpectrum far = outgoing_spectrum(sys, {1e3, 1e4, 1e5});
    note("S < 1 region starts at %.3g and is still below 1 far out: S(1e3, 1e4, 1e5) = %.9f %.9f %.9f",
         s.below_one_lo, far.s_min[0], far.s_min[1], far.s_min[2]);
    const double ratio = s.band_width / s.gamma_prime;
    const bool ok = std::abs(s.min_value - 0.88) <= 0.03 && ratio >= 1 / 1.5 && ratio <= 1.5;
    verdict(4, ok, "outgoing spectrum minimum and half-depth bandwidth vs gamma'");
}

void criterion5() {
    double worst = 0.0;
    for (double C : {10.0, 100.0, 1000.0})
        for (double r : {0.1, 0.5, 1.0, 2.0}) {
            const double a = transfer_variance(C, 5e-4, r), b = transfer_variance_lyapunov(C, 5e-4, r);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    const double eta = transfer_efficiency(100.0, 5e-4);
    const double eta_ge = transfer_efficiency(1e9, 0.5);
    note("max relative error closed form vs Lyapunov: %.2e", worst);
    note("eta(100, 1/2000) = %.6f; eta(inf, 1/2) = %.6f", eta, eta_ge);
    verdict(5, worst <= 1e-3 && std::abs(eta - 0.995) <= 1e-3 && std::abs(eta_ge - 2.0 / 3.0) <= 1e-3,
            "transfer formula, efficiency values");
}

void criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const ValidationResult v = validate_models(default_validation(Regime::open));
    const double secs = seconds_since(t0);
    for (const auto& p : v.points)
        if (static_cast<int>(p.delta_tilde) % 5 == 0)
            note("delta~=%-4g two-level %.4f three-level %.4f", p.delta_tilde, p.dS_two, p.dS_three);
    note("C~ (two-level units) = %g, max discrepancy %.4f, unstable points %d, runtime %.1f s", v.Ctilde_two_level,
         v.max_discrepancy, v.n_unstable, secs);
    verdict(6, v.max_discrepancy <= 0.02 && v.n_unstable == 0 && secs < 300.0,
            "open-regime two-level vs three-level agreement");
}

void criterion7() {
    const ValidationResult v = validate_models(default_validation(Regime::closed));
    const double s2 = 1.0 / std::sqrt(2.0);
    note("Gamma_p/gamma0 = %g, corrected two-level min %.4f, three-level min %.4f, max discrepancy %.4f, "
         "three-level unstable points %d",
         v.options.Gamma_p_over_gamma0, v.min_two, v.min_three, v.max_discrepancy, v.n_unstable);
    const bool two = v.min_two < s2 && std::abs(v.min_two - 0.65) <= 0.03;
    const bool three = v.min_three < s2 && std::abs(v.min_three - 0.65) <= 0.03;
    const bool agree = v.max_discrepancy <= 0.02;
    verdict(7, two && three && agree,
            std::string("closed regime: corrected two-level ") + (two ? "reaches" : "misses") +
                " 0.65, three-level " + (three ? "reaches" : "misses") + " 0.65, models " +
                (agree ? "agree" : "disagree"));
}

void criterion8() {
    std::vector<std::pair<std::string, bool>> checks;
    double res = 0.0;

    // residuals over a spread of solves
    for (const auto& q : std::vector<std::array<double, 3>>{{0, 0, .25}, {5, -.2, 6.5}, {10, 0, 25.2}, {12, .2, 40}}) {
        const EffectiveParams p = effective(100.0, q[0], q[1]);
        const SteadyState2L s = steady_state(p, q[2]);
        dS_of(fluctuation_system_5(p, s), &res);
        dS_of(adiabatic_system(p, s), &res);
    }
    for (double dt : {0.0, 10.0, 20.0}) {
        const ValidationOptions o = default_validation(Regime::open);
        ThreeLevelParams t;
        (void)t;
        validate_point(o, dt);
    }
    {
        ThreeLevelParams t;
        t.gamma0 = 1e-3;
        t.kappa = 2.0;
        t.Omega1 = std::sqrt(10.0);
        t.g = std::sqrt(2.0 * 2.0 * 100.0 / t.N);
        t.Lambda2 = t.N * t.gamma0;
        t.Delta1 = 100.0 + 0.5 * (0.01 - 0.1);
        t.Delta2 = 100.0 - 0.5 * (0.01 - 0.1);
        dS_of(fluctuation_system_10(t, steady_state_at_field(t, 0.01)), &res);
    }
    note("max Lyapunov residual %.2e", res);
    checks.push_back({"residual", res <= 1e-10});

    double pars = 0.0;
    for (const auto& q : std::vector<std::array<double, 3>>{{10, 0, 25.2}, {12, .2, 40}}) {
        const EffectiveParams p = effective(100.0, q[0], q[1]);
        const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, q[2]));
        const MatC G = solve_lyapunov(sys).G;
        pars = std::max(pars, (integrate_spectrum(sys.B, sys.D) - G).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff());
    }
    note("Parseval relative error %.2e", pars);
    checks.push_back({"parseval", pars <= 1e-6});

    EffectiveParams e = effective(0.0, 0.0, 0.0);
    e.tau = 2.0;
    const FluctuationSystem empty = fluctuation_system_5(e, steady_state(e, 0.0));
    const double aa = solve_lyapunov(empty).G(0, 0).real() / e.tau;
    note("empty cavity <dA2 dA2+> * tau = %.15f", aa * e.tau);
    checks.push_back({"empty-cavity", std::abs(aa * e.tau - 1.0) <= 1e-12});
    double dev = 0.0;
    const OutgoingSpectrum o = outgoing_spectrum(empty, linspace(0.0, 1e5, 101));
    for (std::size_t i = 0; i < o.omega.size(); ++i)
        dev = std::max({dev, std::abs(o.s_min[i] - 1.0), std::abs(o.s_max[i] - 1.0)});
    note("empty cavity outgoing spectrum max |S - 1| = %.2e", dev);
    checks.push_back({"vacuum-spectrum", dev <= 1e-12});

    auto unit = [](int i, int j) {
        MatC m = MatC::Zero(2, 2);
        m(i - 1, j - 1) = 1.0;
        return m;
    };
    double ein = 0.0;
    for (double l1 : {0.0, 0.3}) {
        EffectiveParams p = effective(100.0, 7.0, 0.1);
        p.lambda1 = l1;
        p.lambda2 = 1.0 - l1;
        const SteadyState2L s = steady_state(p, 9.0);
        MatC means(2, 2);
        means << p.N * (0.5 - s.s_z), p.N * s.s_minus, p.N * s.s_plus, p.N * (0.5 + s.s_z);
        const MatC E = einstein_diffusion({unit(1, 2), unit(2, 1), 0.5 * (unit(2, 2) - unit(1, 1))},
                                          two_level_dissipator(1.0, p.lambda1, p.lambda2), means);
        ein = std::max(ein, (E - MatC(diffusion_atomic(p, s))).cwiseAbs().maxCoeff() / p.N);
    }
    note("Einstein relations vs tabulated atomic diffusion: max entry error %.2e (units of N gamma0)", ein);
    checks.push_back({"einstein", ein <= 1e-12});

    auto outputs = [](double N, double tau) {
        EffectiveParams p = effective(100.0, 12.0, 0.2);
        p.N = N;
        p.tau = tau;
        const FluctuationSystem sys = fluctuation_system_5(p, steady_state(p, 40.0));
        const Decomposition d = decompose(sys);
        const OutgoingSpectrum o = outgoing_spectrum(sys, {0.0, 30.0, 300.0});
        return std::vector<double>{d.dS_min, d.dS_f, o.s_min[0], o.s_min[1], o.s_max[2]};
    };
    const auto ref = outputs(1e6, 1.0);
    double inv = 0.0;
    for (auto [N, tau] : {std::pair{4e6, 1.0}, {1e6, 2.0}, {2.5e5, 0.5}}) {
        const auto o2 = outputs(N, tau);
        for (std::size_t i = 0; i < ref.size(); ++i) inv = std::max(inv, std::abs(o2[i] / ref[i] - 1.0));
    }
    note("N / tau rescaling: max relative change %.2e", inv);
    checks.push_back({"rescaling", inv <= 1e-6});

    const EffectiveParams c = effective(0.0, 0.0, 0.0);
    const double css = dS_of(fluctuation_system_5(c, steady_state(c, 0.0)));
    note("coherent spin state dS_min - 1 = %.2e", css - 1.0);
    checks.push_back({"css", std::abs(css - 1.0) <= 1e-12});

    bool ok = true;
    std::string failed;
    for (const auto& [n, v] : checks)
        if (!v) {
            ok = false;
            failed += " " + n;
        }
    verdict(8, ok, ok ? "property suite" : "property suite, failing:" + failed);
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8};
    for (std::size_t i = 0; i < all.size(); ++i) {
        try {
            all[i]();
        } catch (const std::exception& e) {
            verdict(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, all.size());
    return failures == 0 ? 0 : 1;
}
