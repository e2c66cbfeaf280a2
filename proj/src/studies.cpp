#include "spinsq/studies.hpp"

#include "spinsq/spinframe.hpp"

#include <gsl/gsl_multimin.h>
#include <algorithm>
#include <cmath>
#include <limits>

namespace spinsq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Poly = std::vector<double>;  // ascending coefficients

Poly add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Poly mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly scale(const Poly& a, double s) {
    Poly c = a;
    for (double& x : c) x *= s;
    return c;
}

std::vector<cplx> poly_roots(Poly p) {
    while (p.size() > 1 && std::abs(p.back()) <= 1e-300) p.pop_back();
    const int n = static_cast<int>(p.size()) - 1;
    if (n < 1) return {};
    MatR comp = MatR::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[i] / p[n];
    const VecC ev = comp.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double dS_or_inf(const EffectiveParams& p, double I2, double* margin = nullptr) {
    try {
        const OperatingPoint op = evaluate_point(p, I2);
        if (margin) *margin = op.stability_margin;
        return op.dS_min;
    } catch (const NumericalError&) {
        return kInf;
    }
}

}  // namespace

EffectiveParams effective(double Ctilde, double delta_tilde, double delta_c, double rho) {
    EffectiveParams p;
    p.Ctilde = Ctilde;
    p.delta_bar = delta_tilde;
    p.delta_c = delta_c;
    p.rho = rho;
    return p;
}

OperatingPoint evaluate_point(const EffectiveParams& p, double I2) {
    OperatingPoint op;
    op.delta_tilde = p.delta_bar;
    op.delta_c = p.delta_c;
    op.I2 = I2;
    op.Ctilde = p.Ctilde;
    op.rho = p.rho;
    op.lambda1 = p.lambda1;
    op.lambda2 = p.lambda2;
    op.Gamma_p_ratio = p.Gamma_p_ratio;
    op.steady = steady_state(p, I2);
    const FluctuationSystem sys = fluctuation_system_5(p, op.steady);
    op.stability_margin = stability_margin(sys.B);
    op.dS_min = squeezing_report(sys, solve_lyapunov(sys).G).dS_min;
    return op;
}

std::vector<double> turning_points(const EffectiveParams& p0) {
    const EffectiveParams p = p0.Gamma_p_ratio > 0.0 ? assign(p0) : p0;
    const double C = p.Ctilde, db = p.delta_bar, dc = p.delta_c;
    // I2_in = x P(D) / D^2 with D = 1 + db^2 + 4x; numerator of the derivative
    const Poly X{0.0, 1.0};
    const Poly D{1.0 + db * db, 4.0};
    const Poly u = add(D, Poly{2.0 * C});
    const Poly v = add(scale(D, dc), Poly{2.0 * C * db});
    const Poly P = add(mul(u, u), mul(v, v));
    const Poly dP = add(scale(u, 2.0), scale(v, 2.0 * dc));
    const Poly num = add(add(mul(P, D), scale(mul(mul(X, dP), D), 4.0)), scale(mul(X, P), -8.0));
    std::vector<double> out;
    for (const cplx& r : poly_roots(num))
        if (std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r)) && r.real() > 0.0) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    const double s = assign_scale(p0);
    for (double& x : out) x *= s * s;
    return out;
}

BistabilityCurve bistability_curve(const EffectiveParams& p, const std::vector<double>& I2) {
    BistabilityCurve c;
    c.I2 = I2;
    for (double x : I2) c.I2_in.push_back(input_intensity(p, x));
    c.turning_points = turning_points(p);
    return c;
}

double bistability_threshold(double delta_bar, double delta_c, double C_hi) {
    auto count = [&](double C) { return turning_points(effective(C, delta_bar, delta_c)).size(); };
    if (count(C_hi) < 2) return kInf;
    double lo = 0.0, hi = C_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) >= 2 ? hi : lo) = mid;
    }
    return hi;
}

namespace {

struct NmData {
    double Ctilde, delta_tilde, rho, dc_min, dc_max;
    std::vector<std::array<double, 3>>* trace;
};

double nm_objective(const gsl_vector* v, void* params) {
    auto* d = static_cast<NmData*>(params);
    const double dc = gsl_vector_get(v, 0);
    const double I2 = std::exp(gsl_vector_get(v, 1));
    double val = kInf;
    if (dc >= d->dc_min && dc <= d->dc_max) val = dS_or_inf(effective(d->Ctilde, d->delta_tilde, dc, d->rho), I2);
    d->trace->push_back({dc, I2, val});
    return std::isfinite(val) ? val : 10.0;
}

}  // namespace

OptimizerResult optimize_squeezing(double Ctilde, double delta_tilde, double rho, const OptimizerOptions& opt) {
    OptimizerResult res;
    res.dS_min = kInf;
    const double I0 = 0.25 * (1.0 + delta_tilde * delta_tilde);
    const int n_dc = static_cast<int>(std::lround((opt.dc_max - opt.dc_min) / opt.dc_step)) + 1;
    for (int i = 0; i < n_dc; ++i) {
        const double dc = opt.dc_min + i * opt.dc_step;
        const EffectiveParams p = effective(Ctilde, delta_tilde, dc, rho);
        std::vector<double> grid;
        for (int k = 0; k < opt.n_I2; ++k)
            grid.push_back(I0 * std::pow(opt.I2_span, -1.0 + 2.0 * k / (opt.n_I2 - 1)));
        // fluctuations peak just below the lower turning point
        const auto tp = turning_points(p);
        if (!tp.empty())
            for (double e : {0.3, 0.1, 0.03, 0.01, 0.003, 0.001}) grid.push_back(tp.front() * (1.0 - e));
        for (double I2 : grid) {
            double margin = 0.0;
            const double v = dS_or_inf(p, I2, &margin);
            res.trace.push_back({dc, I2, v});
            if (v < res.dS_min) {
                res.dS_min = v;
                res.delta_c = dc;
                res.I2 = I2;
                res.stability_margin = margin;
            }
        }
    }
    if (!std::isfinite(res.dS_min))
        throw NumericalError("optimize_squeezing: no stable operating point on the search grid");

    if (opt.refine) {
        NmData data{Ctilde, delta_tilde, rho, opt.dc_min, opt.dc_max, &res.trace};
        gsl_multimin_function f{&nm_objective, 2, &data};
        gsl_vector* x = gsl_vector_alloc(2);
        gsl_vector* step = gsl_vector_alloc(2);
        gsl_vector_set(x, 0, res.delta_c);
        gsl_vector_set(x, 1, std::log(res.I2));
        gsl_vector_set(step, 0, 0.5 * opt.dc_step);
        gsl_vector_set(step, 1, 0.05);
        gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
        gsl_multimin_fminimizer_set(s, &f, x, step);
        for (int it = 0; it < opt.max_iter; ++it) {
            if (gsl_multimin_fminimizer_iterate(s)) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7) == GSL_SUCCESS) break;
        }
        const double dc = gsl_vector_get(s->x, 0);
        const double I2 = std::exp(gsl_vector_get(s->x, 1));
        double margin = 0.0;
        const double v = (dc >= opt.dc_min && dc <= opt.dc_max)
                             ? dS_or_inf(effective(Ctilde, delta_tilde, dc, rho), I2, &margin)
                             : kInf;
        if (v < res.dS_min) {
            res.dS_min = v;
            res.delta_c = dc;
            res.I2 = I2;
            res.stability_margin = margin;
        }
        gsl_multimin_fminimizer_free(s);
        gsl_vector_free(step);
        gsl_vector_free(x);
    }
    return res;
}

std::vector<CurvePoint> squeezing_vs_cooperativity(double delta_tilde, double delta_c, double I2,
                                                   const std::vector<double>& Cs, ModelKind kind, double rho) {
    std::vector<CurvePoint> out;
    for (double C : Cs) {
        const EffectiveParams p = effective(C, delta_tilde, delta_c, rho);
        double v = kNaN;
        try {
            if (kind == ModelKind::full) {
                v = evaluate_point(p, I2).dS_min;
            } else {
                const SteadyState2L ss = steady_state(p, I2);
                const FluctuationSystem sys = adiabatic_system(p, ss);
                v = squeezing_report(sys, solve_lyapunov(sys).G).dS_min;
            }
        } catch (const NumericalError&) {
        }
        out.push_back({C, v});
    }
    return out;
}

double transfer_efficiency(double Ctilde, double rho) {
    return 2.0 * Ctilde / ((1.0 + rho) * (1.0 + 2.0 * Ctilde));
}

double transfer_variance(double Ctilde, double rho, double r) {
    return 1.0 - transfer_efficiency(Ctilde, rho) * (1.0 - std::exp(-2.0 * r));
}

double transfer_variance_lyapunov(double Ctilde, double rho, double r, double theta) {
    EffectiveParams p = effective(Ctilde, 0.0, 0.0, rho);
    p.squeeze = {r, theta};
    const SteadyState2L ss = steady_state(p, 0.0);
    const FluctuationSystem sys = fluctuation_system_5(p, ss);
    return squeezing_report(sys, solve_lyapunov(sys).G).dS_min;
}

SpectrumStudy outgoing_study(const EffectiveParams& p, double I2, double omega_max, int n) {
    const SteadyState2L ss = steady_state(p, I2);
    const FluctuationSystem sys = fluctuation_system_5(p, ss);
    const OutgoingSpectrum o = outgoing_spectrum(sys, linspace(0.0, omega_max, n));
    SpectrumStudy s;
    s.omega = o.omega;
    s.s_min = o.s_min;
    s.s_max = o.s_max;
    s.gamma_prime = adiabatic_drift(p, ss).gamma_prime;
    const auto it = std::min_element(s.s_min.begin(), s.s_min.end());
    const int k0 = static_cast<int>(it - s.s_min.begin());
    s.min_value = *it;
    s.omega_at_min = s.omega[k0];
    if (s.min_value >= 1.0) return s;

    // contiguous band around the minimum where S stays below `level`
    auto band = [&](double level, double& lo, double& hi) {
        int a = k0, b = k0;
        while (a > 0 && s.s_min[a - 1] < level) --a;
        while (b + 1 < n && s.s_min[b + 1] < level) ++b;
        auto cross = [&](int i, int j) {
            const double t = (level - s.s_min[i]) / (s.s_min[j] - s.s_min[i]);
            return s.omega[i] + t * (s.omega[j] - s.omega[i]);
        };
        lo = a > 0 ? cross(a - 1, a) : s.omega[a];
        hi = b + 1 < n ? cross(b, b + 1) : s.omega[b];
    };
    band(1.0 - 0.5 * (1.0 - s.min_value), s.half_depth_lo, s.half_depth_hi);
    s.band_width = s.half_depth_hi - s.half_depth_lo;
    band(1.0, s.below_one_lo, s.below_one_hi);
    return s;
}

std::vector<double> spin_quadrature_spectrum(const FluctuationSystem& sys, const MatC& D,
                                             const std::vector<double>& omega, double alpha) {
    const auto [theta, phi] = mean_spin_angles(sys.mean_spin);
    const double half = sys.mean_spin.norm() / 2.0;
    std::vector<double> out;
    for (double w : omega) {
        const MatC V = spectrum_at(sys.B, D, w);
        out.push_back(quadrature_variance(transverse_variances(spin_covariance(sys, V), theta, phi), alpha) / half);
    }
    return out;
}

ValidationOptions default_validation(Regime r) {
    ValidationOptions o;
    o.regime = r;
    if (r == Regime::closed) {
        o.Gamma_p_over_gamma0 = 100.0;
        o.delta_tilde_max = 20.0 * (1.0 + o.Gamma_p_over_gamma0);
    }
    return o;
}

ValidationPoint validate_point(const ValidationOptions& o, double delta_tilde) {
    ThreeLevelParams t;
    t.gamma = o.gamma;
    const double Gp = o.gamma * o.Omega1 * o.Omega1 / (o.Delta * o.Delta);
    t.gamma0 = Gp / o.Gamma_p_over_gamma0;
    t.N = o.N;
    t.kappa = o.kappa;
    t.tau = 1.0;
    t.g = std::sqrt(2.0 * t.kappa * t.tau * t.gamma * o.C / t.N);
    t.Omega1 = o.Omega1;
    t.Lambda1 = 0.0;
    t.Lambda2 = t.N * t.gamma0;
    t.Delta_c = o.delta_c * t.kappa;

    const double Gam = Gp / t.gamma0;
    const double s = 1.0 + Gam;
    ValidationPoint vp;
    vp.delta_tilde = delta_tilde;
    vp.delta_bar2 = delta_tilde / s;
    vp.I2 = 0.25 * (s * s + delta_tilde * delta_tilde);

    // intracavity field from beta2 = g_tilde <A2> / gamma0
    const double gt = t.G() * o.Omega1 / o.Delta;
    const double a = std::sqrt(vp.I2) * t.gamma0 / gt;
    const double delta = delta_tilde * t.gamma0 - o.Omega1 * o.Omega1 / o.Delta + t.G() * t.G() * a * a / o.Delta;
    t.Delta1 = o.Delta + 0.5 * delta;
    t.Delta2 = o.Delta - 0.5 * delta;

    const SteadyState3L s3 = steady_state_at_field(t, a);
    vp.s_plus_three = std::abs(s3.Pr) / t.N;
    vp.omega_ratio = t.G() * a / o.Omega1;
    try {
        const FluctuationSystem sys3 = fluctuation_system_10(t, s3);
        vp.dS_three = squeezing_report(sys3, solve_lyapunov(sys3).G).dS_min;
    } catch (const NumericalError&) {
        vp.dS_three = kNaN;
    }

    const Reduction red = reduce(t, std::norm(s3.A2));
    try {
        if (o.regime == Regime::open) {
            const EffectiveParams q = assign(red.effective);
            const SteadyState2L s2 = steady_state(q, vp.I2 / (s * s));
            vp.s_plus_two = std::abs(s2.s_plus);
            const FluctuationSystem sys2 = fluctuation_system_5(q, s2);
            vp.dS_two = squeezing_report(sys2, solve_lyapunov(sys2).G).dS_min;
        } else {
            const SteadyState2L s2 = corrected_steady_state(red.effective, vp.I2, vp.omega_ratio);
            vp.s_plus_two = std::abs(s2.s_plus);
            const FluctuationSystem sys2 = fluctuation_system_5(red.effective, s2);
            vp.dS_two = squeezing_report(sys2, solve_lyapunov(sys2).G).dS_min;
        }
    } catch (const NumericalError&) {
        vp.dS_two = kNaN;
    }
    return vp;
}

ValidationResult validate_models(const ValidationOptions& o) {
    ValidationResult r;
    r.options = o;
    r.Gamma_p = o.gamma * o.Omega1 * o.Omega1 / (o.Delta * o.Delta);
    {
        EffectiveParams e;
        e.Ctilde = o.C * o.Gamma_p_over_gamma0;  // g_tilde^2 N / (2 kappa gamma0) with gamma0 = Gamma_p / ratio
        e.Gamma_p_ratio = o.Gamma_p_over_gamma0;
        r.Ctilde_two_level = assign(e).Ctilde;
    }
    r.min_two = r.min_three = kInf;
    for (double dt : linspace(0.0, o.delta_tilde_max, o.n_points)) {
        const ValidationPoint vp = validate_point(o, dt);
        r.points.push_back(vp);
        if (std::isfinite(vp.dS_two)) r.min_two = std::min(r.min_two, vp.dS_two);
        if (std::isfinite(vp.dS_three)) r.min_three = std::min(r.min_three, vp.dS_three);
        if (std::isfinite(vp.dS_two) && std::isfinite(vp.dS_three))
            r.max_discrepancy = std::max(r.max_discrepancy, std::abs(vp.dS_two - vp.dS_three));
        else
            ++r.n_unstable;
    }
    return r;
}

}  // namespace spinsq
