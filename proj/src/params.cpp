#include "spinsq/params.hpp"

#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <set>
#include <sstream>

namespace spinsq {

double ThreeLevelParams::G() const { return g / std::sqrt(tau); }

double ThreeLevelParams::pump2() const {
    return Lambda2 > 0.0 ? Lambda2 : N * gamma0 - Lambda1;
}

void ThreeLevelParams::validate() const {
    if (!(gamma > 0.0) || !(gamma0 > 0.0) || !(kappa > 0.0) || !(tau > 0.0))
        throw ConfigError("three-level params: gamma, gamma0, kappa, tau must be positive");
    if (!(N >= 1.0))
        throw ConfigError("three-level params: N must be >= 1");
    if (Lambda1 < 0.0 || pump2() < 0.0)
        throw ConfigError("three-level params: pumping rates must be non-negative");
    if (std::abs(Lambda1 + pump2() - N * gamma0) > 1e-9 * N * gamma0)
        throw ConfigError("three-level params: Lambda1 + Lambda2 must equal N*gamma0");
    if (g < 0.0)
        throw ConfigError("three-level params: g must be non-negative");
}

void EffectiveParams::validate() const {
    if (!(rho > 0.0))
        throw ConfigError("effective params: rho must be positive");
    if (!(Ctilde >= 0.0))
        throw ConfigError("effective params: Ctilde must be non-negative");
    if (!(Gamma_p_ratio >= 0.0))
        throw ConfigError("effective params: Gamma_p_ratio must be non-negative");
    if (lambda1 < 0.0 || lambda2 < 0.0 || std::abs(lambda1 + lambda2 - 1.0) > 1e-12)
        throw ConfigError("effective params: lambda1 + lambda2 must be 1");
    if (!(N >= 1.0) || !(tau > 0.0))
        throw ConfigError("effective params: N >= 1 and tau > 0 required");
}

EffectiveParams assign(const EffectiveParams& p) {
    const double s = assign_scale(p);
    EffectiveParams q = p;
    const double G = p.Gamma_p_ratio;
    q.lambda1 = p.lambda1 / s;
    q.lambda2 = (p.lambda2 + G) / s;
    q.rho = p.rho * s;
    q.delta_bar = p.delta_bar / s;
    // g_tilde^2 N (lambda2 - lambda1) / (2 kappa gamma0) with the new rates
    q.Ctilde = p.lambda() > 0.0 ? p.Ctilde * q.lambda() / (p.lambda() * s) : 0.0;
    q.Gamma_p_ratio = 0.0;
    return q;
}

Reduction reduce(const ThreeLevelParams& p, double mean_intensity, double validity_threshold) {
    p.validate();
    const double D = p.Delta();
    const double om = std::abs(p.Omega1);
    if (std::abs(D) <= validity_threshold * std::max(p.gamma, om)) {
        std::ostringstream os;
        os << "Raman reduction invalid: |Delta| = " << std::abs(D) << " <= " << validity_threshold
           << " * max(gamma, |Omega1|) = " << validity_threshold * std::max(p.gamma, om);
        throw ReductionInvalidError(os.str());
    }
    Reduction r;
    r.g_tilde = p.g * om / D;
    r.Gamma_p = p.gamma * om * om / (D * D);
    r.delta_tilde = p.delta() + om * om / D - p.g * p.g * mean_intensity / D;
    r.gamma_over_Delta = p.gamma / std::abs(D);
    r.omega_over_Delta = om / std::abs(D);

    EffectiveParams& e = r.effective;
    e.N = p.N;
    e.tau = p.tau;
    e.lambda1 = p.pump1() / (p.N * p.gamma0);
    e.lambda2 = p.pump2() / (p.N * p.gamma0);
    e.Ctilde = r.g_tilde * r.g_tilde / (2.0 * p.kappa * p.tau * p.gamma0) * (p.pump2() - p.pump1()) / p.gamma0;
    e.delta_bar = r.delta_tilde / p.gamma0;
    e.delta_c = p.Delta_c / p.kappa;
    e.rho = p.gamma0 / p.kappa;
    e.Gamma_p_ratio = r.Gamma_p / p.gamma0;
    e.squeeze = p.squeeze;
    return r;
}

UnitScheme dimensionless_scheme(const EffectiveParams& p) {
    p.validate();
    UnitScheme u;
    u.kappa = p.kappa();
    u.sqrt_tau = std::sqrt(p.tau);
    const double lam = p.lambda();
    u.G = (p.Ctilde > 0.0 && lam > 0.0) ? std::sqrt(2.0 * u.kappa * p.Ctilde / (p.N * lam)) : 0.0;
    return u;
}

namespace {

void check_keys(const boost::property_tree::ptree& section, const std::set<std::string>& allowed,
                const std::string& name) {
    for (const auto& kv : section)
        if (!allowed.count(kv.first))
            throw ConfigError("unknown key '" + kv.first + "' in [" + name + "]");
}

template <class T>
T get_or(const boost::property_tree::ptree& s, const std::string& key, T def) {
    auto v = s.get_optional<std::string>(key);
    if (!v) return def;
    try {
        return s.get<T>(key);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value of '" + key + "': " + *v);
    }
}

}  // namespace

EffectiveParams effective_from_tree(const boost::property_tree::ptree& s) {
    check_keys(s, {"Ctilde", "delta_bar", "delta_tilde", "delta_c", "rho", "lambda1", "lambda2", "N", "tau",
                   "Gamma_p_ratio", "r", "theta"},
               "effective");
    if (s.count("delta_bar") && s.count("delta_tilde") &&
        get_or(s, "delta_bar", 0.0) != get_or(s, "delta_tilde", 0.0))
        throw ConfigError("both delta_bar and delta_tilde given with different values");
    EffectiveParams p;
    p.Ctilde = get_or(s, "Ctilde", p.Ctilde);
    p.delta_bar = get_or(s, "delta_bar", get_or(s, "delta_tilde", p.delta_bar));
    p.delta_c = get_or(s, "delta_c", p.delta_c);
    p.rho = get_or(s, "rho", p.rho);
    p.lambda1 = get_or(s, "lambda1", p.lambda1);
    p.lambda2 = get_or(s, "lambda2", 1.0 - p.lambda1);
    p.N = get_or(s, "N", p.N);
    p.tau = get_or(s, "tau", p.tau);
    p.Gamma_p_ratio = get_or(s, "Gamma_p_ratio", p.Gamma_p_ratio);
    p.squeeze.r = get_or(s, "r", 0.0);
    p.squeeze.theta = get_or(s, "theta", 0.0);
    p.validate();
    return p;
}

ThreeLevelParams three_level_from_tree(const boost::property_tree::ptree& s) {
    check_keys(s, {"gamma", "gamma0", "Lambda1", "Lambda2", "N", "g", "C", "Omega1", "Omega1_phase", "Delta1",
                   "Delta2", "Delta", "delta", "Delta_c", "kappa", "tau", "A_in", "A_in_phase", "r", "theta"},
               "three_level");
    ThreeLevelParams p;
    p.gamma = get_or(s, "gamma", p.gamma);
    p.gamma0 = get_or(s, "gamma0", p.gamma0);
    p.N = get_or(s, "N", p.N);
    p.kappa = get_or(s, "kappa", p.kappa);
    p.tau = get_or(s, "tau", p.tau);
    if (s.count("g") && s.count("C"))
        throw ConfigError("give either g or C in [three_level], not both");
    if (s.count("C")) {
        const double C = get_or(s, "C", 0.0);
        p.g = std::sqrt(2.0 * p.kappa * p.tau * p.gamma * C / p.N);
    } else {
        p.g = get_or(s, "g", 0.0);
    }
    p.Omega1 = std::polar(get_or(s, "Omega1", 0.0), get_or(s, "Omega1_phase", 0.0));
    const bool split = s.count("Delta1") || s.count("Delta2");
    const bool mean = s.count("Delta") || s.count("delta");
    if (split && mean)
        throw ConfigError("give either Delta1/Delta2 or Delta/delta in [three_level], not both");
    if (mean) {
        const double D = get_or(s, "Delta", 0.0), d = get_or(s, "delta", 0.0);
        p.Delta1 = D + 0.5 * d;
        p.Delta2 = D - 0.5 * d;
    } else {
        p.Delta1 = get_or(s, "Delta1", 0.0);
        p.Delta2 = get_or(s, "Delta2", 0.0);
    }
    p.Delta_c = get_or(s, "Delta_c", 0.0);
    p.Lambda1 = get_or(s, "Lambda1", 0.0);
    p.Lambda2 = get_or(s, "Lambda2", 0.0);
    p.A_in = std::polar(get_or(s, "A_in", 0.0), get_or(s, "A_in_phase", 0.0));
    p.squeeze.r = get_or(s, "r", 0.0);
    p.squeeze.theta = get_or(s, "theta", 0.0);
    p.validate();
    return p;
}

ParamSet params_from_tree(const boost::property_tree::ptree& tree) {
    const bool eff = tree.count("effective") > 0;
    const bool three = tree.count("three_level") > 0;
    if (eff && three)
        throw ConfigError("config names both [effective] and [three_level] parameters");
    if (!eff && !three)
        throw ConfigError("config must contain an [effective] or a [three_level] section");
    if (eff) return effective_from_tree(tree.get_child("effective"));
    return three_level_from_tree(tree.get_child("three_level"));
}

}  // namespace spinsq
