#pragma once

#include "spinsq/common.hpp"

#include <boost/property_tree/ptree_fwd.hpp>
#include <optional>
#include <string>
#include <variant>

namespace spinsq {

// Broadband squeezed vacuum on the input port. r = 0 is plain vacuum.
struct SqueezedDrive {
    double r = 0.0;
    double theta = 0.0;
};

// Physical parameters of the Lambda scheme. Any consistent frequency unit;
// the three-level solvers work in units where gamma = 1.
struct ThreeLevelParams {
    double gamma = 1.0;
    double gamma0 = 1e-3;
    double Lambda1 = 0.0;
    double Lambda2 = 0.0;  // 0 means "N*gamma0 - Lambda1"
    double N = 1e6;
    double g = 0.0;
    cplx Omega1 = 0.0;
    double Delta1 = 0.0;
    double Delta2 = 0.0;
    double Delta_c = 0.0;
    double kappa = 1.0;
    double tau = 1.0;
    cplx A_in = 0.0;  // coherent probe amplitude, flux normalization
    SqueezedDrive squeeze;

    double delta() const { return Delta1 - Delta2; }
    double Delta() const { return 0.5 * (Delta1 + Delta2); }
    double cooperativity() const { return g * g * N / (2.0 * kappa * tau * gamma); }
    // g / sqrt(tau): coupling of the rescaled field a = sqrt(tau) A2
    double G() const;
    double pump1() const { return Lambda1; }
    double pump2() const;

    void validate() const;
};

// Effective Raman model. Rates are in units of gamma0, so only ratios appear.
// With Gamma_p_ratio > 0 the values refer to the three-level gamma0 and the
// two-level rates follow from the optical-pumping assignment (see assign()).
struct EffectiveParams {
    double Ctilde = 100.0;
    double delta_bar = 0.0;
    double delta_c = 0.0;
    double rho = 1.0 / 2000.0;
    double lambda1 = 0.0;
    double lambda2 = 1.0;
    double N = 1e6;
    double tau = 1.0;
    double Gamma_p_ratio = 0.0;
    SqueezedDrive squeeze;

    double lambda() const { return lambda2 - lambda1; }
    double kappa() const { return 1.0 / rho; }
    void validate() const;
};

// Maps gamma0 -> gamma0 + Gamma_p, Lambda2 -> Lambda2 + N Gamma_p and
// re-expresses everything in units of the new gamma0. Gamma_p_ratio of the
// result is 0.
EffectiveParams assign(const EffectiveParams& p);

// Conversion factor 1 + Gamma_p/gamma0 between the two time units.
inline double assign_scale(const EffectiveParams& p) { return 1.0 + p.Gamma_p_ratio; }

struct Reduction {
    EffectiveParams effective;
    double g_tilde = 0.0;       // g Omega1 / Delta (physical units)
    double delta_tilde = 0.0;   // physical units
    double Gamma_p = 0.0;       // gamma |Omega1/Delta|^2
    double gamma_over_Delta = 0.0;
    double omega_over_Delta = 0.0;
};

// Raman reduction of the three-level parameters. mean_intensity is
// <A2^dag A2>, needed for the field light shift in delta_tilde.
Reduction reduce(const ThreeLevelParams& p, double mean_intensity, double validity_threshold = 10.0);

struct UnitScheme {
    double kappa = 0.0;   // in units of gamma0
    double G = 0.0;       // g_tilde / sqrt(tau) in units of sqrt(gamma0)
    double sqrt_tau = 1.0;
    // <a> = beta2 / G with a = sqrt(tau) A2
    double field_mean(double beta2) const { return G > 0.0 ? beta2 / G : 0.0; }
};

UnitScheme dimensionless_scheme(const EffectiveParams& p);

// Config file ingestion. Exactly one of [effective] / [three_level] may be
// present; both is a hard error.
using ParamSet = std::variant<EffectiveParams, ThreeLevelParams>;

ParamSet params_from_tree(const boost::property_tree::ptree& tree);
EffectiveParams effective_from_tree(const boost::property_tree::ptree& section);
ThreeLevelParams three_level_from_tree(const boost::property_tree::ptree& section);

}  // namespace spinsq
