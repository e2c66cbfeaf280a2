#pragma once

#include "spinsq/common.hpp"
#include "spinsq/params.hpp"
#include "spinsq/system.hpp"

#include <string>

namespace spinsq {

// Per-atom steady state of the effective model. beta2 and I2 are in the
// units of the EffectiveParams they were computed from.
struct SteadyState2L {
    cplx s_plus = 0.0;
    cplx s_minus = 0.0;
    double s_z = 0.0;
    double beta2 = 0.0;
    double I2 = 0.0;
    std::string branch = "given-I2";
    // corrected model only: Omega2/Omega1 at this point and its ratio to the
    // field amplitude in two-level units
    double omega_ratio = 0.0;
    double omega_per_beta = 0.0;
    double unit_scale = 1.0;  // 1 + Gamma_p/gamma0
};

SteadyState2L steady_state(const EffectiveParams& p, double I2);

// Optical-pumping corrected model. p carries Gamma_p_ratio > 0 and I2 is in
// units of the three-level gamma0; omega_ratio is Omega2/Omega1 (taken real).
SteadyState2L corrected_steady_state(const EffectiveParams& p, double I2, double omega_ratio);

// Incoming intensity that produces the intracavity I2 (plain model).
double input_intensity(const EffectiveParams& p, double I2);

// 5x5 drift in the basis (a, a^dag, S+, S-, Sz). Includes the pumping and
// modified-field terms when p.Gamma_p_ratio > 0.
MatC drift_matrix_5(const EffectiveParams& p, const SteadyState2L& ss);

// Field diffusion for a = sqrt(tau) A2 (multiply by 1/tau for A2 units).
Eigen::Matrix2cd diffusion_field(const EffectiveParams& p);

// Atomic diffusion exactly as tabulated, in units of gamma0, slots
// (1, 2, 3) = (S+, S-, Sz) of the table.
Eigen::Matrix3cd diffusion_atomic(const EffectiveParams& p, const SteadyState2L& ss);

// The same matrix with the two coherence slots exchanged, which is what the
// Einstein relations give for S+ = |2><1|, the operator driven by the drift.
Eigen::Matrix3cd diffusion_atomic_system(const EffectiveParams& p, const SteadyState2L& ss);

FluctuationSystem fluctuation_system_5(const EffectiveParams& p, const SteadyState2L& ss);

struct AdiabaticDrift {
    Eigen::Matrix3cd B;
    double gamma_prime = 0.0;  // units of gamma0
    bool regime_ok = true;
    std::string warning;
};

// Field eliminated in the bad-cavity limit. Basis (S+, S-, Sz).
AdiabaticDrift adiabatic_drift(const EffectiveParams& p, const SteadyState2L& ss);
Eigen::Matrix3cd adiabatic_diffusion(const EffectiveParams& p, const SteadyState2L& ss);
// M(s) such that the field part of the diffusion is N * 4C/(lambda(1+dc^2)) * M
Eigen::Matrix3cd adiabatic_field_kernel(const SteadyState2L& ss);
FluctuationSystem adiabatic_system(const EffectiveParams& p, const SteadyState2L& ss);

// Minimal variance of the adiabatic model at 4 I2 = 1 + delta_bar^2.
double analytic_min_variance(double Ctilde, double delta_bar = 0.0);

}  // namespace spinsq
