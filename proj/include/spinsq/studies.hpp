#pragma once

#include "spinsq/common.hpp"
#include "spinsq/efftwo.hpp"
#include "spinsq/lambda3.hpp"
#include "spinsq/noise.hpp"
#include "spinsq/params.hpp"

#include <array>
#include <string>
#include <vector>

namespace spinsq {

struct OperatingPoint {
    double delta_tilde = 0.0;
    double delta_c = 0.0;
    double I2 = 0.0;
    double Ctilde = 100.0;
    double rho = 1.0 / 2000.0;
    double lambda1 = 0.0;
    double lambda2 = 1.0;
    double Gamma_p_ratio = 0.0;
    SteadyState2L steady;
    double stability_margin = 0.0;
    double dS_min = 0.0;
};

// Full 5x5 evaluation of one point. Throws InstabilityError on unstable points.
OperatingPoint evaluate_point(const EffectiveParams& p, double I2);
EffectiveParams effective(double Ctilde, double delta_tilde, double delta_c, double rho = 1.0 / 2000.0);

struct BistabilityCurve {
    std::vector<double> I2;
    std::vector<double> I2_in;
    std::vector<double> turning_points;  // intracavity I2, ascending
};

// Positive real roots of d(I2_in)/d(I2), a cubic in I2.
std::vector<double> turning_points(const EffectiveParams& p);
BistabilityCurve bistability_curve(const EffectiveParams& p, const std::vector<double>& I2);
// Smallest Ctilde at which turning points appear (bisection).
double bistability_threshold(double delta_bar, double delta_c, double C_hi = 1e4);

struct OptimizerOptions {
    double dc_min = -1.0;
    double dc_max = 1.0;
    double dc_step = 0.05;
    int n_I2 = 61;
    double I2_span = 4.0;  // grid covers I0/span .. I0*span around 4 I0 = 1 + delta^2
    bool refine = true;
    int max_iter = 400;
};

struct OptimizerResult {
    double delta_c = 0.0;
    double I2 = 0.0;
    double dS_min = 1.0;
    double stability_margin = 0.0;
    std::vector<std::array<double, 3>> trace;  // (delta_c, I2, dS_min), unstable -> inf
};

OptimizerResult optimize_squeezing(double Ctilde, double delta_tilde, double rho = 1.0 / 2000.0,
                                   const OptimizerOptions& opt = {});

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

enum class ModelKind { full, adiabatic };

std::vector<CurvePoint> squeezing_vs_cooperativity(double delta_tilde, double delta_c, double I2,
                                                   const std::vector<double>& Cs, ModelKind kind = ModelKind::full,
                                                   double rho = 1.0 / 2000.0);

double transfer_variance(double Ctilde, double rho, double r);
double transfer_efficiency(double Ctilde, double rho);
// The same quantity from the 5x5 Lyapunov solve at delta = delta_c = I2 = 0.
double transfer_variance_lyapunov(double Ctilde, double rho, double r, double theta = 0.0);

struct SpectrumStudy {
    std::vector<double> omega;
    std::vector<double> s_min;
    std::vector<double> s_max;
    double min_value = 1.0;
    double omega_at_min = 0.0;
    double half_depth_lo = 0.0;   // band where 1 - S >= (1 - S_min)/2, omega >= 0
    double half_depth_hi = 0.0;
    double band_width = 0.0;      // half_depth_hi - half_depth_lo
    double below_one_lo = 0.0;    // band where S < 1 on the grid
    double below_one_hi = 0.0;
    double gamma_prime = 0.0;
};

SpectrumStudy outgoing_study(const EffectiveParams& p, double I2, double omega_max, int n);

// Spectral density of the spin quadrature at angle alpha in the mean-spin
// frame, normalized to |<S>|/2.
std::vector<double> spin_quadrature_spectrum(const FluctuationSystem& sys, const MatC& D,
                                             const std::vector<double>& omega, double alpha);

enum class Regime { open, closed };

struct ValidationOptions {
    Regime regime = Regime::open;
    double gamma = 1.0;
    double Delta = 100.0;
    double Omega1 = 3.1622776601683795;  // sqrt(10)
    double C = 100.0;
    double kappa = 2.0;
    double N = 1e6;
    double Gamma_p_over_gamma0 = 1.0;  // 1 for the open case, 100 by default for closed
    double delta_c = 0.0;
    double delta_tilde_max = 20.0;      // units of the three-level gamma0
    int n_points = 21;
};

ValidationOptions default_validation(Regime r);

struct ValidationPoint {
    double delta_tilde = 0.0;   // units of the three-level gamma0
    double delta_bar2 = 0.0;    // units of the two-level gamma0
    double I2 = 0.0;            // three-level gamma0 units
    double dS_two = 0.0;
    double dS_three = 0.0;
    double omega_ratio = 0.0;   // |Omega2/Omega1|
    double s_plus_two = 0.0;
    double s_plus_three = 0.0;  // |Pr|/N
};

struct ValidationResult {
    ValidationOptions options;
    double Ctilde_two_level = 0.0;
    double Gamma_p = 0.0;
    std::vector<ValidationPoint> points;
    double max_discrepancy = 0.0;  // over points where both models are stable
    int n_unstable = 0;
    double min_two = 1.0;
    double min_three = 1.0;
};

// Paired two-level / three-level minimal variances along the line of
// maximal coherence 4 I2 = (1 + Gamma_p/gamma0)^2 + delta_tilde^2.
ValidationResult validate_models(const ValidationOptions& opt);
ValidationPoint validate_point(const ValidationOptions& opt, double delta_tilde);

}  // namespace spinsq
