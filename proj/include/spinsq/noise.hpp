#pragma once

#include "spinsq/common.hpp"
#include "spinsq/spinframe.hpp"
#include "spinsq/system.hpp"

#include <string>
#include <vector>

namespace spinsq {

struct CovarianceMatrix {
    std::vector<std::string> labels;
    MatC G;
    double residual = 0.0;  // ||BG + GB^dag - D|| / ||D||
};

struct SpectrumMatrix {
    std::vector<double> omega;
    std::vector<MatC> V;
    std::string normalization;
};

struct OutgoingSpectrum {
    std::vector<double> omega;
    std::vector<double> s_min;
    std::vector<double> s_max;
    std::vector<Eigen::Matrix2cd> V;
};

struct Decomposition {
    CovarianceMatrix total;
    CovarianceMatrix field;
    CovarianceMatrix atomic;
    SqueezingReport report;
    double dS_min = 0.0;
    double dS_f = 0.0;
    double dS_atomic = 0.0;
    double ratio = 0.0;  // dS_f / dS_min
    SpectrumMatrix spectrum_field;
    SpectrumMatrix spectrum_atomic;
};

struct LyapunovOptions {
    double residual_tol = 1e-10;
    double singular_tol = 1e-12;
    int kronecker_max_dim = 10;
};

// Throws InstabilityError if any eigenvalue has Re <= 0, SingularityError if
// lambda_i + conj(lambda_j) is numerically zero. Returns the eigenvalues.
VecC check_stability(const MatC& B, double singular_tol = 1e-12);
double stability_margin(const MatC& B);

MatC lyapunov(const MatC& B, const MatC& D, double* residual = nullptr, const LyapunovOptions& opt = {});
CovarianceMatrix solve_lyapunov(const FluctuationSystem& sys, const LyapunovOptions& opt = {});

// (B - i w)^-1 D (B^dag + i w)^-1
MatC spectrum_at(const MatC& B, const MatC& D, double omega);
SpectrumMatrix spectrum(const FluctuationSystem& sys, const std::vector<double>& omega);

struct QuadratureOptions {
    double width_factor = 20.0;   // W = width_factor * max(kappa, |eig B|)
    double rel_tol = 1e-10;
    int max_depth = 12;
};

// Integral of V(w) dw / 2pi over the whole real line: adaptive Gauss-Kronrod
// on [-W, W] split at the resonances of B, tails mapped onto (0, 1].
MatC integrate_spectrum(const MatC& B, const MatC& D, const QuadratureOptions& opt = {});

// Shot-noise-normalized spectra of the outgoing field quadratures, using
// a_out = sqrt(2 kappa) a - a_in.
OutgoingSpectrum outgoing_spectrum(const FluctuationSystem& sys, const std::vector<double>& omega);
Eigen::Matrix2cd outgoing_at(const FluctuationSystem& sys, double omega);

// Field-input vs atomic Langevin contributions to the minimal spin variance.
// The quadrature angle is the one that minimizes the total.
Decomposition decompose(const FluctuationSystem& sys, const std::vector<double>& omega = {});

std::vector<double> linspace(double a, double b, int n);

}  // namespace spinsq
