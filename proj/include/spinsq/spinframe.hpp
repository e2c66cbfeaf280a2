#pragma once

#include "spinsq/common.hpp"
#include "spinsq/system.hpp"

#include <utility>

namespace spinsq {

struct Transverse {
    double X = 0.0;
    double Y = 0.0;
    cplx XY = 0.0;  // only the real part enters the minimal variance
};

struct MinimalVariance {
    double alpha0 = 0.0;
    double dS_min = 0.0;
    double dS_max = 0.0;
};

struct SqueezingReport {
    double theta = 0.0;
    double phi = 0.0;
    double alpha0 = 0.0;
    double dS_X = 0.0;
    double dS_Y = 0.0;
    cplx dS_XY = 0.0;
    double dS_min = 0.0;
    double dS_max = 0.0;
    double mean_spin_norm = 0.0;
};

// Angles that rotate the mean spin onto the Z axis. phi = 0 when the
// transverse projection vanishes.
std::pair<double, double> mean_spin_angles(const Eigen::Vector3d& meanS);

// (Pr, Pr^dag, Sz1, Sz2) block -> (Sx, Sy, Sz) of the ground-state spin.
Eigen::Matrix3cd to_c_spin(const Eigen::Matrix4cd& Gc);
// (S+, S-, Sz) block -> (Sx, Sy, Sz).
Eigen::Matrix3cd to_spin_2l(const Eigen::Matrix3cd& Gs);

Eigen::Matrix<cplx, 3, 4> r1_three_level();
Eigen::Matrix3cd r1_two_level();
Eigen::Matrix<double, 2, 3> r2(double theta, double phi);

Transverse transverse_variances(const Eigen::Matrix3cd& Gspin, double theta, double phi);

// Variance of cos(a) S_X + sin(a) S_Y.
double quadrature_variance(const Transverse& t, double alpha);

// Extremal transverse variances normalized to |<S_Z>|/2.
MinimalVariance minimal_variance(const Transverse& t, double meanS_Z);

SqueezingReport squeezing_report(const Eigen::Matrix3cd& Gspin, const Eigen::Vector3d& meanS);

// Spin block of a full covariance, rotated to (Sx, Sy, Sz).
Eigen::Matrix3cd spin_covariance(const FluctuationSystem& sys, const MatC& G);
SqueezingReport squeezing_report(const FluctuationSystem& sys, const MatC& G);

}  // namespace spinsq
