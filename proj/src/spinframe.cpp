#include "spinsq/spinframe.hpp"

#include <algorithm>
#include <cmath>

namespace spinsq {

std::pair<double, double> mean_spin_angles(const Eigen::Vector3d& m) {
    const double norm = m.norm();
    if (!(norm > 0.0))
        throw DegenerateSpinError("mean spin vanishes; rotation to the mean-spin frame is undefined");
    const double theta = std::acos(std::clamp(m(2) / norm, -1.0, 1.0));
    const double s_phi = std::hypot(m(0), m(1));
    // same as cos(phi) = Sx / S_phi with the sign of Sy picking the branch
    const double phi = s_phi > 1e-300 * norm ? std::atan2(m(1), m(0)) : 0.0;
    return {theta, phi};
}

Eigen::Matrix<cplx, 3, 4> r1_three_level() {
    Eigen::Matrix<cplx, 3, 4> R;
    R << 0.5, 0.5, 0.0, 0.0,
         -0.5 * I, 0.5 * I, 0.0, 0.0,
         0.0, 0.0, -1.0, 1.0;
    return R;
}

Eigen::Matrix3cd r1_two_level() {
    Eigen::Matrix3cd R;
    R << 0.5, 0.5, 0.0,
         -0.5 * I, 0.5 * I, 0.0,
         0.0, 0.0, 1.0;
    return R;
}

Eigen::Matrix<double, 2, 3> r2(double theta, double phi) {
    Eigen::Matrix<double, 2, 3> R;
    R << std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta),
         -std::sin(phi), std::cos(phi), 0.0;
    return R;
}

Eigen::Matrix3cd to_c_spin(const Eigen::Matrix4cd& Gc) {
    const auto R = r1_three_level();
    return R * Gc * R.adjoint();
}

Eigen::Matrix3cd to_spin_2l(const Eigen::Matrix3cd& Gs) {
    const auto R = r1_two_level();
    return R * Gs * R.adjoint();
}

Transverse transverse_variances(const Eigen::Matrix3cd& Gspin, double theta, double phi) {
    const Eigen::Matrix<cplx, 2, 3> R = r2(theta, phi).cast<cplx>();
    const Eigen::Matrix2cd P = R * Gspin * R.adjoint();
    return {P(0, 0).real(), P(1, 1).real(), P(0, 1)};
}

double quadrature_variance(const Transverse& t, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return c * c * t.X + s * s * t.Y + 2.0 * s * c * t.XY.real();
}

MinimalVariance minimal_variance(const Transverse& t, double meanS_Z) {
    const double half = std::abs(meanS_Z) / 2.0;
    if (!(half > 0.0))
        throw DegenerateSpinError("normalization |<S_Z>|/2 vanishes");
    const double xy = t.XY.real();
    const double mid = 0.5 * (t.X + t.Y);
    const double rad = std::sqrt(0.25 * (t.X - t.Y) * (t.X - t.Y) + xy * xy);
    MinimalVariance out;
    out.dS_min = (mid - rad) / half;
    out.dS_max = (mid + rad) / half;
    if (rad <= 1e-14 * std::abs(mid)) {
        out.alpha0 = 0.0;
        return out;
    }
    // the two stationary angles differ by pi/2; keep the minimizer
    const double a = 0.5 * std::atan2(2.0 * xy, t.X - t.Y);
    const double b = a + M_PI / 2.0;
    out.alpha0 = quadrature_variance(t, a) <= quadrature_variance(t, b) ? a : b;
    if (out.alpha0 > M_PI / 2.0) out.alpha0 -= M_PI;
    return out;
}

SqueezingReport squeezing_report(const Eigen::Matrix3cd& Gspin, const Eigen::Vector3d& meanS) {
    const auto [theta, phi] = mean_spin_angles(meanS);
    const Transverse t = transverse_variances(Gspin, theta, phi);
    const MinimalVariance mv = minimal_variance(t, meanS.norm());
    SqueezingReport r;
    r.theta = theta;
    r.phi = phi;
    r.alpha0 = mv.alpha0;
    r.dS_X = t.X;
    r.dS_Y = t.Y;
    r.dS_XY = t.XY;
    r.dS_min = mv.dS_min;
    r.dS_max = mv.dS_max;
    r.mean_spin_norm = meanS.norm();
    return r;
}

Eigen::Matrix3cd spin_covariance(const FluctuationSystem& sys, const MatC& G) {
    const int o = sys.spin_offset;
    switch (sys.spin) {
    case SpinLayout::two_level:
        return to_spin_2l(G.block(o, o, 3, 3));
    case SpinLayout::three_level:
        return to_c_spin(G.block(o, o, 4, 4));
    default:
        throw NumericalError("system carries no spin variables");
    }
}

SqueezingReport squeezing_report(const FluctuationSystem& sys, const MatC& G) {
    return squeezing_report(spin_covariance(sys, G), sys.mean_spin);
}

}  // namespace spinsq
