#include "spinsq/noise.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinsq {

namespace {

double rel_residual(const MatC& B, const MatC& D, const MatC& G) {
    const double dn = D.norm();
    const double r = (B * G + G * B.adjoint() - D).norm();
    if (dn == 0.0) return r;
    return r / dn;
}

MatC lyapunov_kronecker(const MatC& B, const MatC& D) {
    const int n = static_cast<int>(B.rows());
    const MatC Id = MatC::Identity(n, n);
    MatC K = MatC::Zero(n * n, n * n);
    // column-major vec: vec(BG) = (I x B) vec G, vec(G B^dag) = (conj(B) x I) vec G
    for (int j = 0; j < n; ++j)
        K.block(j * n, j * n, n, n) += B;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K.block(i * n, j * n, n, n) += std::conj(B(i, j)) * Id;
    const VecC d = Eigen::Map<const VecC>(D.data(), n * n);
    const VecC g = K.partialPivLu().solve(d);
    return Eigen::Map<const MatC>(g.data(), n, n);
}

MatC lyapunov_eigen(const MatC& B, const MatC& D) {
    Eigen::ComplexEigenSolver<MatC> es(B);
    const MatC& V = es.eigenvectors();
    const VecC& l = es.eigenvalues();
    const auto lu = V.partialPivLu();
    const MatC Vinv = lu.inverse();
    MatC Dt = Vinv * D * Vinv.adjoint();
    for (int i = 0; i < Dt.rows(); ++i)
        for (int j = 0; j < Dt.cols(); ++j)
            Dt(i, j) /= l(i) + std::conj(l(j));
    return V * Dt * V.adjoint();
}

}  // namespace

VecC check_stability(const MatC& B, double singular_tol) {
    const VecC ev = B.eigenvalues();
    // scale by the spectral radius: entries of B mix N-scaled couplings
    const double bn = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    double min_re = ev.real().minCoeff();
    if (min_re <= 0.0) {
        std::ostringstream os;
        os << "unstable operating point: drift eigenvalues with Re <= 0:";
        for (int i = 0; i < ev.size(); ++i)
            if (ev(i).real() <= 0.0) os << " (" << ev(i).real() << "," << ev(i).imag() << ")";
        throw InstabilityError(os.str(), ev);
    }
    double min_pair = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ev.size(); ++i)
        for (int j = 0; j < ev.size(); ++j)
            min_pair = std::min(min_pair, std::abs(ev(i) + std::conj(ev(j))));
    if (min_pair < singular_tol * bn) {
        std::ostringstream os;
        os << "Lyapunov operator singular (turning point): min |l_i + conj l_j| = " << min_pair;
        throw SingularityError(os.str());
    }
    return ev;
}

double stability_margin(const MatC& B) {
    return B.eigenvalues().real().minCoeff();
}

MatC lyapunov(const MatC& B, const MatC& D, double* residual, const LyapunovOptions& opt) {
    if (B.rows() != B.cols() || D.rows() != B.rows() || D.cols() != B.cols())
        throw NumericalError("lyapunov: dimension mismatch");
    check_stability(B, opt.singular_tol);
    MatC G;
    double res = std::numeric_limits<double>::infinity();
    if (B.rows() <= opt.kronecker_max_dim) {
        G = lyapunov_kronecker(B, D);
        G = 0.5 * (G + G.adjoint()).eval();
        res = rel_residual(B, D, G);
    }
    if (!(res <= opt.residual_tol)) {
        MatC G2 = lyapunov_eigen(B, D);
        G2 = 0.5 * (G2 + G2.adjoint()).eval();
        const double res2 = rel_residual(B, D, G2);
        if (res2 < res) {
            G = G2;
            res = res2;
        }
    }
    if (!(res <= opt.residual_tol)) {
        std::ostringstream os;
        os << "lyapunov: residual " << res << " above tolerance " << opt.residual_tol;
        throw NumericalError(os.str());
    }
    if (residual) *residual = res;
    return G;
}

CovarianceMatrix solve_lyapunov(const FluctuationSystem& sys, const LyapunovOptions& opt) {
    CovarianceMatrix c;
    c.labels = sys.labels;
    c.G = lyapunov(sys.B, sys.D, &c.residual, opt);
    return c;
}

MatC spectrum_at(const MatC& B, const MatC& D, double omega) {
    const int n = static_cast<int>(B.rows());
    const MatC M = (B - I * omega * MatC::Identity(n, n)).partialPivLu().inverse();
    return M * D * M.adjoint();
}

SpectrumMatrix spectrum(const FluctuationSystem& sys, const std::vector<double>& omega) {
    check_stability(sys.B);
    SpectrumMatrix s;
    s.omega = omega;
    s.normalization = "raw";
    s.V.reserve(omega.size());
    for (double w : omega) s.V.push_back(spectrum_at(sys.B, sys.D, w));
    return s;
}

MatC integrate_spectrum(const MatC& B, const MatC& D, const QuadratureOptions& opt) {
    const VecC ev = check_stability(B);
    const int n = static_cast<int>(B.rows());
    const double W = opt.width_factor * std::max(1.0, ev.cwiseAbs().maxCoeff());

    // breakpoints around every resonance so narrow peaks are not stepped over
    std::vector<double> bp{-W, 0.0, W};
    for (int k = 0; k < ev.size(); ++k) {
        const double c = ev(k).imag(), w = ev(k).real();
        for (double m : {-25.0, -5.0, -1.0, 0.0, 1.0, 5.0, 25.0}) {
            const double x = c + m * w;
            if (x > -W && x < W) bp.push_back(x);
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(), [W](double a, double b) { return std::abs(a - b) < 1e-14 * W; }),
             bp.end());

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    MatC out = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int part = 0; part < (i == j ? 1 : 2); ++part) {
                auto f = [&](double w) {
                    const cplx v = spectrum_at(B, D, w)(i, j);
                    return part == 0 ? v.real() : v.imag();
                };
                // tails: w = +-W / t, dw = W / t^2 dt
                auto tail = [&](double t, double sign) {
                    if (t <= 0.0) return 0.0;
                    return f(sign * W / t) * W / (t * t);
                };
                double acc = 0.0;
                for (std::size_t k = 0; k + 1 < bp.size(); ++k)
                    acc += GK::integrate(f, bp[k], bp[k + 1], opt.max_depth, opt.rel_tol);
                acc += GK::integrate([&](double t) { return tail(t, 1.0); }, 0.0, 1.0, opt.max_depth, opt.rel_tol);
                acc += GK::integrate([&](double t) { return tail(t, -1.0); }, 0.0, 1.0, opt.max_depth, opt.rel_tol);
                if (part == 0)
                    out(i, j) += acc;
                else
                    out(i, j) += I * acc;
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) out(i, j) = std::conj(out(j, i));
    return out / (2.0 * M_PI);
}

Eigen::Matrix2cd outgoing_at(const FluctuationSystem& sys, double omega) {
    if (!sys.has_field())
        throw NumericalError("outgoing spectrum needs field variables");
    const int n = sys.size();
    const int f = sys.field_index;
    const double k2 = 2.0 * sys.kappa;
    const MatC M = (sys.B - I * omega * MatC::Identity(n, n)).partialPivLu().inverse();
    // input noise correlations, normalized so vacuum is diag(1, 0)
    const Eigen::Matrix2cd S_in = sys.D.block(f, f, 2, 2) / k2;
    const Eigen::Matrix2cd T_in = k2 * M.block(f, f, 2, 2) - Eigen::Matrix2cd::Identity();
    const MatC T_all = std::sqrt(k2) * M.block(f, 0, 2, n);
    const MatC D_at = sys.diffusion_of(Source::atomic);
    return T_in * S_in * T_in.adjoint() + T_all * D_at * T_all.adjoint();
}

OutgoingSpectrum outgoing_spectrum(const FluctuationSystem& sys, const std::vector<double>& omega) {
    check_stability(sys.B);
    OutgoingSpectrum s;
    s.omega = omega;
    for (double w : omega) {
        const Eigen::Matrix2cd V = outgoing_at(sys, w);
        const double sum = (V(0, 0) + V(1, 1)).real();
        s.s_min.push_back(sum - 2.0 * std::abs(V(0, 1)));
        s.s_max.push_back(sum + 2.0 * std::abs(V(0, 1)));
        s.V.push_back(V);
    }
    return s;
}

Decomposition decompose(const FluctuationSystem& sys, const std::vector<double>& omega) {
    Decomposition d;
    d.total = solve_lyapunov(sys);
    FluctuationSystem part = sys;
    part.D = sys.diffusion_of(Source::field);
    d.field = solve_lyapunov(part);
    part.D = sys.diffusion_of(Source::atomic);
    d.atomic = solve_lyapunov(part);

    const double scale = std::max(1.0, d.total.G.cwiseAbs().maxCoeff());
    if ((d.field.G + d.atomic.G - d.total.G).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NumericalError("decompose: source contributions do not add up to the total");

    d.report = squeezing_report(sys, d.total.G);
    const auto [theta, phi] = mean_spin_angles(sys.mean_spin);
    const double half = sys.mean_spin.norm() / 2.0;
    const Transverse tf = transverse_variances(spin_covariance(sys, d.field.G), theta, phi);
    d.dS_min = d.report.dS_min;
    d.dS_f = quadrature_variance(tf, d.report.alpha0) / half;
    const Transverse ta = transverse_variances(spin_covariance(sys, d.atomic.G), theta, phi);
    d.dS_atomic = quadrature_variance(ta, d.report.alpha0) / half;
    d.ratio = d.dS_f / d.dS_min;

    if (!omega.empty()) {
        part.D = sys.diffusion_of(Source::field);
        d.spectrum_field = spectrum(part, omega);
        part.D = sys.diffusion_of(Source::atomic);
        d.spectrum_atomic = spectrum(part, omega);
    }
    return d;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace spinsq
