#include "spinsq/lambda3.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinsq {

const std::vector<std::string>& AtomicBasis3::labels() {
    static const std::vector<std::string> l{"a", "a+", "P1", "P1+", "P2", "P2+", "Pr", "Pr+", "Sz1", "Sz2"};
    return l;
}

const std::vector<int>& AtomicBasis3::pairing() {
    static const std::vector<int> p{1, 0, 3, 2, 5, 4, 7, 6, 8, 9};
    return p;
}

OperatorWord OperatorWord::make(int i, int j, const std::vector<int>& level_phase) {
    OperatorWord w{i, j, 0};
    if (!level_phase.empty()) w.phase = level_phase.at(i - 1) - level_phase.at(j - 1);
    return w;
}

std::optional<OperatorWord> OperatorWord::operator*(const OperatorWord& o) const {
    if (j != o.i) return std::nullopt;
    return OperatorWord{i, o.j, phase + o.phase};
}

MatC OperatorWord::matrix(int dim) const {
    MatC m = MatC::Zero(dim, dim);
    m(i - 1, j - 1) = 1.0;
    return m;
}

Dissipator::Dissipator(int dim) : dim_(dim), image_(dim * dim, MatC::Zero(dim, dim)) {}

MatC Dissipator::apply(const MatC& X) const {
    MatC out = MatC::Zero(dim_, dim_);
    for (int i = 1; i <= dim_; ++i)
        for (int j = 1; j <= dim_; ++j)
            if (X(i - 1, j - 1) != 0.0) out += X(i - 1, j - 1) * image(i, j);
    return out;
}

namespace {

MatC unit(int dim, int i, int j) { return OperatorWord{i, j, 0}.matrix(dim); }

}  // namespace

Dissipator lambda_dissipator(double gamma, double gamma0, double lambda1, double lambda2) {
    Dissipator L(3);
    const MatC Id = MatC::Identity(3, 3);
    L.image(1, 1) = gamma * unit(3, 3, 3) - gamma0 * unit(3, 1, 1) + gamma0 * lambda1 * Id;
    L.image(2, 2) = gamma * unit(3, 3, 3) - gamma0 * unit(3, 2, 2) + gamma0 * lambda2 * Id;
    L.image(3, 3) = -(2.0 * gamma + gamma0) * unit(3, 3, 3);
    for (auto [i, j] : {std::pair{1, 3}, {3, 1}, {2, 3}, {3, 2}})
        L.image(i, j) = -gamma * unit(3, i, j);
    // no spontaneous-emission feeding of the ground-state coherence
    L.image(1, 2) = -gamma0 * unit(3, 1, 2);
    L.image(2, 1) = -gamma0 * unit(3, 2, 1);
    return L;
}

Dissipator two_level_dissipator(double gamma0, double lambda1, double lambda2) {
    Dissipator L(2);
    const MatC Id = MatC::Identity(2, 2);
    L.image(1, 1) = -gamma0 * unit(2, 1, 1) + gamma0 * lambda1 * Id;
    L.image(2, 2) = -gamma0 * unit(2, 2, 2) + gamma0 * lambda2 * Id;
    L.image(1, 2) = -gamma0 * unit(2, 1, 2);
    L.image(2, 1) = -gamma0 * unit(2, 2, 1);
    return L;
}

MatC einstein_diffusion(const std::vector<MatC>& X, const Dissipator& L, const MatC& means) {
    const int n = static_cast<int>(X.size());
    auto ev = [&](const MatC& A) { return A.cwiseProduct(means).sum(); };
    MatC D(n, n);
    for (int mu = 0; mu < n; ++mu) {
        const MatC LX = L.apply(X[mu]);
        for (int nu = 0; nu < n; ++nu) {
            const MatC Y = X[nu].adjoint();
            D(mu, nu) = ev(L.apply(X[mu] * Y) - LX * Y - X[mu] * L.apply(Y));
        }
    }
    return D;
}

MatC SteadyState3L::means() const {
    MatC m(3, 3);
    m << Pi1, std::conj(Pr), P1,
         Pr, Pi2, P2,
         std::conj(P1), std::conj(P2), Pi3;
    return m;
}

VecC rhs_10(const ThreeLevelParams& p, const VecC& xi, cplx a_in) {
    const cplx a = xi(0), ac = xi(1), P1 = xi(2), P1c = xi(3), P2 = xi(4), P2c = xi(5), Pr = xi(6), Prc = xi(7);
    const cplx S1 = xi(8), S2 = xi(9);
    const double N = p.N, g = p.gamma, g0 = p.gamma0, k = p.kappa;
    const double G = p.G();
    const cplx O = p.Omega1, Oc = std::conj(p.Omega1);
    const cplx Pi1 = (N + 4.0 * S1 - 2.0 * S2) / 3.0;
    const cplx Pi2 = (N + 4.0 * S2 - 2.0 * S1) / 3.0;
    const cplx Pi3 = (N - 2.0 * S1 - 2.0 * S2) / 3.0;
    const cplx W1 = I * Oc * P1 - I * O * P1c;
    const cplx W2 = I * G * ac * P2 - I * G * a * P2c;
    const cplx d1 = W1 + g * Pi3 - g0 * Pi1 + p.pump1();
    const cplx d2 = W2 + g * Pi3 - g0 * Pi2 + p.pump2();
    const cplx d3 = -W1 - W2 - (2.0 * g + g0) * Pi3;
    const double s2k = std::sqrt(2.0 * k);
    VecC f(10);
    f(0) = -(k + I * p.Delta_c) * a + I * G * P2 + s2k * a_in;
    f(1) = -(k - I * p.Delta_c) * ac - I * G * P2c + s2k * std::conj(a_in);
    f(2) = -(I * p.Delta1 + g) * P1 + I * O * (Pi1 - Pi3) + I * G * a * Prc;
    f(3) = -(-I * p.Delta1 + g) * P1c - I * Oc * (Pi1 - Pi3) - I * G * ac * Pr;
    f(4) = -(I * p.Delta2 + g) * P2 + I * G * a * (Pi2 - Pi3) + I * O * Pr;
    f(5) = -(-I * p.Delta2 + g) * P2c - I * G * ac * (Pi2 - Pi3) - I * Oc * Prc;
    f(6) = -(g0 - I * p.delta()) * Pr + I * Oc * P2 - I * G * a * P1c;
    f(7) = -(g0 + I * p.delta()) * Prc - I * O * P2c + I * G * ac * P1;
    f(8) = 0.5 * (d1 - d3);
    f(9) = 0.5 * (d2 - d3);
    return f;
}

VecC xi_mean(const SteadyState3L& s) {
    VecC xi(10);
    xi << s.a, std::conj(s.a), s.P1, std::conj(s.P1), s.P2, std::conj(s.P2), s.Pr, std::conj(s.Pr), s.Sz1(),
        s.Sz2();
    return xi;
}

namespace {

VecC xi_from(cplx a, const Eigen::Matrix<double, 8, 1>& u) {
    VecC xi(10);
    const cplx P1(u(0), u(1)), P2(u(2), u(3)), Pr(u(4), u(5));
    xi << a, std::conj(a), P1, std::conj(P1), P2, std::conj(P2), Pr, std::conj(Pr), u(6), u(7);
    return xi;
}

Eigen::Matrix<double, 8, 1> atomic_residual(const ThreeLevelParams& p, cplx a, const Eigen::Matrix<double, 8, 1>& u) {
    const VecC f = rhs_10(p, xi_from(a, u));
    Eigen::Matrix<double, 8, 1> r;
    r << f(2).real(), f(2).imag(), f(4).real(), f(4).imag(), f(6).real(), f(6).imag(), f(8).real(), f(9).real();
    return r;
}

double rate_scale(const ThreeLevelParams& p, cplx a) {
    return std::max({p.gamma, p.gamma0, p.kappa, std::abs(p.Omega1), std::abs(p.Delta1), std::abs(p.Delta2),
                     std::abs(p.Delta_c), p.G() * std::abs(a)});
}

cplx drive_for(const ThreeLevelParams& p, const SteadyState3L& s) {
    return ((p.kappa + I * p.Delta_c) * s.a - I * p.G() * s.P2) / std::sqrt(2.0 * p.kappa);
}

}  // namespace

SteadyState3L steady_state_at_field(const ThreeLevelParams& p, cplx a, double tol) {
    p.validate();
    // the atomic equations are affine in the atomic means for fixed a
    using V8 = Eigen::Matrix<double, 8, 1>;
    using M8 = Eigen::Matrix<double, 8, 8>;
    const V8 f0 = atomic_residual(p, a, V8::Zero());
    // linear part without the N- and pump-dependent constants, so the
    // columns carry no cancellation against f0
    ThreeLevelParams p0 = p;
    p0.N = 0.0;
    p0.Lambda1 = p0.Lambda2 = 0.0;
    M8 A;
    for (int k = 0; k < 8; ++k) A.col(k) = atomic_residual(p0, a, V8::Unit(k));
    const auto lu = A.fullPivLu();
    V8 u = lu.solve(-f0);
    u -= lu.solve(atomic_residual(p, a, u));

    SteadyState3L s;
    s.a = a;
    s.A2 = a / std::sqrt(p.tau);
    s.P1 = {u(0), u(1)};
    s.P2 = {u(2), u(3)};
    s.Pr = {u(4), u(5)};
    const double S1 = u(6), S2 = u(7), N = p.N;
    s.Pi1 = (N + 4.0 * S1 - 2.0 * S2) / 3.0;
    s.Pi2 = (N + 4.0 * S2 - 2.0 * S1) / 3.0;
    s.Pi3 = (N - 2.0 * S1 - 2.0 * S2) / 3.0;
    s.A_in = drive_for(p, s);

    s.residual = rhs_10(p, xi_mean(s), s.A_in).norm() / (N * rate_scale(p, a));
    if (!(s.residual <= tol))
        throw NoConvergenceError("three-level steady state: residual above tolerance", s.residual);
    const double ptol = 1e-9 * N;
    if (s.Pi1 < -ptol || s.Pi2 < -ptol || s.Pi3 < -ptol)
        throw UnphysicalBranchError("three-level steady state: negative population");
    return s;
}

std::vector<SteadyState3L> steady_state_3l(const ThreeLevelParams& p, double tol) {
    p.validate();
    const double target = std::abs(p.A_in);
    if (target == 0.0) {
        SteadyState3L s = steady_state_at_field(p, 0.0, tol);
        s.branch = "single";
        return {s};
    }
    const double kc = std::abs(cplx(p.kappa, p.Delta_c));
    const double x_max = 1.5 * (std::sqrt(2.0 * p.kappa) * target + p.G() * p.N) / kc;
    auto h = [&](double x) {
        const SteadyState3L s = steady_state_at_field(p, x, 1e-6);
        return std::norm(s.A_in) - target * target;
    };

    // bracket every sign change of |a_in(x)|^2 - |A_in|^2 on a log grid
    const int n = 4000;
    std::vector<double> xs{0.0};
    for (int k = 0; k < n; ++k) xs.push_back(x_max * std::pow(10.0, -10.0 + 10.0 * k / (n - 1)));
    std::vector<double> roots;
    double x0 = xs[0], h0 = h(x0);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double x1 = xs[k], h1 = h(x1);
        if (h1 == 0.0) {
            roots.push_back(x1);
        } else if ((h0 < 0.0) != (h1 < 0.0)) {
            boost::math::tools::eps_tolerance<double> stop(50);
            std::uintmax_t it = 200;
            auto [lo, hi] = boost::math::tools::toms748_solve(h, x0, x1, h0, h1, stop, it);
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        h0 = h1;
    }
    if (roots.empty())
        throw NoConvergenceError("three-level steady state: no intracavity intensity matches the drive",
                                 std::abs(h(x_max)));

    std::vector<SteadyState3L> out;
    std::string last_error;
    for (double x : roots) {
        try {
            SteadyState3L s = steady_state_at_field(p, x, 1e-9);
            // the equations are covariant under a -> a e^{i phi}, P2, Pr -> e^{i phi}
            const cplx rot = std::polar(1.0, std::arg(p.A_in) - std::arg(s.A_in));
            s.a *= rot;
            s.A2 *= rot;
            s.P2 *= rot;
            s.Pr *= rot;
            s.A_in = drive_for(p, s);
            s.residual = rhs_10(p, xi_mean(s), p.A_in).norm() / (p.N * rate_scale(p, s.a));
            if (!(s.residual <= tol))
                throw NoConvergenceError("three-level steady state: residual above tolerance", s.residual);
            out.push_back(s);
        } catch (const UnphysicalBranchError& e) {
            last_error = e.what();
        }
    }
    if (out.empty()) throw UnphysicalBranchError(last_error);
    if (out.size() == 1) {
        out[0].branch = "single";
    } else if (out.size() == 3) {
        out[0].branch = "lower";
        out[1].branch = "middle";
        out[2].branch = "upper";
    } else {
        for (std::size_t k = 0; k < out.size(); ++k) out[k].branch = "branch-" + std::to_string(k);
    }
    return out;
}

MatC drift_matrix_10(const ThreeLevelParams& p, const SteadyState3L& s) {
    const double g = p.gamma, g0 = p.gamma0, k = p.kappa, G = p.G();
    const cplx O = p.Omega1, Oc = std::conj(p.Omega1);
    const cplx a = s.a, ac = std::conj(s.a);
    const cplx P1 = s.P1, P1c = std::conj(s.P1), P2 = s.P2, P2c = std::conj(s.P2);
    const cplx Pr = s.Pr, Prc = std::conj(s.Pr);
    const double S2 = s.Sz2(), d = p.delta();
    enum { A, Ad, Q1, Q1d, Q2, Q2d, R, Rd, Z1, Z2 };

    // J = d(rhs)/d(xi); B = -J
    MatC J = MatC::Zero(10, 10);
    J(A, A) = -(k + I * p.Delta_c);
    J(A, Q2) = I * G;
    J(Ad, Ad) = -(k - I * p.Delta_c);
    J(Ad, Q2d) = -I * G;

    J(Q1, Q1) = -(I * p.Delta1 + g);
    J(Q1, Z1) = 2.0 * I * O;
    J(Q1, A) = I * G * Prc;
    J(Q1, Rd) = I * G * a;
    J(Q1d, Q1d) = -(g - I * p.Delta1);
    J(Q1d, Z1) = -2.0 * I * Oc;
    J(Q1d, Ad) = -I * G * Pr;
    J(Q1d, R) = -I * G * ac;

    J(Q2, Q2) = -(I * p.Delta2 + g);
    J(Q2, A) = 2.0 * I * G * S2;
    J(Q2, Z2) = 2.0 * I * G * a;
    J(Q2, R) = I * O;
    J(Q2d, Q2d) = -(g - I * p.Delta2);
    J(Q2d, Ad) = -2.0 * I * G * S2;
    J(Q2d, Z2) = -2.0 * I * G * ac;
    J(Q2d, Rd) = -I * Oc;

    J(R, R) = -(g0 - I * d);
    J(R, Q2) = I * Oc;
    J(R, A) = -I * G * P1c;
    J(R, Q1d) = -I * G * a;
    J(Rd, Rd) = -(g0 + I * d);
    J(Rd, Q2d) = -I * O;
    J(Rd, Ad) = I * G * P1;
    J(Rd, Q1) = I * G * ac;

    // Sz1 = (2 W1 + W2 + ...)/2, Sz2 = (W1 + 2 W2 + ...)/2
    const cplx dW1[2] = {I * Oc, -I * O};                                   // d/dP1, d/dP1+
    const cplx dW2[4] = {-I * G * P2c, I * G * P2, I * G * ac, -I * G * a};  // d/da, da+, dP2, dP2+
    const int w2idx[4] = {A, Ad, Q2, Q2d};
    for (int row = 0; row < 2; ++row) {
        const double c1 = row == 0 ? 1.0 : 0.5;
        const double c2 = row == 0 ? 0.5 : 1.0;
        const int r = row == 0 ? Z1 : Z2;
        J(r, Q1) += c1 * dW1[0];
        J(r, Q1d) += c1 * dW1[1];
        for (int m = 0; m < 4; ++m) J(r, w2idx[m]) += c2 * dW2[m];
    }
    J(Z1, Z1) = -(g + g0);
    J(Z1, Z2) = -g;
    J(Z2, Z1) = -g;
    J(Z2, Z2) = -(g + g0);
    return -J;
}

MatC diffusion_3l(const ThreeLevelParams& p, const SteadyState3L& s) {
    const int d = 3;
    const std::vector<MatC> X{
        unit(d, 1, 3), unit(d, 3, 1), unit(d, 2, 3), unit(d, 3, 2), unit(d, 2, 1), unit(d, 1, 2),
        0.5 * (unit(d, 1, 1) - unit(d, 3, 3)), 0.5 * (unit(d, 2, 2) - unit(d, 3, 3))};
    const double l1 = p.pump1() / (p.N * p.gamma0), l2 = p.pump2() / (p.N * p.gamma0);
    const Dissipator L = lambda_dissipator(p.gamma, p.gamma0, l1, l2);

    MatC D = MatC::Zero(10, 10);
    D.block(2, 2, 8, 8) = einstein_diffusion(X, L, s.means());
    const double r = p.squeeze.r, th = p.squeeze.theta;
    const double ch = std::cosh(r), sh = std::sinh(r);
    D(0, 0) = 2.0 * p.kappa * ch * ch;
    D(0, 1) = 2.0 * p.kappa * sh * ch * std::polar(1.0, th);
    D(1, 0) = 2.0 * p.kappa * sh * ch * std::polar(1.0, -th);
    D(1, 1) = 2.0 * p.kappa * sh * sh;
    return D;
}

FluctuationSystem fluctuation_system_10(const ThreeLevelParams& p, const SteadyState3L& s) {
    FluctuationSystem sys;
    sys.labels = AtomicBasis3::labels();
    sys.adjoint = AtomicBasis3::pairing();
    sys.source.assign(10, Source::atomic);
    sys.source[0] = sys.source[1] = Source::field;
    sys.field_index = 0;
    sys.kappa = p.kappa;
    sys.tau = p.tau;
    sys.B = drift_matrix_10(p, s);
    sys.D = diffusion_3l(p, s);
    sys.spin = SpinLayout::three_level;
    sys.spin_offset = AtomicBasis3::Pr;
    sys.mean_spin = Eigen::Vector3d(s.Pr.real(), s.Pr.imag(), 0.5 * (s.Pi2 - s.Pi1));
    return sys;
}

}  // namespace spinsq
