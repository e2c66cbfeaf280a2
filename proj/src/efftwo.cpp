#include "spinsq/efftwo.hpp"

#include "spinsq/noise.hpp"
#include "spinsq/spinframe.hpp"

#include <cmath>
#include <sstream>

namespace spinsq {

namespace {

// Parameters of the model actually integrated: two-level units, after the
// pumping assignment if Gamma_p > 0.
struct Model {
    EffectiveParams q;
    double kappa = 0.0;
    double G = 0.0;
    double f = 0.0;      // Gamma_p / gamma0(two-level)
    double scale = 1.0;  // time-unit conversion
};

Model resolve(const EffectiveParams& p) {
    p.validate();
    Model m;
    m.scale = assign_scale(p);
    m.q = p.Gamma_p_ratio > 0.0 ? assign(p) : p;
    m.f = p.Gamma_p_ratio / m.scale;
    const UnitScheme u = dimensionless_scheme(m.q);
    m.kappa = u.kappa;
    m.G = u.G;
    return m;
}

void check_spin(const EffectiveParams& q) {
    if (q.lambda2 == q.lambda1)
        throw DegenerateSpinError("lambda1 = lambda2: mean spin vanishes");
    if (q.lambda2 < q.lambda1)
        throw ConfigError("lambda1 > lambda2 (inverted mean spin) is not supported");
}

Eigen::Matrix3cd tabulated_dat(double lambda1, double lambda2, const SteadyState2L& ss, double N) {
    const double l = lambda1 - lambda2;
    const cplx sp = ss.s_plus, sm = ss.s_minus;
    const double sz = ss.s_z;
    Eigen::Matrix3cd D;
    D << 1.0 + l / 2.0 - sz, 0.0, (1.0 + l) * sm / 2.0,
         0.0, 1.0 - l / 2.0 + sz, (-1.0 + l) * sp / 2.0,
         (1.0 + l) * sp / 2.0, (-1.0 + l) * sm / 2.0, 0.5 + l * sz;
    return N * D;
}

Eigen::Matrix3cd exchange_coherences(const Eigen::Matrix3cd& D) {
    Eigen::Matrix3d P;
    P << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    return P.cast<cplx>() * D * P.cast<cplx>();
}

}  // namespace

SteadyState2L steady_state(const EffectiveParams& p, double I2) {
    p.validate();
    if (p.Gamma_p_ratio != 0.0)
        throw ConfigError("steady_state: Gamma_p_ratio > 0, use assign() or corrected_steady_state()");
    check_spin(p);
    if (I2 < 0.0) throw ConfigError("steady_state: I2 must be non-negative");
    const double lam = p.lambda();
    const double db = p.delta_bar;
    const double b = std::sqrt(I2);
    const double den = 1.0 + db * db + 4.0 * I2;
    SteadyState2L s;
    s.beta2 = b;
    s.I2 = I2;
    s.s_plus = lam * b * (I - db) / den;
    s.s_minus = std::conj(s.s_plus);
    s.s_z = 0.5 * lam * (1.0 + db * db) / den;
    return s;
}

SteadyState2L corrected_steady_state(const EffectiveParams& p, double I2, double omega_ratio) {
    p.validate();
    if (I2 < 0.0) throw ConfigError("corrected_steady_state: I2 must be non-negative");
    const Model m = resolve(p);
    check_spin(m.q);
    const double lam = m.q.lambda();
    const double db = m.q.delta_bar;
    const double I2q = I2 / (m.scale * m.scale);
    const double b = std::sqrt(I2q);
    const double w = m.f * omega_ratio;
    SteadyState2L s;
    s.beta2 = std::sqrt(I2);
    s.I2 = I2;
    s.unit_scale = m.scale;
    s.omega_ratio = omega_ratio;
    s.omega_per_beta = b > 0.0 ? omega_ratio / b : 0.0;
    s.s_z = (0.5 * lam * (1.0 + db * db) + 2.0 * b * w * db) / (1.0 + db * db + 4.0 * I2q);
    s.s_plus = (2.0 * I * b * s.s_z - w) / (1.0 - I * db);
    s.s_minus = std::conj(s.s_plus);
    return s;
}

double input_intensity(const EffectiveParams& p, double I2) {
    const Model m = resolve(p);
    const double C = m.q.Ctilde;
    const double db = m.q.delta_bar, dc = m.q.delta_c;
    const double I2q = I2 / (m.scale * m.scale);
    const double den = 1.0 + db * db + 4.0 * I2q;
    const double re = 1.0 + 2.0 * C / den;
    const double im = dc + 2.0 * C * db / den;
    return I2q * (re * re + im * im) * m.scale * m.scale;
}

MatC drift_matrix_5(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    const double k = m.kappa, G = m.G, N = m.q.N;
    const double db = m.q.delta_bar, dc = m.q.delta_c;
    const double b = ss.beta2 / ss.unit_scale;
    const cplx Sp = N * ss.s_plus, Sm = N * ss.s_minus;
    const double Sz = N * ss.s_z;

    MatC B = MatC::Zero(5, 5);
    B(0, 0) = k * (1.0 + I * dc);
    B(0, 2) = -I * G;
    B(1, 1) = k * (1.0 - I * dc);
    B(1, 3) = I * G;
    B(2, 0) = -2.0 * I * G * Sz;
    B(2, 2) = 1.0 - I * db;
    B(2, 4) = -2.0 * I * b;
    B(3, 1) = 2.0 * I * G * Sz;
    B(3, 3) = 1.0 + I * db;
    B(3, 4) = 2.0 * I * b;
    B(4, 0) = I * G * Sm;
    B(4, 1) = -I * G * Sp;
    B(4, 2) = -I * b;
    B(4, 3) = I * b;
    B(4, 4) = 1.0;

    if (p.Gamma_p_ratio > 0.0) {
        const double q = ss.omega_per_beta;
        const double Pi2 = 0.5 * N + Sz;
        // dispersive field term (i G^2 q Pi2) a with dPi2 = dSz
        B(0, 0) -= I * G * G * q * Pi2;
        B(1, 1) += I * G * G * q * Pi2;
        B(0, 4) = -I * G * q * b;
        B(1, 4) = I * G * q * b;
        // -f (Omega2/Omega1) N drive on the coherence
        B(2, 0) += m.f * q * G * N;
        B(3, 1) += m.f * q * G * N;
    }
    return B;
}

Eigen::Matrix2cd diffusion_field(const EffectiveParams& p) {
    const double k = resolve(p).kappa;
    const double r = p.squeeze.r, th = p.squeeze.theta;
    const double ch = std::cosh(r), sh = std::sinh(r);
    Eigen::Matrix2cd D;
    D << ch * ch, sh * ch * std::polar(1.0, th),
         sh * ch * std::polar(1.0, -th), sh * sh;
    return 2.0 * k * D;
}

Eigen::Matrix3cd diffusion_atomic(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    return tabulated_dat(m.q.lambda1, m.q.lambda2, ss, m.q.N);
}

Eigen::Matrix3cd diffusion_atomic_system(const EffectiveParams& p, const SteadyState2L& ss) {
    return exchange_coherences(diffusion_atomic(p, ss));
}

FluctuationSystem fluctuation_system_5(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    FluctuationSystem sys;
    sys.labels = {"a", "a+", "S+", "S-", "Sz"};
    sys.adjoint = {1, 0, 3, 2, 4};
    sys.source = {Source::field, Source::field, Source::atomic, Source::atomic, Source::atomic};
    sys.field_index = 0;
    sys.kappa = m.kappa;
    sys.tau = p.tau;
    sys.B = drift_matrix_5(p, ss);
    sys.D = MatC::Zero(5, 5);
    sys.D.block(0, 0, 2, 2) = diffusion_field(p);
    sys.D.block(2, 2, 3, 3) = diffusion_atomic_system(p, ss);
    sys.spin = SpinLayout::two_level;
    sys.spin_offset = 2;
    const double N = m.q.N;
    sys.mean_spin = N * Eigen::Vector3d(ss.s_plus.real(), ss.s_plus.imag(), ss.s_z);
    return sys;
}

AdiabaticDrift adiabatic_drift(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    const double C = m.q.Ctilde / m.q.lambda();
    const double db = m.q.delta_bar, dc = m.q.delta_c;
    const double b = ss.beta2 / ss.unit_scale;
    const cplx up = 1.0 / (1.0 + I * dc), um = 1.0 / (1.0 - I * dc);
    AdiabaticDrift a;
    a.B << 1.0 - I * db + 4.0 * C * ss.s_z * up, 0.0, -2.0 * I * b,
           0.0, 1.0 + I * db + 4.0 * C * ss.s_z * um, 2.0 * I * b,
           -I * b - 2.0 * C * ss.s_minus * up, I * b - 2.0 * C * ss.s_plus * um, 1.0;
    a.gamma_prime = 1.0 + 4.0 * C * ss.s_z / (1.0 + dc * dc);
    // needs gamma0 << gamma' << kappa
    if (!(a.gamma_prime < 0.1 * m.kappa) || !(m.q.Ctilde >= 1.0)) {
        a.regime_ok = false;
        std::ostringstream os;
        os << "adiabatic elimination outside its regime: gamma' = " << a.gamma_prime << ", kappa = " << m.kappa
           << ", Ctilde = " << m.q.Ctilde;
        a.warning = os.str();
    }
    return a;
}

Eigen::Matrix3cd adiabatic_field_kernel(const SteadyState2L& ss) {
    const double sz = ss.s_z;
    Eigen::Matrix3cd M;
    M << 4.0 * sz * sz, 0.0, -2.0 * sz * ss.s_plus,
         0.0, 0.0, 0.0,
         -2.0 * sz * ss.s_minus, 0.0, ss.s_plus * ss.s_minus;
    return M;
}

Eigen::Matrix3cd adiabatic_diffusion(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    const double k = m.kappa, G = m.G, N = m.q.N;
    const double dc = m.q.delta_c;
    const cplx Sp = N * ss.s_plus, Sm = N * ss.s_minus;
    const double Sz = N * ss.s_z;
    // coherence/inversion response to the field noise, -B_af B_ff^-1
    Eigen::Matrix<cplx, 3, 2> K;
    K << 2.0 * I * G * Sz / (k * (1.0 + I * dc)), 0.0,
         0.0, -2.0 * I * G * Sz / (k * (1.0 - I * dc)),
         -I * G * Sm / (k * (1.0 + I * dc)), I * G * Sp / (k * (1.0 - I * dc));
    return diffusion_atomic_system(p, ss) + K * diffusion_field(p) * K.adjoint();
}

FluctuationSystem adiabatic_system(const EffectiveParams& p, const SteadyState2L& ss) {
    const Model m = resolve(p);
    FluctuationSystem sys;
    sys.labels = {"S+", "S-", "Sz"};
    sys.adjoint = {1, 0, 2};
    sys.source = {Source::atomic, Source::atomic, Source::atomic};
    sys.tau = p.tau;
    sys.B = adiabatic_drift(p, ss).B;
    sys.D = adiabatic_diffusion(p, ss);
    sys.spin = SpinLayout::two_level;
    sys.spin_offset = 0;
    sys.mean_spin = m.q.N * Eigen::Vector3d(ss.s_plus.real(), ss.s_plus.imag(), ss.s_z);
    return sys;
}

double analytic_min_variance(double Ctilde, double delta_bar) {
    EffectiveParams p;
    p.Ctilde = Ctilde;
    p.delta_bar = delta_bar;
    p.delta_c = 0.0;
    p.lambda1 = 0.0;
    p.lambda2 = 1.0;
    const SteadyState2L ss = steady_state(p, 0.25 * (1.0 + delta_bar * delta_bar));
    const FluctuationSystem sys = adiabatic_system(p, ss);
    return squeezing_report(sys, solve_lyapunov(sys).G).dS_min;
}

}  // namespace spinsq
