#pragma once

#include "spinsq/common.hpp"
#include "spinsq/params.hpp"
#include "spinsq/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spinsq {

// Fluctuation variables of the full model, in this order.
struct AtomicBasis3 {
    enum Index { A2 = 0, A2d, P1, P1d, P2, P2d, Pr, Prd, Sz1, Sz2, size };
    static const std::vector<std::string>& labels();
    static const std::vector<int>& pairing();
};

// Single-atom transition |i><j| (levels 1..n). The phase tag is the net
// rotating-frame frequency label, additive under products.
struct OperatorWord {
    int i = 1;
    int j = 1;
    int phase = 0;

    static OperatorWord make(int i, int j, const std::vector<int>& level_phase);
    // |i><j| |k><l| = delta_jk |i><l|
    std::optional<OperatorWord> operator*(const OperatorWord& o) const;
    OperatorWord adjoint() const { return {j, i, -phase}; }
    MatC matrix(int dim) const;
};

// Heisenberg-picture dissipative generator on single-atom operators,
// stored as the image of every matrix unit.
class Dissipator {
public:
    explicit Dissipator(int dim);
    int dim() const { return dim_; }
    MatC& image(int i, int j) { return image_[(i - 1) * dim_ + (j - 1)]; }
    const MatC& image(int i, int j) const { return image_[(i - 1) * dim_ + (j - 1)]; }
    MatC apply(const MatC& X) const;

private:
    int dim_;
    std::vector<MatC> image_;
};

// Decay gamma from 3 to each ground level, ground relaxation gamma0 with
// repumping lambda1, lambda2 (fractions of gamma0).
Dissipator lambda_dissipator(double gamma, double gamma0, double lambda1, double lambda2);
Dissipator two_level_dissipator(double gamma0, double lambda1, double lambda2);

// D_mu,nu = < L(X_mu X_nu^dag) - L(X_mu) X_nu^dag - X_mu L(X_nu^dag) >
// with <X> = sum_ij X_ij means(i,j), means(i,j) = <sum over atoms |i><j|>.
MatC einstein_diffusion(const std::vector<MatC>& X, const Dissipator& L, const MatC& means);

struct SteadyState3L {
    cplx a = 0.0;     // sqrt(tau) <A2>
    cplx A2 = 0.0;
    cplx A_in = 0.0;
    cplx P1 = 0.0;
    cplx P2 = 0.0;
    cplx Pr = 0.0;
    double Pi1 = 0.0;
    double Pi2 = 0.0;
    double Pi3 = 0.0;
    std::string branch = "given-field";
    double residual = 0.0;

    double Sz1() const { return 0.5 * (Pi1 - Pi3); }
    double Sz2() const { return 0.5 * (Pi2 - Pi3); }
    MatC means() const;  // <|i><j|> collective
};

// Deterministic right-hand side of the mean equations, xi in AtomicBasis3
// order with a = sqrt(tau) A2 and a_in the flux-normalized input.
VecC rhs_10(const ThreeLevelParams& p, const VecC& xi, cplx a_in = 0.0);
VecC xi_mean(const SteadyState3L& ss);

// Atomic steady state for a prescribed intracavity field; the drive that
// sustains it follows from the field equation.
SteadyState3L steady_state_at_field(const ThreeLevelParams& p, cplx a, double tol = 1e-12);

// All physical steady states for the drive p.A_in, ordered by intensity.
std::vector<SteadyState3L> steady_state_3l(const ThreeLevelParams& p, double tol = 1e-12);

MatC drift_matrix_10(const ThreeLevelParams& p, const SteadyState3L& ss);
MatC diffusion_3l(const ThreeLevelParams& p, const SteadyState3L& ss);
FluctuationSystem fluctuation_system_10(const ThreeLevelParams& p, const SteadyState3L& ss);

}  // namespace spinsq
