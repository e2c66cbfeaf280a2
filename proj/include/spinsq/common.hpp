#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinsq {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

// Bad input, missing or conflicting parameters.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Anything that goes wrong inside a numerical routine.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Drift matrix has an eigenvalue with non-positive real part.
class InstabilityError : public NumericalError {
public:
    InstabilityError(const std::string& what, VecC eigenvalues)
        : NumericalError(what), eigenvalues_(std::move(eigenvalues)) {}
    const VecC& eigenvalues() const { return eigenvalues_; }
private:
    VecC eigenvalues_;
};

// lambda_i + conj(lambda_j) ~ 0: operating point sits on a turning point.
class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergenceError : public NumericalError {
public:
    NoConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const { return residual_; }
private:
    double residual_;
};

class UnphysicalBranchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Raman reduction requested outside |Delta| >> gamma, |Omega1|.
class ReductionInvalidError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Mean spin vanishes, so the mean-spin frame is undefined.
class DegenerateSpinError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace spinsq
