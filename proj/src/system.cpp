#include "spinsq/system.hpp"

#include <sstream>

namespace spinsq {

MatC FluctuationSystem::diffusion_of(Source keep) const {
    MatC out = D;
    for (int i = 0; i < size(); ++i) {
        if (source[i] == keep) continue;
        out.row(i).setZero();
        out.col(i).setZero();
    }
    return out;
}

void FluctuationSystem::check(double tol) const {
    const int n = size();
    if (B.rows() != n || B.cols() != n || D.rows() != n || D.cols() != n)
        throw NumericalError("fluctuation system: matrix size does not match basis");
    if (static_cast<int>(adjoint.size()) != n || static_cast<int>(source.size()) != n)
        throw NumericalError("fluctuation system: incomplete basis metadata");
    for (int i = 0; i < n; ++i)
        if (adjoint[adjoint[i]] != i)
            throw NumericalError("fluctuation system: adjoint map is not an involution");
    const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
    if ((D - D.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw NumericalError("fluctuation system: diffusion matrix is not hermitian");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (source[i] != source[j] && std::abs(D(i, j)) > tol * scale) {
                std::ostringstream os;
                os << "fluctuation system: cross diffusion between " << labels[i] << " and " << labels[j];
                throw NumericalError(os.str());
            }
}

}  // namespace spinsq
