#pragma once

#include "spinsq/common.hpp"

#include <string>
#include <vector>

namespace spinsq {

enum class Source { field, atomic };

enum class SpinLayout {
    none,
    two_level,    // (S+, S-, Sz)
    three_level,  // (Pr, Pr^dag, Sz1, Sz2)
};

// Linearized dynamics d(dxi)/dt = -B dxi + F with <F_mu F_nu^dag> = D delta(t-t').
// Field variables are a = sqrt(tau) A2 and its adjoint.
struct FluctuationSystem {
    std::vector<std::string> labels;
    MatC B;
    MatC D;
    std::vector<int> adjoint;     // index of xi^dag for each xi
    std::vector<Source> source;   // which Langevin group drives each row
    int field_index = -1;         // position of a; a^dag sits right after it
    double kappa = 0.0;           // cavity decay in the system's time unit
    double tau = 1.0;

    SpinLayout spin = SpinLayout::none;
    int spin_offset = -1;         // first spin variable
    Eigen::Vector3d mean_spin = Eigen::Vector3d::Zero();  // (Sx, Sy, Sz), collective

    int size() const { return static_cast<int>(labels.size()); }
    bool has_field() const { return field_index >= 0; }

    // D with every row/column not belonging to `keep` zeroed.
    MatC diffusion_of(Source keep) const;
    // Structural checks: sizes, hermitian D, no field-atom cross terms.
    void check(double tol = 1e-12) const;
};

}  // namespace spinsq
