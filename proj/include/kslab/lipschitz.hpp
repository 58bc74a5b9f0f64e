#pragma once

#include <span>
#include <vector>

#include "kslab/covers.hpp"
#include "kslab/field.hpp"

namespace kslab {

// Discrete pointwise Lipschitz constant: max over y in B(x, r_lip) \ {x} of
// |f(x)-f(y)| / d(x,y). Default scale r_lip = 3h stands in for limsup_{r->0}.
ScalarField discrete_lip_field(const PointCloudSpace& space, const ScalarField& f,
                               Real r_lip = 0.0);

struct LipApproxReport {
    Real eps = 0.0;
    ScalarField f_eps;
    Real lp_error = 0.0; // || f_eps - f ||_p
};

// f_eps(x) = sum_i (mean of f over B(center_i, eps)) * phi_i(x).
LipApproxReport lip_approx(const PointCloudSpace& space, const ScalarField& f,
                           const PartitionOfUnity& pou, Real p = 2.0);

struct LipBoundCheck {
    // Per net ball B_j: empirical max quotient of f_eps inside B_j, and the
    // averaged-energy right-hand side at scale eps.
    std::vector<Real> empirical;
    std::vector<Real> bound_rhs;
    Real max_ratio = 0.0; // realized constant, reported rather than asserted
};

LipBoundCheck lip_bound_check(const PointCloudSpace& space, const ScalarField& f,
                              const PartitionOfUnity& pou, Real p);

// Pointwise max of |f|(x) and ball averages of |f| over the radius grid.
ScalarField maximal_function(const PointCloudSpace& space, const ScalarField& f,
                             std::span<const Real> radii);

// Default grid for the sup over r: logarithmic from 3h to the diameter.
std::vector<Real> maximal_radius_grid(const PointCloudSpace& space, int count = 8);

} // namespace kslab
