#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslab/energy.hpp"

namespace kslab {

// Approximate p-Laplacian at scale r:
//   Dp f(x) = -(1/r^p) sum_{y in B(x,r)} (1/mu(B(x,r)) + 1/mu(B(y,r)))
//             * |f(x)-f(y)|^{p-2} (f(x)-f(y)) mu_y
// The 1/r^p normalization makes the weak-form identity
//   sum_x mu_x (Dp f)(x) g(x) = -ks_pair(f, g)
// hold exactly at the level of the finite sums.
ScalarField p_laplacian(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                        const BallCache* cache = nullptr);

struct DirichletProblem {
    IndexSet boundary;
    std::vector<Real> boundary_values; // aligned with boundary.ids
    Real p = 2.0;
    Real r = 0.0;
};

struct SolveConfig {
    Real tol = 1e-8;        // stop when relative energy decrease falls below
    Real grad_tol = 1e-8;   // or when the interior gradient norm does
    int max_iters = 10000;
    Real delta = 1e-9;      // smoothing floor in |df|^{p-2} for 1 < p < 2
    bool record_history = true;
};

struct SolveReport {
    ScalarField minimizer;
    std::vector<Real> energy_history; // non-increasing over accepted steps
    int iterations = 0;
    Real final_energy = 0.0;
    Real final_grad_norm = 0.0;
    Real final_rel_decrease = 0.0;
    bool converged = false;
    std::string stop_reason;
    Real smoothing_delta = 0.0;
};

// Backtracking gradient descent on the interior values; the gradient is the
// restricted p-Laplacian, which is exact for the finite sum.
SolveReport dirichlet_solve(const PointCloudSpace& space, const DirichletProblem& problem,
                            const SolveConfig& config = {},
                            const ScalarField* warm_start = nullptr);

// Standard nonlocal Dirichlet constraint for coordinate spaces: pin every
// point within `width` of the c0-extremes (default width = r), with values
// interpolating v_lo .. v_hi affinely in c0. Constant data when v_lo == v_hi.
DirichletProblem end_collar_problem(const PointCloudSpace& space, Real v_lo, Real v_hi, Real p,
                                    Real r, Real width = 0.0);

struct SweepEntry {
    Real r = 0.0;
    SolveReport report;
    Real dist_prev = 0.0;                // sup distance to the previous minimizer
    std::optional<Real> dist_reference;  // sup distance to the supplied reference
};

std::vector<SweepEntry> minimizer_sweep(const PointCloudSpace& space,
                                        const DirichletProblem& problem_template,
                                        std::span<const Real> radii,
                                        const SolveConfig& config = {},
                                        const ScalarField* reference = nullptr);

// Same, with the problem rebuilt per radius (collar constraints follow r).
std::vector<SweepEntry> minimizer_sweep(const PointCloudSpace& space,
                                        const std::function<DirichletProblem(Real)>& problem_at,
                                        std::span<const Real> radii,
                                        const SolveConfig& config = {},
                                        const ScalarField* reference = nullptr);

} // namespace kslab
