#pragma once

#include <span>
#include <vector>

#include "kslab/energy.hpp"

namespace kslab {

// Localized energies per cell of a partition: the scale-r stand-in for the
// energy measure, additive by construction.
struct EnergyMeasureReport {
    Real p = 0.0;
    Real r = 0.0;
    std::vector<IndexSet> cells;
    std::vector<Real> masses;
    std::vector<Real> density; // per-point e_r(x) relative to mu
    Real max_density = 0.0;
    Real total = 0.0; // ks_energy value
};

EnergyMeasureReport energy_measure(const PointCloudSpace& space, const ScalarField& f, Real p,
                                   Real r, std::span<const IndexSet> cells);

struct DensityReport {
    ScalarField density;
    Real max_density = 0.0;
    bool p1_warning = false; // absolute continuity context needs p > 1
};

DensityReport density_vs_mu(const PointCloudSpace& space, const ScalarField& f, Real p, Real r);

enum class PoincareMode { Lip, EnergyMeasure };

struct PoincareReport {
    Real worst_ratio = 0.0;
    std::vector<Real> ratios; // one per sampled center
    std::vector<Index> centers;
};

// Ratio of the ball oscillation integral to R^p times the gradient surrogate
// on the dilated ball; the max over sampled centers estimates the Poincare
// constant. EnergyMeasure mode uses the localized energy at scale R/4.
PoincareReport poincare_check(const PointCloudSpace& space, const ScalarField& f, Real p, Real R,
                              Real lambda, PoincareMode mode, Index max_samples = 64);

struct CutoffField {
    IndexSet a_prime;
    IndexSet a;
    ScalarField values;
    Real separation = 0.0; // d(A', A^c); Lipschitz constant is 1/separation
};

// phi(x) = min{ d(x, A^c), d(A', A^c) } / d(A', A^c), clamped to [0,1].
CutoffField cutoff(const PointCloudSpace& space, const IndexSet& a_prime, const IndexSet& a);

struct FundamentalEstimate {
    Real lhs = 0.0;
    Real rhs = 0.0;
    Real slack = 0.0;    // rhs - lhs
    Real coupling = 0.0; // integral of |f-g|^p over S_r
    Real separation = 0.0;
    Real constant_used = 0.0; // C = C_geom / d(A',A^c)^p
};

// Gluing inequality for phi f + (1-phi) g on A' u B. The calibrated constant
// is geometry-normalized: C = c_geom / d(A',A^c)^p, mirroring the cutoff
// Lipschitz constant the bound depends on.
FundamentalEstimate fundamental_estimate_check(const PointCloudSpace& space, const ScalarField& f,
                                               const ScalarField& g, const IndexSet& a,
                                               const IndexSet& a_prime, const IndexSet& b,
                                               Real eps_cvx, Real p, Real r, Real c_geom);

// Smallest geometry-normalized constant that makes the estimate hold for one
// configuration (at least 1); calibration takes the max over a config set.
Real fundamental_required_constant(const PointCloudSpace& space, const ScalarField& f,
                                   const ScalarField& g, const IndexSet& a,
                                   const IndexSet& a_prime, const IndexSet& b, Real eps_cvx,
                                   Real p, Real r);

} // namespace kslab
