#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kslab/field.hpp"
#include "kslab/space.hpp"

namespace kslab {

// |d|^p with fast paths for the common exponents.
inline Real abs_pow(Real d, Real p) {
    if (p == 2.0) return d * d;
    const Real a = std::abs(d);
    if (p == 1.0) return a;
    if (p == 3.0) return a * a * a;
    if (p == 1.5) return a * std::sqrt(a);
    return a == 0.0 ? 0.0 : std::pow(a, p);
}

// |d|^{p-2} d, with the removable singularity at d = 0 set to 0.
inline Real signed_pow(Real d, Real p) {
    if (p == 2.0) return d;
    if (d == 0.0) return 0.0;
    const Real a = std::abs(d);
    if (p == 3.0) return a * d;
    if (p == 1.5) return d / std::sqrt(a);
    return std::pow(a, p - 2.0) * d;
}

// Neighbor lists and ball masses at a fixed radius, reused across repeated
// kernel evaluations (the Dirichlet solver hits the same radius thousands of
// times). Lists are sorted ascending and include the center point.
struct BallCache {
    Real r = 0.0;
    std::vector<std::vector<Index>> nbrs;
    std::vector<Real> ball_mass;

    static BallCache build(const PointCloudSpace& space, Real r);
};

struct EnergyValue {
    Real p = 0.0;
    Real r = 0.0;
    Real value = 0.0;
    std::vector<Real> density; // per-point e_r(x); sum of mu_x * density(x) == value
};

struct EnergySweep {
    Real p = 0.0;
    std::vector<Real> radii;  // strictly decreasing
    std::vector<Real> values;
    Real sup_estimate = 0.0;
    Real liminf_window = 0.0;
    Real limsup_window = 0.0;
    int fit_window = 4;
    std::optional<Real> extrapolated; // intercept of E(r) ~ E0 + a r over the window
    Real fit_residual = 0.0;          // rms residual of the fit
};

// E_{p,r}(f): ball averages of |f(y)-f(x)|^p, normalized by r^p.
EnergyValue ks_energy(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                      const BallCache* cache = nullptr);

// Outer sum restricted to U; the inner average still sees the full ball.
EnergyValue ks_energy_local(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                            const IndexSet& u, const BallCache* cache = nullptr);

// Pairing form with integrand |df|^{p-2} df dg; ks_pair(f,f) == ks_energy(f).
Real ks_pair(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p,
             Real r, const BallCache* cache = nullptr);

EnergySweep ks_sweep(const PointCloudSpace& space, const ScalarField& f, Real p,
                     std::span<const Real> radii, int fit_window = 4);

} // namespace kslab
