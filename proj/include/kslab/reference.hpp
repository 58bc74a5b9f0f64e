#pragma once

#include "kslab/field.hpp"
#include "kslab/space.hpp"

namespace kslab::ref {

// Serial reference kernels: exhaustive O(n^2) neighbor scans, plain
// left-to-right accumulation, no spatial index, no OpenMP. They exist to
// cross-check the production kernels and to anchor the benchmark.

Real ks_energy(const PointCloudSpace& space, const ScalarField& f, Real p, Real r);

Real ks_energy_local(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                     const IndexSet& u);

Real ks_pair(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p,
             Real r);

std::vector<Real> p_laplacian(const PointCloudSpace& space, const ScalarField& f, Real p, Real r);

} // namespace kslab::ref
