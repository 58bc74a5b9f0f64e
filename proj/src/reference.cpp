#include "kslab/reference.hpp"

#include <cmath>

#include "kslab/energy.hpp"

namespace kslab::ref {

namespace {

Real ball_mass(const PointCloudSpace& space, Index x, Real r) {
    Real m = 0.0;
    for (Index j = 0; j < space.size(); ++j)
        if (space.distance(x, j) < r) m += space.weight(j);
    return m;
}

} // namespace

Real ks_energy(const PointCloudSpace& space, const ScalarField& f, Real p, Real r) {
    return ref::ks_energy_local(space, f, p, r, IndexSet::full(space.size()));
}

Real ks_energy_local(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                     const IndexSet& u) {
    const Real rp = std::pow(r, p);
    Real total = 0.0;
    for (Index x : u.ids) {
        Real mass = 0.0, acc = 0.0;
        for (Index y = 0; y < space.size(); ++y) {
            if (space.distance(x, y) >= r) continue;
            mass += space.weight(y);
            acc += space.weight(y) * std::pow(std::abs(f[x] - f[y]), p);
        }
        total += space.weight(x) * (acc / mass);
    }
    return total / rp;
}

Real ks_pair(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p,
             Real r) {
    const Real rp = std::pow(r, p);
    Real total = 0.0;
    for (Index x = 0; x < space.size(); ++x) {
        Real mass = 0.0, acc = 0.0;
        for (Index y = 0; y < space.size(); ++y) {
            if (space.distance(x, y) >= r) continue;
            mass += space.weight(y);
            const Real df = f[x] - f[y];
            if (df != 0.0)
                acc += space.weight(y) * std::pow(std::abs(df), p - 2.0) * df * (g[x] - g[y]);
        }
        total += space.weight(x) * (acc / mass);
    }
    return total / rp;
}

std::vector<Real> p_laplacian(const PointCloudSpace& space, const ScalarField& f, Real p, Real r) {
    const Real rp = std::pow(r, p);
    const Index n = space.size();
    std::vector<Real> mass(static_cast<std::size_t>(n));
    for (Index x = 0; x < n; ++x) mass[static_cast<std::size_t>(x)] = ball_mass(space, x, r);
    std::vector<Real> out(static_cast<std::size_t>(n), 0.0);
    for (Index x = 0; x < n; ++x) {
        Real acc = 0.0;
        for (Index y = 0; y < n; ++y) {
            if (space.distance(x, y) >= r) continue;
            const Real df = f[x] - f[y];
            if (df == 0.0) continue;
            acc += space.weight(y) *
                   (1.0 / mass[static_cast<std::size_t>(x)] + 1.0 / mass[static_cast<std::size_t>(y)]) *
                   std::pow(std::abs(df), p - 2.0) * df;
        }
        out[static_cast<std::size_t>(x)] = -acc / rp;
    }
    return out;
}

} // namespace kslab::ref
