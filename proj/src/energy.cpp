#include "kslab/energy.hpp"

#include <algorithm>
#include <cmath>

namespace kslab {

namespace {

void validate_energy_args(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                          const char* what) {
    require_bound(space, f, what);
    if (!(p >= 1.0)) throw ExponentBelowOne(std::string(what) + ": requires p >= 1");
    space.require_scale(r, what);
}

void validate_cache(const BallCache* cache, Real r, const char* what) {
    if (cache && cache->r != r)
        throw config_error(std::string(what) + ": ball cache built at a different radius");
}

} // namespace

BallCache BallCache::build(const PointCloudSpace& space, Real r) {
    BallCache c;
    c.r = r;
    const Index n = space.size();
    c.nbrs.resize(static_cast<std::size_t>(n));
    c.ball_mass.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        auto& nb = c.nbrs[static_cast<std::size_t>(i)];
        space.ball_into(i, r, nb);
        CompensatedSum mass;
        for (Index j : nb) mass.add(space.weight(j));
        c.ball_mass[static_cast<std::size_t>(i)] = mass.get();
    }
    return c;
}

EnergyValue ks_energy(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                      const BallCache* cache) {
    return ks_energy_local(space, f, p, r, IndexSet::full(space.size()), cache);
}

EnergyValue ks_energy_local(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                            const IndexSet& u, const BallCache* cache) {
    validate_energy_args(space, f, p, r, "ks_energy");
    validate_cache(cache, r, "ks_energy");
    if (u.empty()) throw EmptySet("ks_energy_local: U is empty");

    EnergyValue out;
    out.p = p;
    out.r = r;
    out.density.assign(static_cast<std::size_t>(space.size()), 0.0);
    const Real rp = abs_pow(r, p);
    const auto m = static_cast<Index>(u.ids.size());

#pragma omp parallel
    {
        std::vector<Index> scratch;
#pragma omp for schedule(static)
        for (Index k = 0; k < m; ++k) {
            const Index x = u.ids[static_cast<std::size_t>(k)];
            const Real fx = f[x];
            CompensatedSum mass, acc;
            if (cache) {
                const auto& nb = cache->nbrs[static_cast<std::size_t>(x)];
                for (Index j : nb) acc.add(space.weight(j) * abs_pow(fx - f[j], p));
                out.density[static_cast<std::size_t>(x)] =
                    acc.get() / (cache->ball_mass[static_cast<std::size_t>(x)] * rp);
            } else {
                space.ball_into(x, r, scratch);
                for (Index j : scratch) {
                    mass.add(space.weight(j));
                    acc.add(space.weight(j) * abs_pow(fx - f[j], p));
                }
                out.density[static_cast<std::size_t>(x)] = acc.get() / (mass.get() * rp);
            }
        }
    }
    out.value = pairwise_dot(space.weights(), out.density);
    return out;
}

Real ks_pair(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p,
             Real r, const BallCache* cache) {
    require_bound(space, f, "ks_pair");
    require_bound(space, g, "ks_pair");
    if (!(p > 1.0)) throw ExponentNotAboveOne("ks_pair: requires p > 1");
    space.require_scale(r, "ks_pair");
    validate_cache(cache, r, "ks_pair");

    const Index n = space.size();
    std::vector<Real> density(static_cast<std::size_t>(n), 0.0);
    const Real rp = abs_pow(r, p);

#pragma omp parallel
    {
        std::vector<Index> scratch;
#pragma omp for schedule(static)
        for (Index x = 0; x < n; ++x) {
            const Real fx = f[x];
            const Real gx = g[x];
            CompensatedSum mass, acc;
            if (cache) {
                const auto& nb = cache->nbrs[static_cast<std::size_t>(x)];
                for (Index j : nb) {
                    const Real df = fx - f[j];
                    acc.add(space.weight(j) * (signed_pow(df, p) * (gx - g[j])));
                }
                density[static_cast<std::size_t>(x)] =
                    acc.get() / (cache->ball_mass[static_cast<std::size_t>(x)] * rp);
            } else {
                space.ball_into(x, r, scratch);
                for (Index j : scratch) {
                    const Real df = fx - f[j];
                    mass.add(space.weight(j));
                    acc.add(space.weight(j) * (signed_pow(df, p) * (gx - g[j])));
                }
                density[static_cast<std::size_t>(x)] = acc.get() / (mass.get() * rp);
            }
        }
    }
    return pairwise_dot(space.weights(), density);
}

EnergySweep ks_sweep(const PointCloudSpace& space, const ScalarField& f, Real p,
                     std::span<const Real> radii, int fit_window) {
    if (radii.empty()) throw config_error("ks_sweep: empty radius list");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1]))
            throw config_error("ks_sweep: radii must be strictly decreasing");

    EnergySweep sw;
    sw.p = p;
    sw.radii.assign(radii.begin(), radii.end());
    sw.fit_window = fit_window;
    for (Real r : radii) sw.values.push_back(ks_energy(space, f, p, r).value);

    sw.sup_estimate = *std::max_element(sw.values.begin(), sw.values.end());
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(fit_window, 1)),
                                                sw.values.size());
    const std::size_t first = sw.values.size() - w;
    sw.liminf_window = *std::min_element(sw.values.begin() + first, sw.values.end());
    sw.limsup_window = *std::max_element(sw.values.begin() + first, sw.values.end());

    if (w >= 2) {
        // Least squares E(r) ~ E0 + a r over the trailing window.
        Real sx = 0, sy = 0;
        for (std::size_t k = first; k < sw.values.size(); ++k) {
            sx += sw.radii[k];
            sy += sw.values[k];
        }
        const Real mx = sx / w, my = sy / w;
        Real sxx = 0, sxy = 0;
        for (std::size_t k = first; k < sw.values.size(); ++k) {
            sxx += (sw.radii[k] - mx) * (sw.radii[k] - mx);
            sxy += (sw.radii[k] - mx) * (sw.values[k] - my);
        }
        const Real slope = sxx > 0.0 ? sxy / sxx : 0.0;
        const Real e0 = my - slope * mx;
        sw.extrapolated = e0;
        Real ss = 0;
        for (std::size_t k = first; k < sw.values.size(); ++k) {
            const Real resid = sw.values[k] - (e0 + slope * sw.radii[k]);
            ss += resid * resid;
        }
        sw.fit_residual = std::sqrt(ss / w);
    } else {
        sw.extrapolated = sw.values.back();
        sw.fit_residual = 0.0;
    }
    return sw;
}

} // namespace kslab
