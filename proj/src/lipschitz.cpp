#include "kslab/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "kslab/energy.hpp"

namespace kslab {

ScalarField discrete_lip_field(const PointCloudSpace& space, const ScalarField& f, Real r_lip) {
    require_bound(space, f, "discrete_lip_field");
    if (r_lip <= 0.0) r_lip = 3.0 * space.resolution();
    if (r_lip <= 0.0) return make_constant(space, 0.0);
    std::vector<Real> out(static_cast<std::size_t>(space.size()), 0.0);
    const Index n = space.size();
#pragma omp parallel
    {
        std::vector<Index> buf;
#pragma omp for schedule(static)
        for (Index i = 0; i < n; ++i) {
            Real worst = 0.0;
            space.ball_into(i, r_lip, buf);
            for (Index j : buf) {
                if (j == i) continue;
                const Real d = space.distance(i, j);
                if (d > 0.0) worst = std::max(worst, std::abs(f[i] - f[j]) / d);
            }
            out[static_cast<std::size_t>(i)] = worst;
        }
    }
    return bind_field(space, std::move(out));
}

namespace {

Real ball_average(const PointCloudSpace& space, const ScalarField& f, Index center, Real radius,
                  std::vector<Index>& buf) {
    space.ball_into(center, radius, buf);
    CompensatedSum mass, acc;
    for (Index j : buf) {
        mass.add(space.weight(j));
        acc.add(space.weight(j) * f[j]);
    }
    return acc.get() / mass.get();
}

} // namespace

LipApproxReport lip_approx(const PointCloudSpace& space, const ScalarField& f,
                           const PartitionOfUnity& pou, Real p) {
    require_bound(space, f, "lip_approx");
    if (pou.space_id != space.id())
        throw SpaceMismatch("lip_approx: partition built on a different space");

    LipApproxReport rep;
    rep.eps = pou.net.eps;
    std::vector<Real> vals(static_cast<std::size_t>(space.size()), 0.0);
    std::vector<Index> buf;
    for (std::size_t k = 0; k < pou.support.size(); ++k) {
        const Real avg = ball_average(space, f, pou.net.centers.ids[k], pou.net.eps, buf);
        const auto& sup = pou.support[k];
        const auto& phi = pou.phi[k];
        for (std::size_t t = 0; t < sup.size(); ++t)
            vals[static_cast<std::size_t>(sup[t])] += avg * phi[t];
    }
    rep.f_eps = bind_field(space, std::move(vals));
    rep.lp_error = lp_distance(space, rep.f_eps, f, p);
    return rep;
}

LipBoundCheck lip_bound_check(const PointCloudSpace& space, const ScalarField& f,
                              const PartitionOfUnity& pou, Real p) {
    const LipApproxReport approx = lip_approx(space, f, pou, p);
    const Real eps = pou.net.eps;
    LipBoundCheck chk;
    chk.empirical.resize(pou.support.size(), 0.0);
    chk.bound_rhs.resize(pou.support.size(), 0.0);

    std::vector<Index> ball_j, ball_x;
    for (std::size_t k = 0; k < pou.support.size(); ++k) {
        const Index c = pou.net.centers.ids[k];

        // Empirical quotient of f_eps over pairs inside B_j = B(c, eps).
        space.ball_into(c, eps, ball_j);
        Real emp = 0.0;
        for (std::size_t a = 0; a < ball_j.size(); ++a) {
            for (std::size_t b = a + 1; b < ball_j.size(); ++b) {
                const Real d = space.distance(ball_j[a], ball_j[b]);
                if (d > 0.0)
                    emp = std::max(emp, std::abs(approx.f_eps[ball_j[a]] -
                                                 approx.f_eps[ball_j[b]]) / d);
            }
        }
        chk.empirical[k] = emp;

        // ( eps^{-p} avg_{5B_j} avg_{B(x,2eps)} |f(x)-f(y)|^p )^{1/p}
        space.ball_into(c, 5.0 * eps, ball_j);
        CompensatedSum outer_mass, outer_acc;
        for (Index x : ball_j) {
            CompensatedSum mass, acc;
            space.ball_into(x, 2.0 * eps, ball_x);
            for (Index y : ball_x) {
                mass.add(space.weight(y));
                acc.add(space.weight(y) * abs_pow(f[x] - f[y], p));
            }
            outer_mass.add(space.weight(x));
            outer_acc.add(space.weight(x) * (acc.get() / mass.get()));
        }
        chk.bound_rhs[k] =
            std::pow(outer_acc.get() / outer_mass.get() / abs_pow(eps, p), 1.0 / p);
    }
    for (std::size_t k = 0; k < chk.empirical.size(); ++k) {
        if (chk.bound_rhs[k] > 0.0)
            chk.max_ratio = std::max(chk.max_ratio, chk.empirical[k] / chk.bound_rhs[k]);
    }
    return chk;
}

std::vector<Real> maximal_radius_grid(const PointCloudSpace& space, int count) {
    const Real lo = std::max(3.0 * space.resolution(), 1e-12);
    const Real hi = std::max(space.diameter_bound(), 2.0 * lo);
    std::vector<Real> out;
    for (int k = 0; k < count; ++k)
        out.push_back(lo * std::pow(hi / lo, static_cast<Real>(k) / (count - 1)));
    return out;
}

ScalarField maximal_function(const PointCloudSpace& space, const ScalarField& f,
                             std::span<const Real> radii) {
    require_bound(space, f, "maximal_function");
    for (Real r : radii) space.require_scale(r, "maximal_function");
    const Index n = space.size();
    std::vector<Real> out(static_cast<std::size_t>(n));
#pragma omp parallel
    {
        std::vector<Index> buf;
#pragma omp for schedule(static)
        for (Index i = 0; i < n; ++i) {
            Real best = std::abs(f[i]); // own value keeps Mf >= |f| exact
            for (Real r : radii) {
                space.ball_into(i, r, buf);
                CompensatedSum mass, acc;
                for (Index j : buf) {
                    mass.add(space.weight(j));
                    acc.add(space.weight(j) * std::abs(f[j]));
                }
                best = std::max(best, acc.get() / mass.get());
            }
            out[static_cast<std::size_t>(i)] = best;
        }
    }
    return bind_field(space, std::move(out));
}

} // namespace kslab
