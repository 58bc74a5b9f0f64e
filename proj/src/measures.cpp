#include "kslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslab/lipschitz.hpp"

namespace kslab {

EnergyMeasureReport energy_measure(const PointCloudSpace& space, const ScalarField& f, Real p,
                                   Real r, std::span<const IndexSet> cells) {
    // Cells must partition the index range.
    std::vector<Index> all;
    for (const auto& c : cells) all.insert(all.end(), c.ids.begin(), c.ids.end());
    std::sort(all.begin(), all.end());
    if (static_cast<Index>(all.size()) != space.size())
        throw CellsNotPartition("energy_measure: cells do not cover the space exactly");
    for (Index i = 0; i < space.size(); ++i)
        if (all[static_cast<std::size_t>(i)] != i)
            throw CellsNotPartition("energy_measure: cells overlap or miss points");

    EnergyMeasureReport rep;
    rep.p = p;
    rep.r = r;
    rep.cells.assign(cells.begin(), cells.end());
    const EnergyValue total = ks_energy(space, f, p, r);
    rep.total = total.value;
    rep.density = total.density;
    rep.max_density = rep.density.empty()
                          ? 0.0
                          : *std::max_element(rep.density.begin(), rep.density.end());
    for (const auto& cell : cells)
        rep.masses.push_back(ks_energy_local(space, f, p, r, cell).value);
    return rep;
}

DensityReport density_vs_mu(const PointCloudSpace& space, const ScalarField& f, Real p, Real r) {
    DensityReport rep;
    rep.p1_warning = !(p > 1.0);
    EnergyValue e = ks_energy(space, f, p, r);
    rep.max_density = e.density.empty() ? 0.0
                                        : *std::max_element(e.density.begin(), e.density.end());
    rep.density = bind_field(space, std::move(e.density));
    return rep;
}

PoincareReport poincare_check(const PointCloudSpace& space, const ScalarField& f, Real p, Real R,
                              Real lambda, PoincareMode mode, Index max_samples) {
    require_bound(space, f, "poincare_check");
    space.require_scale(R, "poincare_check");
    if (!(lambda >= 1.0)) throw config_error("poincare_check: lambda must be >= 1");
    if (mode == PoincareMode::EnergyMeasure) space.require_scale(R / 4.0, "poincare_check (r = R/4)");

    PoincareReport rep;
    const Index n = space.size();
    const Index stride = std::max<Index>(1, n / std::max<Index>(1, max_samples));
    for (Index i = 0; i < n; i += stride) rep.centers.push_back(i);

    ScalarField lip;
    if (mode == PoincareMode::Lip) lip = discrete_lip_field(space, f);

    // oscillations at roundoff level count as zero
    const Real lhs_floor = 1e-13 * abs_pow(sup_norm(f) + 1e-30, p) * space.total_mass();

    std::vector<Index> buf;
    for (Index c : rep.centers) {
        // LHS: integral over B(c,R) of |f - f_B|^p.
        space.ball_into(c, R, buf);
        CompensatedSum mass, mean_acc;
        for (Index j : buf) {
            mass.add(space.weight(j));
            mean_acc.add(space.weight(j) * f[j]);
        }
        const Real fbar = mean_acc.get() / mass.get();
        CompensatedSum osc;
        for (Index j : buf) osc.add(space.weight(j) * abs_pow(f[j] - fbar, p));
        const Real lhs = osc.get();

        Real rhs = 0.0;
        if (mode == PoincareMode::Lip) {
            space.ball_into(c, lambda * R, buf);
            CompensatedSum acc;
            for (Index j : buf) acc.add(space.weight(j) * abs_pow(lip[j], p));
            rhs = acc.get();
        } else {
            const IndexSet dilated = space.ball(c, lambda * R);
            rhs = ks_energy_local(space, f, p, R / 4.0, dilated).value;
        }

        Real ratio;
        if (lhs <= lhs_floor) {
            ratio = 0.0;
        } else if (rhs <= 0.0) {
            ratio = std::numeric_limits<Real>::infinity();
        } else {
            ratio = lhs / (abs_pow(R, p) * rhs);
        }
        rep.ratios.push_back(ratio);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    }
    return rep;
}

CutoffField cutoff(const PointCloudSpace& space, const IndexSet& a_prime, const IndexSet& a) {
    if (a_prime.empty()) throw EmptySet("cutoff: A' is empty");
    if (!a_prime.set_minus(a).empty()) throw config_error("cutoff: A' must be contained in A");

    CutoffField out;
    out.a_prime = a_prime;
    out.a = a;
    const IndexSet a_c = a.complement(space.size());

    std::vector<Real> vals(static_cast<std::size_t>(space.size()), 1.0);
    if (a_c.empty()) {
        // d(x, empty set) = +inf convention: phi == 1.
        out.separation = std::numeric_limits<Real>::infinity();
        out.values = bind_field(space, std::move(vals));
        return out;
    }
    const Real sep = space.set_distance(a_prime, a_c);
    if (!(sep > 0.0))
        throw TouchingBoundary("cutoff: d(A', A^c) = 0");
    out.separation = sep;
    for (Index i = 0; i < space.size(); ++i) {
        const Real d = space.point_set_distance(i, a_c);
        vals[static_cast<std::size_t>(i)] = std::clamp(std::min(d, sep) / sep, 0.0, 1.0);
    }
    out.values = bind_field(space, std::move(vals));
    return out;
}

namespace {

struct FundamentalParts {
    Real lhs = 0.0;
    Real base = 0.0; // (1-eps)^{1-p} (E(f,A) + E(g,B))
    Real coupling = 0.0;
    Real eps_factor = 0.0; // eps^{1-p}
    Real separation = 0.0;
};

FundamentalParts fundamental_parts(const PointCloudSpace& space, const ScalarField& f,
                                   const ScalarField& g, const IndexSet& a,
                                   const IndexSet& a_prime, const IndexSet& b, Real eps_cvx,
                                   Real p, Real r) {
    if (!(eps_cvx > 0.0 && eps_cvx < 1.0))
        throw config_error("fundamental_estimate: eps must be in (0,1)");
    require_bound(space, f, "fundamental_estimate");
    require_bound(space, g, "fundamental_estimate");

    const CutoffField phi = cutoff(space, a_prime, a);
    FundamentalParts parts;
    parts.separation = phi.separation;

    std::vector<Real> mixed(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i)
        mixed[static_cast<std::size_t>(i)] =
            phi.values[i] * f[i] + (1.0 - phi.values[i]) * g[i];
    const ScalarField h = bind_field(space, std::move(mixed));

    const IndexSet target = a_prime.set_union(b);
    if (target.empty()) throw EmptySet("fundamental_estimate: A' u B is empty");
    parts.lhs = ks_energy_local(space, h, p, r, target).value;

    const Real e_f = ks_energy_local(space, f, p, r, a).value;
    const Real e_g = b.empty() ? 0.0 : ks_energy_local(space, g, p, r, b).value;
    parts.base = std::pow(1.0 - eps_cvx, 1.0 - p) * (e_f + e_g);
    parts.eps_factor = std::pow(eps_cvx, 1.0 - p);

    const IndexSet s_r =
        space.neighborhood(target, r).set_intersect(space.neighborhood(a.set_minus(a_prime), 3.0 * r));
    CompensatedSum acc;
    for (Index i : s_r.ids) acc.add(space.weight(i) * abs_pow(f[i] - g[i], p));
    parts.coupling = acc.get();
    return parts;
}

} // namespace

FundamentalEstimate fundamental_estimate_check(const PointCloudSpace& space, const ScalarField& f,
                                               const ScalarField& g, const IndexSet& a,
                                               const IndexSet& a_prime, const IndexSet& b,
                                               Real eps_cvx, Real p, Real r, Real c_geom) {
    const FundamentalParts parts =
        fundamental_parts(space, f, g, a, a_prime, b, eps_cvx, p, r);
    FundamentalEstimate out;
    out.lhs = parts.lhs;
    out.coupling = parts.coupling;
    out.separation = parts.separation;
    out.constant_used = std::isinf(parts.separation)
                            ? 0.0
                            : c_geom / abs_pow(parts.separation, p);
    out.rhs = parts.base + out.constant_used * parts.eps_factor * parts.coupling;
    out.slack = out.rhs - out.lhs;
    return out;
}

Real fundamental_required_constant(const PointCloudSpace& space, const ScalarField& f,
                                   const ScalarField& g, const IndexSet& a,
                                   const IndexSet& a_prime, const IndexSet& b, Real eps_cvx,
                                   Real p, Real r) {
    const FundamentalParts parts =
        fundamental_parts(space, f, g, a, a_prime, b, eps_cvx, p, r);
    const Real excess = parts.lhs - parts.base;
    // rounding-level excess does not call for a constant
    if (excess <= 1e-12 * (parts.lhs + parts.base)) return 1.0;
    if (parts.coupling <= 0.0 || std::isinf(parts.separation))
        throw numeric_error("fundamental_required_constant: excess energy with zero coupling");
    return std::max(1.0, excess * abs_pow(parts.separation, p) /
                             (parts.eps_factor * parts.coupling));
}

} // namespace kslab
