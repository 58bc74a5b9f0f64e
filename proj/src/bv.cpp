#include "kslab/bv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kslab/covers.hpp"
#include "kslab/lipschitz.hpp"

namespace kslab {

namespace {

// Count sign changes of an indicator along a 1d space, ordered by coordinate
// (wrapping for tori). Used for the jump-count reference.
std::optional<Real> jump_reference_1d(const PointCloudSpace& space, const ScalarField& f) {
    if (space.metric() == MetricKind::DistanceTable || space.dim() != 1) return std::nullopt;
    const Index n = space.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return space.coord(a, 0) < space.coord(b, 0); });
    int jumps = 0;
    const Index last = space.metric() == MetricKind::FlatTorus ? n : n - 1;
    for (Index k = 0; k < last; ++k) {
        const Real va = f[order[static_cast<std::size_t>(k)]];
        const Real vb = f[order[static_cast<std::size_t>((k + 1) % n)]];
        if (va != vb) ++jumps;
    }
    return 0.5 * jumps;
}

} // namespace

TVReport total_variation(const PointCloudSpace& space, const ScalarField& f,
                         std::span<const Real> radii) {
    TVReport rep;
    rep.sweep = ks_sweep(space, f, 1.0, radii);
    return rep;
}

TVReport perimeter(const PointCloudSpace& space, const IndexSet& set,
                   std::span<const Real> radii) {
    std::vector<Real> ind(static_cast<std::size_t>(space.size()), 0.0);
    for (Index i : set.ids) ind[static_cast<std::size_t>(i)] = 1.0;
    const ScalarField f = bind_field(space, std::move(ind));
    TVReport rep = total_variation(space, f, radii);
    rep.jump_reference = jump_reference_1d(space, f);
    return rep;
}

MirandaReport miranda_tv_upper(const PointCloudSpace& space, const ScalarField& f,
                               std::span<const Real> eps_list) {
    if (eps_list.empty()) throw config_error("miranda_tv_upper: empty eps list");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw config_error("miranda_tv_upper: eps list must be strictly decreasing");

    MirandaReport rep;
    for (Real eps : eps_list) {
        space.require_scale(eps, "miranda_tv_upper");
        const EpsNet net = maximal_eps_net(space, eps);
        const PartitionOfUnity pou = partition_of_unity(space, net);
        const LipApproxReport approx = lip_approx(space, f, pou, 1.0);
        const ScalarField lip = discrete_lip_field(space, approx.f_eps);
        const Real value = pairwise_dot(space.weights(), lip.values);
        rep.eps.push_back(eps);
        rep.values.push_back(value);
        rep.l1_errors.push_back(approx.lp_error);
    }
    rep.upper_bound = *std::min_element(rep.values.begin(), rep.values.end());
    return rep;
}

ComparabilityReport comparability_report(
    const PointCloudSpace& space, std::span<const std::pair<std::string, ScalarField>> fields,
    std::span<const Real> radii, std::span<const Real> eps_list) {
    if (fields.empty()) throw config_error("comparability_report: no fields");
    ComparabilityReport rep;
    rep.band = 1.0;
    for (const auto& [name, f] : fields) {
        ComparabilityRow row;
        row.name = name;
        row.tv_extrapolated = total_variation(space, f, radii).sweep.extrapolated.value_or(0.0);
        row.miranda_upper = miranda_tv_upper(space, f, eps_list).upper_bound;
        const Real tiny = 1e-10;
        if (std::abs(row.tv_extrapolated) < tiny && std::abs(row.miranda_upper) < tiny) {
            row.degenerate = true;
        } else if (row.miranda_upper <= 0.0) {
            row.degenerate = true; // 0 denominator with nonzero TV: flagged, not folded into the band
        } else {
            row.ratio = row.tv_extrapolated / row.miranda_upper;
            if (row.ratio > 0.0)
                rep.band = std::max({rep.band, row.ratio, 1.0 / row.ratio});
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace kslab
