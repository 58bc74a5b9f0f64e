#include "kslab/covers.hpp"

#include <algorithm>
#include <cmath>

namespace kslab {

EpsNet maximal_eps_net(const PointCloudSpace& space, Real eps) {
    if (!(eps > 0.0)) throw config_error("maximal_eps_net: eps must be positive");
    EpsNet net;
    net.eps = eps;
    std::vector<Index> centers;
    for (Index i = 0; i < space.size(); ++i) {
        bool admit = true;
        for (Index c : centers) {
            if (space.distance(i, c) < eps) {
                admit = false;
                break;
            }
        }
        if (admit) centers.push_back(i);
    }
    net.centers = IndexSet(std::move(centers));
    // Greedy maximality gives covering at radius eps; verify anyway.
    net.covering_ok = true;
    for (Index i = 0; i < space.size() && net.covering_ok; ++i) {
        bool covered = false;
        for (Index c : net.centers.ids) {
            if (space.distance(i, c) < eps) {
                covered = true;
                break;
            }
        }
        net.covering_ok = covered;
    }
    return net;
}

int overlap_count(const PointCloudSpace& space, const EpsNet& net, Real lambda) {
    if (!(lambda >= 1.0)) throw config_error("overlap_count: lambda must be >= 1");
    const Real rad = lambda * net.eps;
    int worst = 0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (Index i = 0; i < space.size(); ++i) {
        int c = 0;
        for (Index center : net.centers.ids)
            if (space.distance(i, center) < rad) ++c;
        worst = std::max(worst, c);
    }
    return worst;
}

PartitionOfUnity partition_of_unity(const PointCloudSpace& space, const EpsNet& net) {
    PartitionOfUnity pou;
    pou.net = net;
    pou.space_id = space.id();
    const Real eps = net.eps;
    const std::size_t nc = net.centers.ids.size();
    pou.support.resize(nc);
    pou.phi.resize(nc);

    // Tents psi_i(x) = max(0, 1 - d(x, c_i) / (2 eps)).
    std::vector<Real> denom(static_cast<std::size_t>(space.size()), 0.0);
    std::vector<std::vector<Real>> psi(nc);
    std::vector<Index> buf;
    for (std::size_t k = 0; k < nc; ++k) {
        const Index c = net.centers.ids[k];
        space.ball_into(c, 2.0 * eps, buf);
        pou.support[k] = buf;
        auto& row = psi[k];
        row.resize(buf.size());
        for (std::size_t t = 0; t < buf.size(); ++t) {
            const Real v = 1.0 - space.distance(buf[t], c) / (2.0 * eps);
            row[t] = std::max(0.0, v);
            denom[static_cast<std::size_t>(buf[t])] += row[t];
        }
    }
    for (Index i = 0; i < space.size(); ++i) {
        if (denom[static_cast<std::size_t>(i)] < 1e-9)
            throw DegenerateDenominator("partition_of_unity: tent sum below 1e-9 at point " +
                                        std::to_string(i) + " (broken net)");
    }
    for (std::size_t k = 0; k < nc; ++k) {
        auto& row = pou.phi[k];
        row.resize(psi[k].size());
        for (std::size_t t = 0; t < row.size(); ++t)
            row[t] = psi[k][t] / denom[static_cast<std::size_t>(pou.support[k][t])];
    }
    pou.lip_bound = (2.0 / eps) * (1.0 + overlap_count(space, net, 2.0));
    return pou;
}

std::vector<Real> partition_row_dense(const PointCloudSpace& space, const PartitionOfUnity& pou,
                                      std::size_t center_idx) {
    std::vector<Real> out(static_cast<std::size_t>(space.size()), 0.0);
    const auto& sup = pou.support[center_idx];
    const auto& val = pou.phi[center_idx];
    for (std::size_t t = 0; t < sup.size(); ++t) out[static_cast<std::size_t>(sup[t])] = val[t];
    return out;
}

Real empirical_partition_lip(const PointCloudSpace& space, const PartitionOfUnity& pou) {
    Real worst = 0.0;
    for (std::size_t k = 0; k < pou.support.size(); ++k) {
        // Quotients involving a zero endpoint are covered by pairs where one
        // side sits just outside the support, so scan support against the
        // dilated support ball.
        std::vector<Index> dil;
        space.ball_into(pou.net.centers.ids[k], 4.0 * pou.net.eps, dil);
        std::vector<Real> dense = partition_row_dense(space, pou, k);
        for (std::size_t a = 0; a < pou.support[k].size(); ++a) {
            const Index x = pou.support[k][a];
            for (Index y : dil) {
                if (y == x) continue;
                const Real d = space.distance(x, y);
                if (d <= 0.0) continue;
                const Real q = std::abs(dense[static_cast<std::size_t>(x)] -
                                        dense[static_cast<std::size_t>(y)]) / d;
                worst = std::max(worst, q);
            }
        }
    }
    return worst;
}

} // namespace kslab
