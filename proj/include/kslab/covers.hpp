#pragma once

#include <vector>

#include "kslab/field.hpp"
#include "kslab/space.hpp"

namespace kslab {

// Maximal eps-separated net: centers are >= eps apart and their eps-balls
// cover the space.
struct EpsNet {
    Real eps = 0.0;
    IndexSet centers;
    bool covering_ok = false;
};

// Tent partition subordinated to the net: phi_i supported in B(center_i, 2 eps),
// 0 <= phi_i <= 1, sum_i phi_i = 1 everywhere.
struct PartitionOfUnity {
    EpsNet net;
    std::vector<std::vector<Index>> support; // per center, sorted
    std::vector<std::vector<Real>> phi;      // values matching `support`
    Real lip_bound = 0.0;                    // (2/eps) * (1 + overlap at dilation 2)
    std::uint64_t space_id = 0;
};

// Greedy in ascending index order: a point becomes a center iff it is >= eps
// away from every previously admitted center.
EpsNet maximal_eps_net(const PointCloudSpace& space, Real eps);

// Max over points of the number of dilated balls B(center_i, lambda*eps)
// containing the point.
int overlap_count(const PointCloudSpace& space, const EpsNet& net, Real lambda);

PartitionOfUnity partition_of_unity(const PointCloudSpace& space, const EpsNet& net);

// Dense evaluation of one phi_i (zeros off support).
std::vector<Real> partition_row_dense(const PointCloudSpace& space, const PartitionOfUnity& pou,
                                      std::size_t center_idx);

// Max over centers and point pairs of |phi_i(x)-phi_i(y)| / d(x,y).
// Exhaustive over each support set; intended for tests and reports.
Real empirical_partition_lip(const PointCloudSpace& space, const PartitionOfUnity& pou);

} // namespace kslab
