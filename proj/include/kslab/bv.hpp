#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslab/energy.hpp"

namespace kslab {

// p = 1 sweep: E_{1,r} approximates (a constant multiple of) the total
// variation; for indicators of 1d arcs each jump contributes 1/2.
struct TVReport {
    EnergySweep sweep;
    std::optional<Real> jump_reference; // (#jumps)/2 for 1d indicator fields
};

TVReport total_variation(const PointCloudSpace& space, const ScalarField& f,
                         std::span<const Real> radii);

TVReport perimeter(const PointCloudSpace& space, const IndexSet& set,
                   std::span<const Real> radii);

struct MirandaReport {
    std::vector<Real> eps;
    std::vector<Real> values;    // integral of discrete Lip f_eps
    std::vector<Real> l1_errors; // || f_eps - f ||_1 per eps
    Real upper_bound = 0.0;      // min over the list
};

// Upper bound for Miranda's relaxed total variation, taking the infimum over
// the partition-of-unity family { f_eps }.
MirandaReport miranda_tv_upper(const PointCloudSpace& space, const ScalarField& f,
                               std::span<const Real> eps_list);

struct ComparabilityRow {
    std::string name;
    Real tv_extrapolated = 0.0;
    Real miranda_upper = 0.0;
    Real ratio = 0.0;
    bool degenerate = false; // both sides ~ 0 (constant field), ratio skipped
};

struct ComparabilityReport {
    std::vector<ComparabilityRow> rows;
    Real band = 0.0; // smallest K with all ratios in [1/K, K]
};

ComparabilityReport comparability_report(const PointCloudSpace& space,
                                         std::span<const std::pair<std::string, ScalarField>> fields,
                                         std::span<const Real> radii,
                                         std::span<const Real> eps_list);

} // namespace kslab
