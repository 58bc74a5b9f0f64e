#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kslab/space.hpp"

namespace kslab {

// One real value per point, bound to a specific space by id.
struct ScalarField {
    std::vector<Real> values;
    std::uint64_t space_id = 0;

    Real operator[](Index i) const { return values[static_cast<std::size_t>(i)]; }
    Real& operator[](Index i) { return values[static_cast<std::size_t>(i)]; }
    Index size() const { return static_cast<Index>(values.size()); }
};

ScalarField bind_field(const PointCloudSpace& space, std::vector<Real> values);
void require_bound(const PointCloudSpace& space, const ScalarField& f, const char* what);

// Built-in field catalog, evaluated on point coordinates.
ScalarField make_constant(const PointCloudSpace& space, Real c);
ScalarField make_ramp(const PointCloudSpace& space);                    // f = c0
ScalarField make_sine(const PointCloudSpace& space);                    // f = sin(2 pi c0)
ScalarField make_indicator(const PointCloudSpace& space, Real a, Real b); // 1 on a <= c0 < b
// Indicator of [a,b) mollified over width w (1/w-Lipschitz in c0).
ScalarField make_bump(const PointCloudSpace& space, Real a, Real b, Real w);
ScalarField make_random(const PointCloudSpace& space, std::uint64_t seed); // iid U[-1,1]

// Parse catalog expressions like "sine", "constant:0.5", "indicator:0.25:0.75",
// "bump:0.2:0.6:0.1", "random:42". Throws config_error on unknown names.
ScalarField make_catalog_field(const PointCloudSpace& space, const std::string& expr);

Real sup_norm(const ScalarField& f);
Real sup_distance(const ScalarField& f, const ScalarField& g);
// || f - g ||_p with respect to mu.
Real lp_distance(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p);

} // namespace kslab
