#include "kslab/field.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace kslab {

ScalarField bind_field(const PointCloudSpace& space, std::vector<Real> values) {
    if (values.size() != static_cast<std::size_t>(space.size()))
        throw config_error("field length does not match space size");
    for (Real v : values)
        if (!std::isfinite(v)) throw config_error("field contains non-finite value");
    return ScalarField{std::move(values), space.id()};
}

void require_bound(const PointCloudSpace& space, const ScalarField& f, const char* what) {
    if (f.space_id != space.id() || f.size() != space.size())
        throw SpaceMismatch(std::string(what) + ": field is not bound to this space");
}

namespace {

Real coord0(const PointCloudSpace& space, Index i) {
    if (space.metric() == MetricKind::DistanceTable)
        throw config_error("catalog fields need point coordinates; table spaces accept only CSV fields");
    return space.coord(i, 0);
}

} // namespace

ScalarField make_constant(const PointCloudSpace& space, Real c) {
    return bind_field(space, std::vector<Real>(static_cast<std::size_t>(space.size()), c));
}

ScalarField make_ramp(const PointCloudSpace& space) {
    std::vector<Real> v(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i) v[static_cast<std::size_t>(i)] = coord0(space, i);
    return bind_field(space, std::move(v));
}

ScalarField make_sine(const PointCloudSpace& space) {
    std::vector<Real> v(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i)
        v[static_cast<std::size_t>(i)] = std::sin(2.0 * M_PI * coord0(space, i));
    return bind_field(space, std::move(v));
}

ScalarField make_indicator(const PointCloudSpace& space, Real a, Real b) {
    if (!(a < b)) throw config_error("indicator: need a < b");
    std::vector<Real> v(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i) {
        const Real x = coord0(space, i);
        v[static_cast<std::size_t>(i)] = (x >= a && x < b) ? 1.0 : 0.0;
    }
    return bind_field(space, std::move(v));
}

ScalarField make_bump(const PointCloudSpace& space, Real a, Real b, Real w) {
    if (!(a < b) || !(w > 0.0)) throw config_error("bump: need a < b and w > 0");
    std::vector<Real> v(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i) {
        const Real x = coord0(space, i);
        const Real inside = std::min(x - a, b - x); // distance to the arc boundary, signed
        v[static_cast<std::size_t>(i)] = std::clamp(inside / w, 0.0, 1.0);
    }
    return bind_field(space, std::move(v));
}

ScalarField make_random(const PointCloudSpace& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Real> v(static_cast<std::size_t>(space.size()));
    for (auto& x : v)
        x = 2.0 * (static_cast<Real>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return bind_field(space, std::move(v));
}

ScalarField make_catalog_field(const PointCloudSpace& space, const std::string& expr) {
    std::vector<std::string> parts;
    std::stringstream ss(expr);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw config_error("empty field expression");
    auto num = [&](std::size_t k, Real dflt) {
        if (parts.size() <= k) return dflt;
        try {
            return std::stod(parts[k]);
        } catch (...) {
            throw config_error("field expression: bad number '" + parts[k] + "'");
        }
    };
    const std::string& name = parts[0];
    if (name == "constant") return make_constant(space, num(1, 1.0));
    if (name == "ramp") return make_ramp(space);
    if (name == "sine") return make_sine(space);
    if (name == "indicator") return make_indicator(space, num(1, 0.25), num(2, 0.75));
    if (name == "bump") return make_bump(space, num(1, 0.25), num(2, 0.75), num(3, 0.1));
    if (name == "random")
        return make_random(space, static_cast<std::uint64_t>(num(1, 1.0)));
    throw config_error("unknown field '" + name + "'");
}

Real sup_norm(const ScalarField& f) {
    Real m = 0.0;
    for (Real v : f.values) m = std::max(m, std::abs(v));
    return m;
}

Real sup_distance(const ScalarField& f, const ScalarField& g) {
    Real m = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        m = std::max(m, std::abs(f.values[i] - g.values[i]));
    return m;
}

Real lp_distance(const PointCloudSpace& space, const ScalarField& f, const ScalarField& g, Real p) {
    require_bound(space, f, "lp_distance");
    require_bound(space, g, "lp_distance");
    std::vector<Real> terms(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i)
        terms[static_cast<std::size_t>(i)] = std::pow(std::abs(f[i] - g[i]), p);
    return std::pow(pairwise_dot(space.weights(), terms), 1.0 / p);
}

} // namespace kslab
