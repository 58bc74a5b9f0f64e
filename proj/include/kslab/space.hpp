#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslab/errors.hpp"
#include "kslab/sum.hpp"

namespace kslab {

using Index = std::int32_t;

// Discrete stand-in for a Borel/open subset: unique, sorted point indices.
struct IndexSet {
    std::vector<Index> ids;

    IndexSet() = default;
    explicit IndexSet(std::vector<Index> sorted_unique) : ids(std::move(sorted_unique)) {}

    static IndexSet from_unsorted(std::vector<Index> v, Index n);
    static IndexSet full(Index n);

    Index size() const { return static_cast<Index>(ids.size()); }
    bool empty() const { return ids.empty(); }
    bool contains(Index i) const;

    IndexSet set_union(const IndexSet& other) const;
    IndexSet set_intersect(const IndexSet& other) const;
    IndexSet set_minus(const IndexSet& other) const;
    IndexSet complement(Index n) const;

    bool operator==(const IndexSet& other) const { return ids == other.ids; }
};

enum class MetricKind { Euclidean, FlatTorus, DistanceTable };

enum class CloudSampler { UnitSquare, UnitTorus, UnitInterval };

// Finite weighted point cloud (X, d, mu). Immutable once built; every query
// is const and safe to call from any number of threads.
class PointCloudSpace {
public:
    // Coordinate-based constructor. `coords` is row-major n x dim. For
    // FlatTorus the period vector must have one entry per dimension.
    static PointCloudSpace from_points(std::vector<Real> coords, int dim,
                                       std::vector<Real> weights,
                                       MetricKind kind = MetricKind::Euclidean,
                                       std::vector<Real> period = {});

    // Explicit symmetric distance table, row-major n x n. The triangle
    // inequality is verified exhaustively for n <= 512, by sampling above.
    static PointCloudSpace from_table(std::vector<Real> table, std::vector<Real> weights);

    // Generators. All use uniform weights summing to total mass 1.
    static PointCloudSpace interval_grid(Index n);                 // [0,1], euclidean
    static PointCloudSpace circle_grid(Index n);                   // 1d flat torus, period 1
    static PointCloudSpace torus2d_grid(Index nx, Index ny);       // 2d flat torus, period (1,1)
    static PointCloudSpace random_cloud(Index n, std::uint64_t seed,
                                        CloudSampler sampler = CloudSampler::UnitSquare);

    Index size() const { return n_; }
    int dim() const { return dim_; }
    MetricKind metric() const { return kind_; }
    std::uint64_t id() const { return id_; }
    const std::vector<Real>& weights() const { return weights_; }
    Real weight(Index i) const { return weights_[static_cast<std::size_t>(i)]; }
    Real total_mass() const { return total_mass_; }
    const std::vector<Real>& period() const { return period_; }

    Real coord(Index i, int k) const { return coords_[static_cast<std::size_t>(i) * dim_ + k]; }
    std::span<const Real> point(Index i) const {
        return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }

    Real distance(Index i, Index j) const;

    // Resolution scale h: max over points of the distance to the nearest
    // distinct point. Scale-dependent operations require r >= 3h.
    Real resolution() const { return h_; }
    Real min_spacing() const { return min_spacing_; }
    // Upper bound on the diameter (exact for table spaces).
    Real diameter_bound() const { return diameter_; }

    // Open ball B(x_i, r) = { j : d(x_i, x_j) < r }, strict inequality.
    IndexSet ball(Index i, Real r) const;
    // Same, into a reusable buffer (sorted ascending). For hot loops.
    void ball_into(Index i, Real r, std::vector<Index>& out) const;

    // mu(S), reduced with the same canonical pairwise order as total_mass.
    Real mu(const IndexSet& s) const;

    // { j : d(x_j, U) < lambda } together with U itself; monotone in lambda.
    IndexSet neighborhood(const IndexSet& u, Real lambda) const;

    // min over (a,b) in A x B of d(a,b); +inf if either side is empty.
    Real set_distance(const IndexSet& a, const IndexSet& b) const;
    // d(x_i, S); +inf if S is empty.
    Real point_set_distance(Index i, const IndexSet& s) const;

    void require_scale(Real r, const char* what) const;

private:
    PointCloudSpace() = default;
    void finalize();
    void build_grid();
    void compute_spacing();

    std::uint64_t id_ = 0;
    Index n_ = 0;
    int dim_ = 0;
    MetricKind kind_ = MetricKind::Euclidean;
    std::vector<Real> coords_;   // n*dim, empty for tables
    std::vector<Real> period_;   // per-dim, FlatTorus only
    std::vector<Real> table_;    // n*n, DistanceTable only
    std::vector<Real> weights_;
    Real total_mass_ = 0.0;
    Real h_ = 0.0;
    Real min_spacing_ = 0.0;
    Real diameter_ = 0.0;

    // Uniform grid over the bounding box (euclidean) or period box (torus).
    struct GridIndex {
        std::vector<Real> lo;
        std::vector<Real> cell;
        std::vector<int> ncell;
        std::vector<std::vector<Index>> bins; // each sorted ascending
        bool wrap = false;
    };
    std::optional<GridIndex> grid_;
};

// (C_hat, Q_hat): worst sampled ratio mu(B(x,2r))/mu(B(x,r)) and its log2.
std::pair<Real, Real> doubling_estimate(const PointCloudSpace& space,
                                        std::span<const Real> sample_radii,
                                        std::span<const Index> sample_points);

// New space made of the selected points only (same metric, same weights).
PointCloudSpace subspace(const PointCloudSpace& space, const IndexSet& keep);

} // namespace kslab
