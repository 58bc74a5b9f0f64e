#include "kslab/space.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

namespace kslab {

namespace {

std::atomic<std::uint64_t> g_next_space_id{1};

constexpr Real kInf = std::numeric_limits<Real>::infinity();

Real sq(Real x) { return x * x; }

// Uniform double in [0,1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
Real unit_real(std::mt19937_64& rng) {
    return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

IndexSet IndexSet::from_unsorted(std::vector<Index> v, Index n) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (!v.empty() && (v.front() < 0 || v.back() >= n))
        throw config_error("IndexSet: index out of range");
    return IndexSet(std::move(v));
}

IndexSet IndexSet::full(Index n) {
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return IndexSet(std::move(v));
}

bool IndexSet::contains(Index i) const {
    return std::binary_search(ids.begin(), ids.end(), i);
}

IndexSet IndexSet::set_union(const IndexSet& other) const {
    std::vector<Index> out;
    out.reserve(ids.size() + other.ids.size());
    std::set_union(ids.begin(), ids.end(), other.ids.begin(), other.ids.end(),
                   std::back_inserter(out));
    return IndexSet(std::move(out));
}

IndexSet IndexSet::set_intersect(const IndexSet& other) const {
    std::vector<Index> out;
    std::set_intersection(ids.begin(), ids.end(), other.ids.begin(), other.ids.end(),
                          std::back_inserter(out));
    return IndexSet(std::move(out));
}

IndexSet IndexSet::set_minus(const IndexSet& other) const {
    std::vector<Index> out;
    std::set_difference(ids.begin(), ids.end(), other.ids.begin(), other.ids.end(),
                        std::back_inserter(out));
    return IndexSet(std::move(out));
}

IndexSet IndexSet::complement(Index n) const {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(n) - ids.size());
    std::size_t k = 0;
    for (Index i = 0; i < n; ++i) {
        if (k < ids.size() && ids[k] == i) {
            ++k;
        } else {
            out.push_back(i);
        }
    }
    return IndexSet(std::move(out));
}

PointCloudSpace PointCloudSpace::from_points(std::vector<Real> coords, int dim,
                                             std::vector<Real> weights, MetricKind kind,
                                             std::vector<Real> period) {
    if (kind == MetricKind::DistanceTable)
        throw config_error("from_points: use from_table for explicit tables");
    if (dim <= 0 || dim > 8) throw config_error("from_points: dim must be in 1..8");
    if (coords.size() != weights.size() * static_cast<std::size_t>(dim))
        throw config_error("from_points: coords/weights size mismatch");
    for (Real c : coords)
        if (!std::isfinite(c)) throw NonFiniteCoordinate("coordinate is not finite");
    if (kind == MetricKind::FlatTorus) {
        if (period.size() != static_cast<std::size_t>(dim))
            throw config_error("from_points: torus period must have one entry per dimension");
        for (Real p : period)
            if (!(p > 0.0) || !std::isfinite(p))
                throw config_error("from_points: torus period entries must be positive");
    }

    PointCloudSpace s;
    s.n_ = static_cast<Index>(weights.size());
    s.dim_ = dim;
    s.kind_ = kind;
    s.coords_ = std::move(coords);
    s.period_ = std::move(period);
    s.weights_ = std::move(weights);
    s.finalize();
    return s;
}

PointCloudSpace PointCloudSpace::from_table(std::vector<Real> table, std::vector<Real> weights) {
    const std::size_t n = weights.size();
    if (table.size() != n * n) throw config_error("from_table: table must be n x n");

    Real diam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i * n + i] != 0.0)
            throw config_error("from_table: nonzero diagonal entry");
        for (std::size_t j = 0; j < n; ++j) {
            const Real d = table[i * n + j];
            if (!std::isfinite(d) || d < 0.0)
                throw config_error("from_table: distances must be finite and nonnegative");
            if (d != table[j * n + i])
                throw AsymmetricDistance("distance table is not symmetric");
            diam = std::max(diam, d);
        }
    }
    // Triangle inequality: exhaustive for small tables, sampled otherwise.
    auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
        const Real dij = table[i * n + j];
        const Real djk = table[j * n + k];
        const Real dik = table[i * n + k];
        if (dik > dij + djk + 1e-12 * (dij + djk + dik))
            throw config_error("from_table: triangle inequality violated");
    };
    if (n <= 512) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) check_triple(i, j, k);
    } else {
        std::mt19937_64 rng(12345);
        for (int t = 0; t < 20000; ++t) {
            const auto i = static_cast<std::size_t>(rng() % n);
            const auto j = static_cast<std::size_t>(rng() % n);
            const auto k = static_cast<std::size_t>(rng() % n);
            check_triple(i, j, k);
        }
    }

    PointCloudSpace s;
    s.n_ = static_cast<Index>(n);
    s.dim_ = 0;
    s.kind_ = MetricKind::DistanceTable;
    s.table_ = std::move(table);
    s.weights_ = std::move(weights);
    s.diameter_ = diam;
    s.finalize();
    return s;
}

PointCloudSpace PointCloudSpace::interval_grid(Index n) {
    if (n < 2) throw config_error("interval_grid: need n >= 2");
    std::vector<Real> coords(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        coords[static_cast<std::size_t>(i)] = static_cast<Real>(i) / static_cast<Real>(n - 1);
    std::vector<Real> w(static_cast<std::size_t>(n), 1.0 / static_cast<Real>(n));
    return from_points(std::move(coords), 1, std::move(w), MetricKind::Euclidean);
}

PointCloudSpace PointCloudSpace::circle_grid(Index n) {
    if (n < 2) throw config_error("circle_grid: need n >= 2");
    std::vector<Real> coords(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        coords[static_cast<std::size_t>(i)] = static_cast<Real>(i) / static_cast<Real>(n);
    std::vector<Real> w(static_cast<std::size_t>(n), 1.0 / static_cast<Real>(n));
    return from_points(std::move(coords), 1, std::move(w), MetricKind::FlatTorus, {1.0});
}

PointCloudSpace PointCloudSpace::torus2d_grid(Index nx, Index ny) {
    if (nx < 2 || ny < 2) throw config_error("torus2d_grid: need nx, ny >= 2");
    const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    std::vector<Real> coords(2 * n);
    std::size_t k = 0;
    for (Index i = 0; i < nx; ++i) {
        for (Index j = 0; j < ny; ++j) {
            coords[2 * k] = static_cast<Real>(i) / static_cast<Real>(nx);
            coords[2 * k + 1] = static_cast<Real>(j) / static_cast<Real>(ny);
            ++k;
        }
    }
    std::vector<Real> w(n, 1.0 / static_cast<Real>(n));
    return from_points(std::move(coords), 2, std::move(w), MetricKind::FlatTorus, {1.0, 1.0});
}

PointCloudSpace PointCloudSpace::random_cloud(Index n, std::uint64_t seed, CloudSampler sampler) {
    if (n < 2) throw config_error("random_cloud: need n >= 2");
    std::mt19937_64 rng(seed);
    const int dim = sampler == CloudSampler::UnitInterval ? 1 : 2;
    std::vector<Real> coords(static_cast<std::size_t>(n) * dim);
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = unit_real(rng);
    std::vector<Real> w(static_cast<std::size_t>(n), 1.0 / static_cast<Real>(n));
    if (sampler == CloudSampler::UnitTorus)
        return from_points(std::move(coords), 2, std::move(w), MetricKind::FlatTorus, {1.0, 1.0});
    return from_points(std::move(coords), dim, std::move(w), MetricKind::Euclidean);
}

void PointCloudSpace::finalize() {
    if (n_ <= 0) throw config_error("space must contain at least one point");
    for (Real w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw NonPositiveWeight("weights must be strictly positive");
    total_mass_ = pairwise_sum(weights_);
    id_ = g_next_space_id.fetch_add(1);
    if (kind_ != MetricKind::DistanceTable) {
        build_grid();
        // Diameter upper bound: bbox diagonal, or half-period box for tori.
        Real d2 = 0.0;
        for (int k = 0; k < dim_; ++k) {
            if (kind_ == MetricKind::FlatTorus) {
                d2 += sq(period_[static_cast<std::size_t>(k)] / 2.0);
            } else {
                Real lo = kInf, hi = -kInf;
                for (Index i = 0; i < n_; ++i) {
                    lo = std::min(lo, coord(i, k));
                    hi = std::max(hi, coord(i, k));
                }
                d2 += sq(hi - lo);
            }
        }
        diameter_ = std::sqrt(d2);
    }
    compute_spacing();
}

Real PointCloudSpace::distance(Index i, Index j) const {
    if (kind_ == MetricKind::DistanceTable)
        return table_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
    Real d2 = 0.0;
    const Real* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
    const Real* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
    if (kind_ == MetricKind::FlatTorus) {
        for (int k = 0; k < dim_; ++k) {
            const Real p = period_[static_cast<std::size_t>(k)];
            Real dx = std::abs(a[k] - b[k]);
            if (dx > p - dx) dx = p - dx;
            d2 += dx * dx;
        }
    } else {
        for (int k = 0; k < dim_; ++k) d2 += sq(a[k] - b[k]);
    }
    return std::sqrt(d2);
}

void PointCloudSpace::build_grid() {
    GridIndex g;
    g.wrap = kind_ == MetricKind::FlatTorus;
    g.lo.resize(static_cast<std::size_t>(dim_));
    g.cell.resize(static_cast<std::size_t>(dim_));
    g.ncell.resize(static_cast<std::size_t>(dim_));

    std::vector<Real> extent(static_cast<std::size_t>(dim_));
    Real vol = 1.0;
    for (int k = 0; k < dim_; ++k) {
        if (g.wrap) {
            g.lo[static_cast<std::size_t>(k)] = 0.0;
            extent[static_cast<std::size_t>(k)] = period_[static_cast<std::size_t>(k)];
        } else {
            Real lo = kInf, hi = -kInf;
            for (Index i = 0; i < n_; ++i) {
                lo = std::min(lo, coord(i, k));
                hi = std::max(hi, coord(i, k));
            }
            g.lo[static_cast<std::size_t>(k)] = lo;
            extent[static_cast<std::size_t>(k)] = std::max(hi - lo, 1e-300);
        }
        vol *= extent[static_cast<std::size_t>(k)];
    }
    // Aim for ~2 points per cell.
    const Real target = std::pow(vol * 2.0 / std::max<Real>(1.0, n_), 1.0 / dim_);
    std::size_t total = 1;
    for (int k = 0; k < dim_; ++k) {
        int nc = target > 0.0 ? static_cast<int>(extent[static_cast<std::size_t>(k)] / target) : 1;
        nc = std::clamp(nc, 1, 2048);
        g.ncell[static_cast<std::size_t>(k)] = nc;
        g.cell[static_cast<std::size_t>(k)] = extent[static_cast<std::size_t>(k)] / nc;
        total *= static_cast<std::size_t>(nc);
    }
    g.bins.assign(total, {});
    for (Index i = 0; i < n_; ++i) {
        std::size_t bin = 0;
        for (int k = 0; k < dim_; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            int c = static_cast<int>((coord(i, k) - g.lo[kk]) / g.cell[kk]);
            c = std::clamp(c, 0, g.ncell[kk] - 1);
            bin = bin * static_cast<std::size_t>(g.ncell[kk]) + static_cast<std::size_t>(c);
        }
        g.bins[bin].push_back(i);
    }
    grid_ = std::move(g);
}

void PointCloudSpace::compute_spacing() {
    if (n_ == 1) {
        h_ = 0.0;
        min_spacing_ = 0.0;
        return;
    }
    Real hmax = 0.0, hmin = kInf;
    if (kind_ == MetricKind::DistanceTable) {
        for (Index i = 0; i < n_; ++i) {
            Real best = kInf;
            for (Index j = 0; j < n_; ++j) {
                if (j == i) continue;
                const Real d = distance(i, j);
                if (d > 0.0 && d < best) best = d;
            }
            if (std::isfinite(best)) {
                hmax = std::max(hmax, best);
                hmin = std::min(hmin, best);
            }
        }
    } else {
        // Expanding ball search per point.
        std::vector<Index> buf;
        Real r0 = 0.0;
        for (std::size_t k = 0; k < grid_->cell.size(); ++k) r0 = std::max(r0, grid_->cell[k]);
        for (Index i = 0; i < n_; ++i) {
            Real best = kInf;
            for (Real r = r0; ; r *= 2.0) {
                ball_into(i, r, buf);
                for (Index j : buf) {
                    if (j == i) continue;
                    const Real d = distance(i, j);
                    if (d > 0.0 && d < best) best = d;
                }
                if (std::isfinite(best) || r > 2.0 * diameter_ + r0) break;
            }
            if (std::isfinite(best)) {
                hmax = std::max(hmax, best);
                hmin = std::min(hmin, best);
            }
        }
    }
    h_ = hmax;
    min_spacing_ = std::isfinite(hmin) ? hmin : 0.0;
}

void PointCloudSpace::ball_into(Index i, Real r, std::vector<Index>& out) const {
    out.clear();
    if (!(r > 0.0)) throw config_error("ball: radius must be positive");
    if (!grid_) {
        for (Index j = 0; j < n_; ++j)
            if (distance(i, j) < r) out.push_back(j);
        return;
    }
    const GridIndex& g = *grid_;
    const int dim = dim_;
    int lo[8], cnt[8];
    for (int k = 0; k < dim; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const Real x = coord(i, k);
        // clamp in double before the int cast; huge radii or degenerate
        // extents would otherwise overflow the conversion
        const Real span = static_cast<Real>(g.ncell[kk]);
        // one extra cell each side absorbs rounding at the window edges
        int a = static_cast<int>(
                    std::clamp(std::floor((x - r - g.lo[kk]) / g.cell[kk]), -2.0 * span - 2.0,
                               2.0 * span + 2.0)) - 1;
        int b = static_cast<int>(
                    std::clamp(std::floor((x + r - g.lo[kk]) / g.cell[kk]), -2.0 * span - 2.0,
                               2.0 * span + 2.0)) + 1;
        if (g.wrap) {
            if (b - a + 1 >= g.ncell[kk]) {
                a = 0;
                b = g.ncell[kk] - 1;
            }
        } else {
            a = std::max(a, 0);
            b = std::min(b, g.ncell[kk] - 1);
        }
        lo[k] = a;
        cnt[k] = b - a + 1;
    }
    // Odometer over the covered cell block.
    int idx[8] = {0};
    for (;;) {
        std::size_t bin = 0;
        for (int k = 0; k < dim; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            int c = lo[k] + idx[k];
            if (g.wrap) {
                c %= g.ncell[kk];
                if (c < 0) c += g.ncell[kk];
            }
            bin = bin * static_cast<std::size_t>(g.ncell[kk]) + static_cast<std::size_t>(c);
        }
        for (Index j : g.bins[bin])
            if (distance(i, j) < r) out.push_back(j);
        int k = dim - 1;
        while (k >= 0 && ++idx[k] == cnt[k]) idx[k--] = 0;
        if (k < 0) break;
    }
    std::sort(out.begin(), out.end());
}

IndexSet PointCloudSpace::ball(Index i, Real r) const {
    std::vector<Index> v;
    ball_into(i, r, v);
    return IndexSet(std::move(v));
}

Real PointCloudSpace::mu(const IndexSet& s) const {
    std::vector<Real> w(s.ids.size());
    for (std::size_t k = 0; k < s.ids.size(); ++k)
        w[k] = weights_[static_cast<std::size_t>(s.ids[k])];
    return pairwise_sum(w);
}

IndexSet PointCloudSpace::neighborhood(const IndexSet& u, Real lambda) const {
    if (lambda < 0.0) throw config_error("neighborhood: lambda must be >= 0");
    std::vector<Index> out;
    for (Index j = 0; j < n_; ++j) {
        if (u.contains(j)) {
            out.push_back(j);
            continue;
        }
        if (lambda > 0.0 && point_set_distance(j, u) < lambda) out.push_back(j);
    }
    return IndexSet(std::move(out));
}

Real PointCloudSpace::point_set_distance(Index i, const IndexSet& s) const {
    Real best = kInf;
    for (Index j : s.ids) best = std::min(best, distance(i, j));
    return best;
}

Real PointCloudSpace::set_distance(const IndexSet& a, const IndexSet& b) const {
    Real best = kInf;
    for (Index i : a.ids) {
        const Real d = point_set_distance(i, b);
        if (d < best) best = d;
    }
    return best;
}

void PointCloudSpace::require_scale(Real r, const char* what) const {
    // Radii that reach the whole space are exempt: every ball is X itself and
    // the partial-ball approximation concern behind the rule disappears.
    if (r >= diameter_) return;
    if (!(r >= 3.0 * h_))
        throw RadiusBelowResolution(std::string(what) +
                                    ": resolution rule requires r >= 3h (r = " + std::to_string(r) +
                                    ", 3h = " + std::to_string(3.0 * h_) + ")");
}

std::pair<Real, Real> doubling_estimate(const PointCloudSpace& space,
                                        std::span<const Real> sample_radii,
                                        std::span<const Index> sample_points) {
    if (space.size() == 1) return {1.0, 0.0};
    if (sample_radii.empty() || sample_points.empty())
        throw config_error("doubling_estimate: empty sample");
    Real chat = 0.0;
    std::vector<Index> buf;
    for (Real r : sample_radii) {
        if (r < space.min_spacing())
            throw RadiusBelowResolution("doubling_estimate: radius below min spacing");
        if (r > space.diameter_bound())
            throw config_error("doubling_estimate: radius beyond the diameter");
        for (Index i : sample_points) {
            space.ball_into(i, r, buf);
            if (buf.size() <= 1 && r >= 3.0 * space.resolution())
                throw RadiusBelowResolution("doubling_estimate: degenerate ball at radius " +
                                            std::to_string(r));
            Real m_r = 0.0;
            for (Index j : buf) m_r += space.weight(j);
            space.ball_into(i, 2.0 * r, buf);
            Real m_2r = 0.0;
            for (Index j : buf) m_2r += space.weight(j);
            chat = std::max(chat, m_2r / m_r);
        }
    }
    return {chat, std::log2(chat)};
}

PointCloudSpace subspace(const PointCloudSpace& space, const IndexSet& keep) {
    if (keep.empty()) throw EmptySet("subspace: empty selection");
    const std::size_t m = keep.ids.size();
    std::vector<Real> w(m);
    for (std::size_t k = 0; k < m; ++k)
        w[k] = space.weight(keep.ids[k]);
    if (space.metric() == MetricKind::DistanceTable) {
        std::vector<Real> t(m * m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                t[a * m + b] = space.distance(keep.ids[a], keep.ids[b]);
        return PointCloudSpace::from_table(std::move(t), std::move(w));
    }
    std::vector<Real> coords(m * static_cast<std::size_t>(space.dim()));
    for (std::size_t k = 0; k < m; ++k)
        for (int d = 0; d < space.dim(); ++d)
            coords[k * static_cast<std::size_t>(space.dim()) + static_cast<std::size_t>(d)] =
                space.coord(keep.ids[k], d);
    return PointCloudSpace::from_points(std::move(coords), space.dim(), std::move(w),
                                        space.metric(), space.period());
}

} // namespace kslab
