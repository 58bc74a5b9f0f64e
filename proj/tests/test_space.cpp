#include "doctest.h"

#include <cmath>
#include <set>

#include "kslab/space.hpp"
#include "oracles.hpp"

using namespace kslab;

namespace {

PointCloudSpace two_point_space() {
    // d(a,b) = 1, weights 1/2 each
    return PointCloudSpace::from_points({0.0, 1.0}, 1, {0.5, 0.5});
}

} // namespace

TEST_CASE("two-point construction") {
    const auto s = two_point_space();
    CHECK(s.size() == 2);
    CHECK(s.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.distance(0, 1) == 1.0);
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(PointCloudSpace::from_points({0.0, 1.0}, 1, {0.5, 0.0}), NonPositiveWeight);
    CHECK_THROWS_AS(PointCloudSpace::from_points({0.0, NAN}, 1, {0.5, 0.5}), NonFiniteCoordinate);
    // d(a,b) != d(b,a)
    CHECK_THROWS_AS(PointCloudSpace::from_table({0.0, 1.0, 2.0, 0.0}, {0.5, 0.5}),
                    AsymmetricDistance);
    // triangle inequality violated: d(0,2)=5 > 1+1
    CHECK_THROWS_AS(
        PointCloudSpace::from_table({0, 1, 5, 1, 0, 1, 5, 1, 0}, {1.0, 1.0, 1.0}),
        config_error);
}

TEST_CASE("uniform circle grid mass") {
    const auto s = PointCloudSpace::circle_grid(1000);
    CHECK(std::abs(s.total_mass() - 1.0) <= 1e-15);
    CHECK(s.resolution() == doctest::Approx(0.001).epsilon(1e-12));
}

TEST_CASE("circle_grid(4) pairwise distances") {
    const auto s = PointCloudSpace::circle_grid(4);
    std::set<Real> dists;
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j)
            if (i != j) dists.insert(s.distance(i, j));
    CHECK(dists == std::set<Real>{0.25, 0.5});
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) CHECK(s.distance(i, j) == s.distance(j, i));
}

TEST_CASE("torus2d_grid basics") {
    const auto s = PointCloudSpace::torus2d_grid(3, 3);
    CHECK(s.size() == 9);
    for (Index i = 0; i < 9; ++i) CHECK(s.weight(i) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("random_cloud is deterministic") {
    const auto a = PointCloudSpace::random_cloud(64, 7);
    const auto b = PointCloudSpace::random_cloud(64, 7);
    for (Index i = 0; i < a.size(); ++i)
        for (int k = 0; k < a.dim(); ++k) CHECK(a.coord(i, k) == b.coord(i, k));
}

TEST_CASE("ball on the two-point space") {
    const auto s = two_point_space();
    CHECK(s.ball(0, 0.5).ids == std::vector<Index>{0});
    CHECK(s.ball(0, 2.0).ids == std::vector<Index>{0, 1});
    // open ball: tie at exactly r is excluded
    CHECK(s.ball(0, 1.0).ids == std::vector<Index>{0});
}

TEST_CASE("degenerate and extreme ball queries") {
    const auto single = PointCloudSpace::from_points({0.3}, 1, {1.0});
    CHECK(single.ball(0, 1e-9).ids == std::vector<Index>{0});
    CHECK(single.ball(0, 1e12).ids == std::vector<Index>{0});

    const auto s = PointCloudSpace::circle_grid(64);
    CHECK(s.ball(5, 1e12).size() == 64);
    const auto line = PointCloudSpace::interval_grid(32);
    CHECK(line.ball(0, 1e12).size() == 32);
}

TEST_CASE("ball equals exhaustive scan on grids and clouds") {
    const auto circle = PointCloudSpace::circle_grid(500);
    const auto cloud = PointCloudSpace::random_cloud(300, 11, CloudSampler::UnitTorus);
    for (const auto* s : {&circle, &cloud}) {
        for (Real r : {0.013, 0.07, 0.21, 0.55}) {
            for (Index i = 0; i < s->size(); i += 17) {
                CHECK(s->ball(i, r).ids == oracle::brute_ball(*s, i, r));
            }
        }
    }
}

TEST_CASE("circle ball with r = 3/N holds center plus two neighbors each side") {
    const Index n = 4000;
    const auto s = PointCloudSpace::circle_grid(n);
    const auto b = s.ball(0, 3.0 / n);
    CHECK(b.ids == oracle::brute_ball(s, 0, 3.0 / n));
    CHECK(b.size() == 5);
}

TEST_CASE("mu is additive and matches exhaustive sums") {
    const auto s = PointCloudSpace::circle_grid(777);
    CHECK(s.mu(IndexSet{}) == 0.0);
    CHECK(s.mu(IndexSet::full(s.size())) == s.total_mass());

    const auto b = s.ball(100, 0.1);
    Real direct = 0.0;
    for (Index j : b.ids) direct += s.weight(j);
    CHECK(s.mu(b) == doctest::Approx(direct).epsilon(1e-15));

    const auto even = IndexSet::from_unsorted({0, 2, 4, 6, 8}, s.size());
    const auto odd = IndexSet::from_unsorted({1, 3, 5, 7, 9}, s.size());
    CHECK(s.mu(even.set_union(odd)) ==
          doctest::Approx(s.mu(even) + s.mu(odd)).epsilon(1e-15));

    const auto t = two_point_space();
    CHECK(t.mu(IndexSet({0})) == 0.5);
}

TEST_CASE("neighborhood") {
    const auto t = two_point_space();
    const IndexSet u({0});
    CHECK(t.neighborhood(u, 0.0).ids == u.ids);
    CHECK(t.neighborhood(u, 2.0).ids == std::vector<Index>{0, 1});

    const auto s = PointCloudSpace::circle_grid(400);
    IndexSet arc = IndexSet::from_unsorted({10, 11, 12, 13, 14, 15}, s.size());
    const auto got = s.neighborhood(arc, 0.1);
    // brute-force min-distance scan
    std::vector<Index> expect;
    for (Index j = 0; j < s.size(); ++j) {
        Real best = 1e300;
        for (Index u_id : arc.ids) best = std::min(best, s.distance(j, u_id));
        if (best < 0.1 || arc.contains(j)) expect.push_back(j);
    }
    CHECK(got.ids == expect);

    // monotonicity in lambda
    const auto small = s.neighborhood(arc, 0.05);
    CHECK(small.set_minus(got).empty());
}

TEST_CASE("doubling estimate on uniform grids") {
    const auto circle = PointCloudSpace::circle_grid(1000);
    std::vector<Real> radii{5.0 / 1000, 0.01, 0.03, 0.1};
    std::vector<Index> pts{0, 100, 500, 900};
    auto [chat, qhat] = doubling_estimate(circle, radii, pts);
    CHECK(std::isfinite(chat));
    CHECK(qhat == doctest::Approx(1.0).epsilon(0.2));

    const auto torus = PointCloudSpace::torus2d_grid(40, 40);
    std::vector<Real> radii2{0.08, 0.12, 0.2};
    std::vector<Index> pts2{0, 40, 812};
    auto [chat2, qhat2] = doubling_estimate(torus, radii2, pts2);
    CHECK(qhat2 == doctest::Approx(2.0).epsilon(0.15));

    // scale stability on the circle
    Real qmin = 1e300, qmax = 0.0;
    for (Real r : radii) {
        std::vector<Real> one{r};
        auto [c, q] = doubling_estimate(circle, one, pts);
        (void)c;
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
    }
    CHECK(qmax - qmin < 0.5);
}

TEST_CASE("doubling estimate degenerate cases") {
    const auto single = PointCloudSpace::from_points({0.0}, 1, {1.0});
    std::vector<Real> radii{1.0};
    std::vector<Index> pts{0};
    auto [chat, qhat] = doubling_estimate(single, radii, pts);
    CHECK(chat == 1.0);
    CHECK(qhat == 0.0);

    const auto line = PointCloudSpace::interval_grid(10);
    std::vector<Real> tiny{1e-6};
    CHECK_THROWS_AS((void)doubling_estimate(line, tiny, pts), RadiusBelowResolution);
}

TEST_CASE("subspace keeps metric and weights") {
    const auto s = PointCloudSpace::circle_grid(100);
    const auto keep = IndexSet::from_unsorted({0, 10, 20, 30}, s.size());
    const auto sub = subspace(s, keep);
    CHECK(sub.size() == 4);
    CHECK(sub.distance(0, 1) == doctest::Approx(0.1));
    CHECK(sub.weight(0) == s.weight(0));
}

TEST_CASE("resolution rule gates scale-dependent queries") {
    const auto s = PointCloudSpace::circle_grid(100);
    CHECK_THROWS_AS(s.require_scale(1e-6, "test"), RadiusBelowResolution);
    CHECK_NOTHROW(s.require_scale(0.05, "test"));
}
