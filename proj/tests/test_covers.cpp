#include "doctest.h"

#include <cmath>

#include "kslab/covers.hpp"
#include "kslab/field.hpp"

using namespace kslab;

TEST_CASE("net with eps beyond the diameter has a single center") {
    const auto s = PointCloudSpace::circle_grid(50);
    const auto net = maximal_eps_net(s, 2.0);
    CHECK(net.centers.ids == std::vector<Index>{0});
    CHECK(net.covering_ok);
}

TEST_CASE("both points of a 2-point space are centers at eps = 0.5") {
    const auto s = PointCloudSpace::from_points({0.0, 1.0}, 1, {0.5, 0.5});
    const auto net = maximal_eps_net(s, 0.5);
    CHECK(net.centers.ids == std::vector<Index>{0, 1});
}

TEST_CASE("circle net: separation and covering verified exhaustively") {
    const auto s = PointCloudSpace::circle_grid(100);
    // 0.0999 rather than 0.1: lattice gaps computed in floating point land an
    // ulp below 0.1, so the exact-tie radius admits a lattice-dependent count
    const auto net = maximal_eps_net(s, 0.0999);
    CHECK(net.centers.size() == 10);
    for (Real eps : {0.0999, 0.1}) {
        const auto n2 = maximal_eps_net(s, eps);
        for (std::size_t a = 0; a < n2.centers.ids.size(); ++a)
            for (std::size_t b = a + 1; b < n2.centers.ids.size(); ++b)
                CHECK(s.distance(n2.centers.ids[a], n2.centers.ids[b]) >= eps);
        for (Index i = 0; i < s.size(); ++i) {
            Real best = 1e300;
            for (Index c : n2.centers.ids) best = std::min(best, s.distance(i, c));
            CHECK(best < eps);
        }
    }
}

TEST_CASE("net idempotence: the centers-only subspace reproduces all centers") {
    const auto s = PointCloudSpace::circle_grid(200);
    const auto net = maximal_eps_net(s, 0.07);
    const auto centers_only = subspace(s, net.centers);
    const auto again = maximal_eps_net(centers_only, 0.07);
    CHECK(again.centers.size() == net.centers.size());
}

TEST_CASE("overlap counts") {
    const auto s = PointCloudSpace::circle_grid(1000);
    const auto net = maximal_eps_net(s, 0.05);
    const int at1 = overlap_count(s, net, 1.0);
    const int at5 = overlap_count(s, net, 5.0);
    CHECK(at1 <= at5); // dilated balls only grow
    CHECK(at5 <= 11);

    // exhaustive recount
    int worst = 0;
    for (Index i = 0; i < s.size(); ++i) {
        int c = 0;
        for (Index center : net.centers.ids)
            if (s.distance(i, center) < 5.0 * net.eps) ++c;
        worst = std::max(worst, c);
    }
    CHECK(at5 == worst);

    const auto wide = maximal_eps_net(s, 2.0);
    CHECK(overlap_count(s, wide, 1.0) == 1);
}

TEST_CASE("single-center partition is identically one") {
    const auto s = PointCloudSpace::circle_grid(60);
    const auto net = maximal_eps_net(s, 2.0);
    const auto pou = partition_of_unity(s, net);
    REQUIRE(pou.support.size() == 1);
    const auto row = partition_row_dense(s, pou, 0);
    for (Real v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-point partition matches the tent formula by hand") {
    // eps = 1, d(a,b) = 1: psi_a(b) = 1 - 1/2 = 1/2, psi_b(b) = 1,
    // so phi_a(b) = 1/3 and phi_a(a) = 2/3.
    const auto s = PointCloudSpace::from_points({0.0, 1.0}, 1, {0.5, 0.5});
    const auto net = maximal_eps_net(s, 1.0);
    REQUIRE(net.centers.ids == std::vector<Index>{0, 1});
    const auto pou = partition_of_unity(s, net);
    const auto row_a = partition_row_dense(s, pou, 0);
    const auto row_b = partition_row_dense(s, pou, 1);
    CHECK(row_a[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(row_a[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(row_a[0] + row_b[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(row_a[1] + row_b[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("partition sums to one and respects supports") {
    const auto s = PointCloudSpace::circle_grid(200);
    const auto net = maximal_eps_net(s, 0.05);
    const auto pou = partition_of_unity(s, net);

    std::vector<Real> total(static_cast<std::size_t>(s.size()), 0.0);
    for (std::size_t k = 0; k < pou.support.size(); ++k) {
        const auto row = partition_row_dense(s, pou, k);
        const Index c = net.centers.ids[k];
        for (Index i = 0; i < s.size(); ++i) {
            CHECK(row[static_cast<std::size_t>(i)] >= 0.0);
            CHECK(row[static_cast<std::size_t>(i)] <= 1.0);
            if (s.distance(i, c) >= 2.0 * net.eps)
                CHECK(row[static_cast<std::size_t>(i)] == 0.0);
            total[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)];
        }
    }
    for (Real v : total) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("empirical Lipschitz quotient of the partition") {
    const auto s = PointCloudSpace::circle_grid(150);
    const auto net = maximal_eps_net(s, 0.08);
    const auto pou = partition_of_unity(s, net);
    const Real quotient = empirical_partition_lip(s, pou);
    const int k2 = overlap_count(s, net, 2.0);
    CHECK(quotient <= 2.0 / net.eps * (1.0 + k2));
    CHECK(quotient <= pou.lip_bound);
}

TEST_CASE("non-positive eps is rejected; tiny eps still yields a valid net") {
    const auto s = PointCloudSpace::circle_grid(100);
    CHECK_THROWS_AS((void)maximal_eps_net(s, 0.0), config_error);
    // below the spacing every point is its own center
    const auto net = maximal_eps_net(s, 0.001);
    CHECK(net.centers.size() == s.size());
    CHECK(net.covering_ok);
}
