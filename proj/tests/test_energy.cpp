#include "doctest.h"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kslab/energy.hpp"
#include "kslab/reference.hpp"
#include "oracles.hpp"

using namespace kslab;

namespace {

PointCloudSpace two_point_space() {
    return PointCloudSpace::from_points({0.0, 1.0}, 1, {0.5, 0.5});
}

ScalarField random_field(const PointCloudSpace& s, std::uint64_t seed) {
    return make_random(s, seed);
}

} // namespace

TEST_CASE("constant fields have zero energy") {
    const auto s = PointCloudSpace::circle_grid(100);
    const auto f = make_constant(s, 3.7);
    for (Real p : {1.0, 1.5, 2.0, 3.0})
        CHECK(ks_energy(s, f, p, 0.1).value == 0.0);
}

TEST_CASE("two-point energy by hand: value 1/8") {
    // balls are the whole space; average |df|^2 = 1/2 at each point;
    // value = (1/r^2) * (1/2 * 1/2 + 1/2 * 1/2) = 1/8 for r = 2.
    const auto s = two_point_space();
    ScalarField f = bind_field(s, {0.0, 1.0});
    const auto e = ks_energy(s, f, 2.0, 2.0);
    CHECK(e.value == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(e.density[0] == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("sine on the circle matches the continuum quadrature oracle") {
    const auto s = PointCloudSpace::circle_grid(4000);
    const auto f = make_sine(s);
    const Real got = ks_energy(s, f, 2.0, 0.05).value;
    const Real expect = oracle::circle_energy(
        [](Real x) { return std::sin(2.0 * M_PI * x); }, 2.0, 0.05);
    // closed form at this radius: (1/r^3)(r - sin(2 pi r)/(2 pi))
    const Real closed = (0.05 - std::sin(2.0 * M_PI * 0.05) / (2.0 * M_PI)) / std::pow(0.05, 3);
    CHECK(expect == doctest::Approx(closed).epsilon(1e-6));
    CHECK(got == doctest::Approx(expect).epsilon(0.005));
    // limiting constant C_{1,2} = 1/3: value within 2% of 2 pi^2 / 3
    CHECK(std::abs(got - 2.0 * M_PI * M_PI / 3.0) / (2.0 * M_PI * M_PI / 3.0) < 0.02);
    CHECK(oracle::c1p(2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("localized energy") {
    const auto s = two_point_space();
    ScalarField f = bind_field(s, {0.0, 1.0});
    SUBCASE("full set equals the global energy") {
        const auto full = ks_energy_local(s, f, 2.0, 2.0, IndexSet::full(2));
        CHECK(full.value == ks_energy(s, f, 2.0, 2.0).value);
    }
    SUBCASE("outer restriction to one point halves the hand value") {
        const auto half = ks_energy_local(s, f, 2.0, 2.0, IndexSet({0}));
        CHECK(half.value == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    }
    SUBCASE("empty set is rejected") {
        CHECK_THROWS_AS((void)ks_energy_local(s, f, 2.0, 2.0, IndexSet{}), EmptySet);
    }
}

TEST_CASE("localized energy is additive over disjoint sets") {
    const auto s = PointCloudSpace::circle_grid(300);
    const auto f = random_field(s, 5);
    std::vector<Index> u_ids, v_ids;
    for (Index i = 0; i < 150; ++i) u_ids.push_back(i);
    for (Index i = 150; i < 300; ++i) v_ids.push_back(i);
    const IndexSet u(u_ids), v(v_ids);
    const Real eu = ks_energy_local(s, f, 2.0, 0.05, u).value;
    const Real ev = ks_energy_local(s, f, 2.0, 0.05, v).value;
    const Real both = ks_energy_local(s, f, 2.0, 0.05, u.set_union(v)).value;
    CHECK(std::abs(eu + ev - both) <= 1e-12 * both);
}

TEST_CASE("locality: equal on an r-neighborhood means equal localized energy") {
    const auto s = PointCloudSpace::circle_grid(400);
    const Real r = 0.05;
    IndexSet u = IndexSet::from_unsorted({40, 41, 42, 43, 44, 45, 46, 47, 48}, s.size());
    const IndexSet ur = s.neighborhood(u, r);
    const auto f = random_field(s, 21);
    auto g_vals = random_field(s, 22).values;
    for (Index i : ur.ids) g_vals[static_cast<std::size_t>(i)] = f[i];
    const auto g = bind_field(s, std::move(g_vals));
    CHECK(ks_energy_local(s, f, 2.0, r, u).value == ks_energy_local(s, g, 2.0, r, u).value);
}

TEST_CASE("pair form") {
    const auto s = PointCloudSpace::circle_grid(250);
    const auto f = random_field(s, 1);
    const auto g = random_field(s, 2);
    const Real r = 0.06;

    SUBCASE("ks_pair(f,f) recovers the energy") {
        for (Real p : {1.5, 2.0, 3.0, 2.7}) {
            const Real e = ks_energy(s, f, p, r).value;
            const Real q = ks_pair(s, f, f, p, r);
            CHECK(std::abs(q - e) <= 1e-14 * std::abs(e));
        }
    }
    SUBCASE("constant second argument gives zero") {
        const auto c = make_constant(s, 4.2);
        CHECK(ks_pair(s, f, c, 2.0, r) == 0.0);
        CHECK(ks_pair(s, f, c, 3.0, r) == 0.0);
    }
    SUBCASE("p = 1 is rejected") {
        CHECK_THROWS_AS((void)ks_pair(s, f, g, 1.0, r), ExponentNotAboveOne);
    }
    SUBCASE("central differences approach p * ks_pair(f,g)") {
        for (Real p : {2.0, 3.0}) {
            const Real pair = ks_pair(s, f, g, p, r);
            Real prev_err = 0.0;
            for (Real t : {1e-3, 1e-4}) {
                auto plus = f.values, minus = f.values;
                for (std::size_t i = 0; i < plus.size(); ++i) {
                    plus[i] += t * g.values[i];
                    minus[i] -= t * g.values[i];
                }
                const Real ep = ks_energy(s, bind_field(s, plus), p, r).value;
                const Real em = ks_energy(s, bind_field(s, minus), p, r).value;
                const Real err = std::abs((ep - em) / (2.0 * t) - p * pair);
                if (t == 1e-3) {
                    prev_err = err;
                    CHECK(err <= 1e-2 * std::max(1.0, std::abs(pair)));
                } else {
                    CHECK(err <= std::max(prev_err, 1e-9)); // shrinking with t
                }
            }
        }
    }
}

TEST_CASE("sweep on a constant field is identically zero") {
    const auto s = PointCloudSpace::circle_grid(200);
    std::vector<Real> radii{0.2, 0.1, 0.05};
    const auto sw = ks_sweep(s, make_constant(s, 1.0), 2.0, radii);
    for (Real v : sw.values) CHECK(v == 0.0);
    CHECK(*sw.extrapolated == 0.0);
    CHECK(sw.sup_estimate == 0.0);
}

TEST_CASE("sweep extrapolation recovers the continuum limit for sine") {
    const auto s = PointCloudSpace::circle_grid(2000);
    std::vector<Real> radii{0.2, 0.1, 0.05, 0.025};
    const auto sw = ks_sweep(s, make_sine(s), 2.0, radii);
    const Real target = 2.0 * M_PI * M_PI / 3.0;
    CHECK(std::abs(*sw.extrapolated - target) / target < 0.015);
    for (Real v : sw.values) CHECK(sw.sup_estimate >= v);
    CHECK(sw.liminf_window <= sw.limsup_window);
}

TEST_CASE("sweep validates its radius list") {
    const auto s = PointCloudSpace::circle_grid(200);
    std::vector<Real> bad{0.05, 0.1};
    CHECK_THROWS_AS((void)ks_sweep(s, make_sine(s), 2.0, bad), config_error);
}

TEST_CASE("energy properties on random fields") {
    const auto s = PointCloudSpace::circle_grid(220);
    const Real r = 0.07;
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = random_field(s, rng());
        const auto g = random_field(s, rng());
        for (Real p : {1.0, 1.5, 2.0, 3.0}) {
            const Real ef = ks_energy(s, f, p, r).value;
            const Real eg = ks_energy(s, g, p, r).value;

            // convexity
            for (Real lam : {0.25, 0.5, 0.75}) {
                std::vector<Real> mix(f.values.size());
                for (std::size_t i = 0; i < mix.size(); ++i)
                    mix[i] = lam * f.values[i] + (1.0 - lam) * g.values[i];
                const Real em = ks_energy(s, bind_field(s, mix), p, r).value;
                CHECK(em <= (lam * ef + (1.0 - lam) * eg) * (1.0 + 1e-12));
            }

            // 1-Lipschitz contraction: clamp, abs, soft-shrink
            auto apply = [&](auto&& phi) {
                std::vector<Real> v(f.values.size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi(f.values[i]);
                return ks_energy(s, bind_field(s, v), p, r).value;
            };
            CHECK(apply([](Real t) { return std::clamp(t, -0.3, 0.3); }) <= ef * (1.0 + 1e-12));
            CHECK(apply([](Real t) { return std::abs(t); }) <= ef * (1.0 + 1e-12));
            CHECK(apply([](Real t) {
                      return t > 0.2 ? t - 0.2 : (t < -0.2 ? t + 0.2 : 0.0);
                  }) <= ef * (1.0 + 1e-12));

            // Minkowski
            const Real a = 0.8, b = -1.3;
            std::vector<Real> comb(f.values.size());
            for (std::size_t i = 0; i < comb.size(); ++i)
                comb[i] = a * f.values[i] + b * g.values[i];
            const Real ec = ks_energy(s, bind_field(s, comb), p, r).value;
            CHECK(std::pow(ec, 1.0 / p) <=
                  (std::abs(a) * std::pow(ef, 1.0 / p) + std::abs(b) * std::pow(eg, 1.0 / p)) *
                      (1.0 + 1e-12));

            // Leibniz-type bound with 2^{p-1} and p-th power sup norms
            std::vector<Real> prod(f.values.size());
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f.values[i] * g.values[i];
            const Real epr = ks_energy(s, bind_field(s, prod), p, r).value;
            const Real bound = std::pow(2.0, p - 1.0) *
                               (std::pow(sup_norm(g), p) * ef + std::pow(sup_norm(f), p) * eg);
            CHECK(epr <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("density mass equals the value") {
    const auto s = PointCloudSpace::torus2d_grid(30, 30);
    const auto f = random_field(s, 31);
    const auto e = ks_energy(s, f, 2.0, 0.12);
    CompensatedSum acc;
    for (Index i = 0; i < s.size(); ++i)
        acc.add(s.weight(i) * e.density[static_cast<std::size_t>(i)]);
    CHECK(std::abs(acc.get() - e.value) <= 1e-12 * e.value);
    for (Real d : e.density) CHECK(d >= 0.0);
}

TEST_CASE("scaling homogeneity") {
    const auto s = PointCloudSpace::circle_grid(180);
    const auto f = random_field(s, 17);
    // powers of two scale exactly through the floating-point sums
    for (Real p : {1.0, 2.0, 3.0}) {
        const Real base = ks_energy(s, f, p, 0.08).value;
        std::vector<Real> doubled(f.values.size());
        for (std::size_t i = 0; i < doubled.size(); ++i) doubled[i] = 2.0 * f.values[i];
        CHECK(ks_energy(s, bind_field(s, doubled), p, 0.08).value == std::pow(2.0, p) * base);
    }
    // generic scalars and exponents agree to rounding
    const Real c = 1.7;
    std::vector<Real> scaled(f.values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = c * f.values[i];
    const Real lhs = ks_energy(s, bind_field(s, scaled), 1.5, 0.08).value;
    const Real rhs = std::pow(c, 1.5) * ks_energy(s, f, 1.5, 0.08).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("validation errors") {
    const auto s = PointCloudSpace::circle_grid(100);
    const auto f = make_sine(s);
    CHECK_THROWS_AS((void)ks_energy(s, f, 0.5, 0.1), ExponentBelowOne);
    CHECK_THROWS_AS((void)ks_energy(s, f, 2.0, 1e-5), RadiusBelowResolution);
    const auto other = PointCloudSpace::circle_grid(100);
    CHECK_THROWS_AS((void)ks_energy(other, f, 2.0, 0.1), SpaceMismatch);
}

TEST_CASE("production kernels agree with the serial reference") {
    const auto circle = PointCloudSpace::circle_grid(300);
    const auto cloud = PointCloudSpace::random_cloud(200, 3, CloudSampler::UnitTorus);
    for (const auto* s : {&circle, &cloud}) {
        const auto f = random_field(*s, 8);
        const auto g = random_field(*s, 9);
        const Real r = std::max(0.11, 3.0 * s->resolution());
        for (Real p : {1.0, 1.5, 2.0, 3.0}) {
            const Real a = ks_energy(*s, f, p, r).value;
            const Real b = ref::ks_energy(*s, f, p, r);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(b), 1e-30));
        }
        const Real qa = ks_pair(*s, f, g, 2.0, r);
        const Real qb = ref::ks_pair(*s, f, g, 2.0, r);
        CHECK(std::abs(qa - qb) <= 1e-12 * std::max(std::abs(qb), 1e-30));
    }
}

#ifdef _OPENMP
TEST_CASE("results are identical across thread counts") {
    const auto s = PointCloudSpace::circle_grid(500);
    const auto f = random_field(s, 55);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Real serial = ks_energy(s, f, 2.0, 0.05).value;
    omp_set_num_threads(3);
    const Real threaded = ks_energy(s, f, 2.0, 0.05).value;
    omp_set_num_threads(saved);
    CHECK(serial == threaded);
}
#endif
