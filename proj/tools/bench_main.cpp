// Benchmark: OpenMP kernels vs the serial O(n^2) reference.

#include <chrono>
#include <cstdio>

#include "kslab/energy.hpp"
#include "kslab/laplacian.hpp"
#include "kslab/reference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kslab;

namespace {

template <typename F>
double time_ms(F&& fn, int reps = 3) {
    double best = 1e300;
    for (int k = 0; k < reps; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best,
                        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt)
                            .count());
    }
    return best;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("%-28s %10s %10s %10s %12s\n", "kernel", "n", "impl ms", "ref ms", "rel diff");

    struct Case {
        const char* name;
        PointCloudSpace space;
        Real r;
    };
    std::vector<Case> cases;
    cases.push_back({"circle", PointCloudSpace::circle_grid(4000), 0.05});
    cases.push_back({"torus2", PointCloudSpace::torus2d_grid(48, 48), 0.1});

    for (const auto& c : cases) {
        const auto f = make_random(c.space, 3);
        const auto g = make_random(c.space, 4);

        Real impl_val = 0.0, ref_val = 0.0;
        const double t_impl =
            time_ms([&] { impl_val = ks_energy(c.space, f, 2.0, c.r).value; });
        const double t_ref = time_ms([&] { ref_val = ref::ks_energy(c.space, f, 2.0, c.r); }, 1);
        std::printf("%-20s (p=2)   %10d %10.2f %10.2f %12.2e\n", c.name, c.space.size(), t_impl,
                    t_ref, std::abs(impl_val - ref_val) / std::abs(ref_val));

        std::vector<Real> lap_impl;
        std::vector<Real> lap_ref;
        const double tl_impl = time_ms([&] {
            lap_impl = p_laplacian(c.space, f, 2.0, c.r).values;
        });
        const double tl_ref = time_ms([&] { lap_ref = ref::p_laplacian(c.space, f, 2.0, c.r); }, 1);
        Real worst = 0.0;
        for (std::size_t i = 0; i < lap_impl.size(); ++i)
            worst = std::max(worst, std::abs(lap_impl[i] - lap_ref[i]) /
                                        std::max(std::abs(lap_ref[i]), 1.0));
        std::printf("%-20s (lap)   %10d %10.2f %10.2f %12.2e\n", c.name, c.space.size(), tl_impl,
                    tl_ref, worst);

        Real pair_impl = 0.0, pair_ref = 0.0;
        const double tp_impl = time_ms([&] { pair_impl = ks_pair(c.space, f, g, 3.0, c.r); });
        const double tp_ref = time_ms([&] { pair_ref = ref::ks_pair(c.space, f, g, 3.0, c.r); }, 1);
        std::printf("%-20s (pair)  %10d %10.2f %10.2f %12.2e\n", c.name, c.space.size(), tp_impl,
                    tp_ref, std::abs(pair_impl - pair_ref) / std::abs(pair_ref));
    }
    return 0;
}
