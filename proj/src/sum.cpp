#include "kslab/sum.hpp"

namespace kslab {

namespace {

constexpr std::size_t kLeaf = 8;

Real pairwise_rec(const Real* v, std::size_t n) {
    if (n <= kLeaf) {
        Real s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}

Real pairwise_dot_rec(const Real* w, const Real* v, std::size_t n) {
    if (n <= kLeaf) {
        Real s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_dot_rec(w, v, half) + pairwise_dot_rec(w + half, v + half, n - half);
}

} // namespace

Real pairwise_sum(std::span<const Real> v) { return pairwise_rec(v.data(), v.size()); }

Real pairwise_dot(std::span<const Real> w, std::span<const Real> v) {
    return pairwise_dot_rec(w.data(), v.data(), v.size());
}

} // namespace kslab
