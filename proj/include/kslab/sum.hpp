#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace kslab {

using Real = double;

// Neumaier-compensated accumulator. Used for the inner (per-ball) sums,
// always fed in ascending point-index order.
struct CompensatedSum {
    Real sum = 0.0;
    Real carry = 0.0;

    void add(Real v) {
        const Real t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }

    Real get() const { return sum + carry; }
};

// Fixed-topology pairwise reduction over index order. The tree depends only
// on the array length, never on thread count, so parallel and serial runs of
// the callers produce identical totals.
Real pairwise_sum(std::span<const Real> v);

// Same tree, summing w[i]*v[i].
Real pairwise_dot(std::span<const Real> w, std::span<const Real> v);

} // namespace kslab
