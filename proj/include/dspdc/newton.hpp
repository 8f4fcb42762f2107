#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "dspdc/errors.hpp"

namespace dspdc {

// Root of a strictly decreasing function on [lo, hi], f(lo) >= 0 >= f(hi).
// Newton steps safeguarded by the shrinking bracket; any step leaving the
// bracket (or a vanishing derivative) falls back to bisection. fd(x) returns
// {f(x), f'(x)}. Throws numerical_error if |step| > tol * max(1, |x|) still
// holds after max_iters iterations.
template <typename Fd>
double newton_bisect_root(Fd&& fd, double lo, double hi, double tol = 1e-12,
                          std::size_t max_iters = 50) {
    double x = 0.5 * (lo + hi);
    for (std::size_t it = 0; it < max_iters; ++it) {
        const auto [f, fp] = fd(x);
        if (f == 0.0) return x;
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        double next;
        if (fp < 0.0) {
            next = x - f / fp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= tol * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    throw numerical_error("newton_bisect_root: no convergence within iteration budget");
}

}  // namespace dspdc
