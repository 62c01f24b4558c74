#pragma once

#include <cmath>

#include "errors.hpp"
#include "tolerance.hpp"

namespace mginf {

// Bisection inverse of a nondecreasing f on [lo, hi]: returns t with
// |f(t) − y| ≤ abs_tol for continuous f; at a jump, converges to the smallest
// t with f(t) ≥ y. The target must lie inside [f(lo), f(hi)].
template <typename F>
double invert_monotone(F&& f, double y, double lo, double hi, const Tolerance& tol = {}) {
    if (!(lo <= hi)) throw constraint_error("invert_monotone: requires lo <= hi");
    const double flo = f(lo);
    const double fhi = f(hi);
    if (y < flo || y > fhi) throw constraint_error("invert_monotone: target outside bracket");
    if (std::abs(flo - y) <= tol.abs_tol) return lo;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (std::abs(fm - y) <= tol.abs_tol) return mid;
        if (fm < y)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace mginf
