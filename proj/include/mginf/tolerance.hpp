#pragma once

namespace mginf {

// Accuracy contract shared by the numeric kernels: a routine succeeds when its
// estimated error is at or below abs_tol + rel_tol*|result|, giving up after
// max_depth refinement steps (bisections, interval doublings, or series terms).
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 60;
};

// Preset for high-accuracy scalar quadrature feeding moment computations.
inline constexpr Tolerance tight_tolerance() { return {1e-12, 1e-10, 60}; }

// Preset for grid-series work (sup-norm truncation target and term budget).
inline constexpr Tolerance grid_tolerance() { return {1e-8, 1e-8, 4000}; }

}  // namespace mginf
