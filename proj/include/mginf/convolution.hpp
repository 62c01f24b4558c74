#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "grid_function.hpp"

namespace mginf {

// Trapezoid-rule convolution (F*g)(t_k) = ∫₀^{t_k} F(t_k − u) g(u) du on the
// common grid; both inputs must share dt and start at t = 0.
inline GridFunction convolve_grid(const GridFunction& F, const GridFunction& g) {
    if (std::abs(F.dt - g.dt) > 1e-12 * F.dt)
        throw constraint_error("convolve_grid: grids must share the same step");
    const std::size_t n = std::min(F.size(), g.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.5 * (F.values[k] * g.values[0] + F.values[0] * g.values[k]);
        for (std::size_t j = 1; j < k; ++j) acc += F.values[k - j] * g.values[j];
        out[k] = acc * F.dt;
    }
    return GridFunction(F.dt, std::move(out));
}

}  // namespace mginf
