#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mginf {

// Samples of a function on the uniform grid {0, dt, 2*dt, ...}.
struct GridFunction {
    double dt = 1.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double step, std::vector<double> v) : dt(step), values(std::move(v)) {
        if (!(dt > 0)) throw constraint_error("GridFunction: step must be positive");
        if (values.empty()) throw constraint_error("GridFunction: needs at least one sample");
    }

    std::size_t size() const { return values.size(); }
    double t(std::size_t k) const { return static_cast<double>(k) * dt; }
    double t_max() const { return t(values.size() - 1); }
    double operator[](std::size_t k) const { return values[k]; }

    template <typename F>
    static GridFunction sample(F&& f, double step, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = f(static_cast<double>(k) * step);
        return GridFunction(step, std::move(v));
    }

    // Piecewise-linear value at an arbitrary point; clamps to the range ends.
    double interpolate(double x) const {
        if (x <= 0) return values.front();
        double pos = x / dt;
        auto k = static_cast<std::size_t>(pos);
        if (k + 1 >= values.size()) return values.back();
        double w = pos - static_cast<double>(k);
        return values[k] * (1.0 - w) + values[k + 1] * w;
    }
};

inline double sup_norm(const GridFunction& g) {
    double m = 0;
    for (double v : g.values) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_abs_diff(const GridFunction& a, const GridFunction& b) {
    if (std::abs(a.dt - b.dt) > 1e-12 * a.dt || a.size() != b.size())
        throw constraint_error("sup_abs_diff: grids must match");
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

// Cumulative trapezoid integral on the same grid: out[k] = ∫ over [0, k*dt].
inline GridFunction cumulative_trapezoid(const GridFunction& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = out[k - 1] + 0.5 * f.dt * (f.values[k - 1] + f.values[k]);
    return GridFunction(f.dt, std::move(out));
}

}  // namespace mginf
