#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "errors.hpp"
#include "grid_function.hpp"
#include "tolerance.hpp"

namespace mginf {

struct SeriesResult {
    double value = 0;
    int terms_used = 0;
    double tail_estimate = 0;
};

// Sums term(1) + term(2) + ... for terms that eventually decay geometrically.
// Stops when the ratio-witness tail bound |t_k|·q/(1−q) (q = |t_k|/|t_{k−1}|)
// drops to stop.abs_tol, or at the first exactly-zero term; stop.max_depth
// caps the number of terms.
template <typename TermFn>
SeriesResult sum_series(TermFn term, const Tolerance& stop) {
    SeriesResult r;
    double prev = 0;
    bool have_prev = false;
    for (int k = 1; k <= stop.max_depth; ++k) {
        const double tk = term(k);
        if (!std::isfinite(tk)) throw numeric_error("sum_series: non-finite term", r.value, prev);
        r.value += tk;
        r.terms_used = k;
        const double a = std::abs(tk);
        if (a == 0) {
            r.tail_estimate = 0;
            return r;
        }
        if (have_prev && a < prev) {
            const double q = a / prev;
            r.tail_estimate = a * q / (1 - q);
            if (r.tail_estimate <= stop.abs_tol) return r;
        }
        prev = a;
        have_prev = true;
    }
    throw numeric_error("sum_series: no geometric decay within term budget", r.value, r.tail_estimate);
}

struct GridSeriesResult {
    GridFunction value;
    int terms_used = 0;
    double tail_estimate = 0;
};

// Grid-valued variant of sum_series with the sup norm in place of |.|.
template <typename TermFn>
GridSeriesResult sum_series_grid(TermFn term, const Tolerance& stop) {
    GridSeriesResult r;
    r.value = term(1);
    r.terms_used = 1;
    double prev = sup_norm(r.value);
    if (prev == 0) return r;
    bool have_prev = true;
    for (int k = 2; k <= stop.max_depth; ++k) {
        const GridFunction tk = term(k);
        if (tk.size() != r.value.size())
            throw constraint_error("sum_series_grid: terms must share one grid");
        for (std::size_t i = 0; i < tk.size(); ++i) r.value.values[i] += tk.values[i];
        r.terms_used = k;
        const double a = sup_norm(tk);
        if (a == 0) {
            r.tail_estimate = 0;
            return r;
        }
        if (have_prev && a < prev) {
            const double q = a / prev;
            r.tail_estimate = a * q / (1 - q);
            if (r.tail_estimate <= stop.abs_tol) return r;
        }
        prev = a;
    }
    throw numeric_error("sum_series_grid: no geometric decay within term budget", sup_norm(r.value),
                        r.tail_estimate);
}

}  // namespace mginf
