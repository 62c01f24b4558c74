#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "tolerance.hpp"

namespace mginf {

namespace detail {

// Gauss–Kronrod 7–15 pair on [a, b]: Kronrod value plus |K15 − G7| as a
// conservative per-panel error bound.
struct PanelEstimate {
    double integral;
    double error;
};

template <typename F>
PanelEstimate kronrod15(F&& f, double a, double b) {
    static constexpr double xgk[7] = {
        0.991455371120812639206854697526329,  //
        0.949107912342758524526189684047851,  //
        0.864864423359769072789712788640926,  //
        0.741531185599394439863864773280788,  //
        0.586087235467691130294144838258730,  //
        0.405845151377397166906606412076961,  //
        0.207784955007898467600689403773245};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970,  //
        0.063092092629978553290700663189204,  //
        0.104790010322250183839876322541518,  //
        0.140653259715525918745189590510238,  //
        0.169004726639267902826583426598550,  //
        0.190350578064785409913256402421014,  //
        0.204432940075298892414161999234649,  //
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,  //
        0.279705391489276667901467771423780,  //
        0.381830050505118944950369775488975,  //
        0.417959183673469387755102040816327};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double acc_k = wgk[7] * fc;
    double acc_g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double f1 = f(c - h * xgk[i]);
        const double f2 = f(c + h * xgk[i]);
        acc_k += wgk[i] * (f1 + f2);
        if (i % 2 == 1) acc_g += wg[i / 2] * (f1 + f2);
    }
    const double ik = acc_k * h;
    const double ig = acc_g * h;
    return {ik, std::abs(ik - ig)};
}

struct Segment {
    double a, b, integral, error;
    int depth;
};

inline bool segment_less(const Segment& x, const Segment& y) { return x.error < y.error; }

}  // namespace detail

// Adaptive Gauss–Kronrod integration of f over [a, b]. Succeeds when the
// summed panel error bound is at or below abs_tol + rel_tol*|I|; throws
// numeric_error (carrying the best estimate) if bisection depth runs out.
template <typename F>
double integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    if (!(a <= b)) throw constraint_error("integrate: requires a <= b");
    if (a == b) return 0.0;

    auto first = detail::kronrod15(f, a, b);
    if (!std::isfinite(first.integral))
        throw numeric_error("integrate: integrand produced a non-finite value", first.integral, first.error);

    std::vector<detail::Segment> heap{{a, b, first.integral, first.error, 0}};
    double total = first.integral;
    double total_err = first.error;
    std::size_t splits = 0;

    auto recompute = [&] {
        total = 0;
        total_err = 0;
        for (const auto& s : heap) {
            total += s.integral;
            total_err += s.error;
        }
    };

    while (total_err > tol.abs_tol + tol.rel_tol * std::abs(total)) {
        std::pop_heap(heap.begin(), heap.end(), detail::segment_less);
        detail::Segment worst = heap.back();
        heap.pop_back();
        if (worst.depth >= tol.max_depth)
            throw numeric_error("integrate: did not converge at max depth", total, total_err);

        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        if (!std::isfinite(left.integral) || !std::isfinite(right.integral))
            throw numeric_error("integrate: integrand produced a non-finite value", total, total_err);

        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;

        heap.push_back({worst.a, mid, left.integral, left.error, worst.depth + 1});
        std::push_heap(heap.begin(), heap.end(), detail::segment_less);
        heap.push_back({mid, worst.b, right.integral, right.error, worst.depth + 1});
        std::push_heap(heap.begin(), heap.end(), detail::segment_less);

        if ((++splits & 0xFF) == 0) recompute();
        if (heap.size() > 200000)
            throw numeric_error("integrate: panel budget exhausted", total, total_err);
    }
    return total;
}

// Integration of f over [0, ∞) for integrands that eventually decay
// geometrically: adds contributions over [0,1], [1,2], [2,4], ... and stops
// once two consecutive chunks are below tolerance while shrinking.
template <typename F>
double integrate_semi_infinite(F&& f, const Tolerance& tol = {}) {
    const Tolerance chunk_tol{tol.abs_tol / 4, tol.rel_tol / 2, tol.max_depth};
    double t0 = 0.0;
    double t1 = 1.0;
    double total = 0.0;
    double prev_abs = std::numeric_limits<double>::infinity();
    double last_chunk = 0.0;
    int calm = 0;
    for (int depth = 0; depth <= tol.max_depth; ++depth) {
        const double c = integrate(f, t0, t1, chunk_tol);
        total += c;
        last_chunk = c;
        const double thresh = std::max(tol.abs_tol / 2, tol.rel_tol * std::abs(total) / 2);
        if (std::abs(c) < thresh && std::abs(c) <= prev_abs) {
            if (++calm >= 2) return total;
        } else {
            calm = 0;
        }
        prev_abs = std::abs(c);
        t0 = t1;
        t1 *= 2;
    }
    throw numeric_error("integrate_semi_infinite: no decaying tail detected", total, std::abs(last_chunk));
}

// Pointwise Laplace transform ∫₀^∞ e^{−st} f(t) dt, s > 0.
template <typename F>
double laplace_at(F&& f, double s, const Tolerance& tol = {}) {
    if (!(s > 0)) throw constraint_error("laplace_at: requires s > 0");
    return integrate_semi_infinite([&](double t) { return std::exp(-s * t) * f(t); }, tol);
}

// ∫₀ᵗ f with lazily extended checkpoints every `step`: an evaluation costs one
// adaptive pass over at most `step` of range, so nested integrals stay cheap.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double step, Tolerance tol = tight_tolerance())
        : f_(std::move(f)), h_(step), tol_(tol), cum_{0.0} {
        if (!(h_ > 0)) throw constraint_error("CumulativeIntegral: step must be positive");
    }

    double operator()(double t) const {
        if (!(t > 0)) return 0.0;
        ensure(t);
        auto k = static_cast<std::size_t>(t / h_);
        if (k >= cum_.size()) k = cum_.size() - 1;
        const double a = static_cast<double>(k) * h_;
        if (t <= a) return cum_[k];
        return cum_[k] + integrate(f_, a, t, tol_);
    }

    double checkpoint_step() const { return h_; }

private:
    void ensure(double t) const {
        while (static_cast<double>(cum_.size() - 1) * h_ < t) {
            const auto k = static_cast<double>(cum_.size() - 1);
            cum_.push_back(cum_.back() + integrate(f_, k * h_, (k + 1) * h_, tol_));
            if (cum_.size() > 20000000)
                throw numeric_error("CumulativeIntegral: checkpoint budget exhausted", cum_.back(), 0.0);
        }
    }

    std::function<double(double)> f_;
    double h_;
    Tolerance tol_;
    mutable std::vector<double> cum_;
};

}  // namespace mginf
