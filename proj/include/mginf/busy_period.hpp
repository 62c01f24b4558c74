#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "convolution.hpp"
#include "errors.hpp"
#include "grid_function.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "service_law.hpp"
#include "tolerance.hpp"

namespace mginf {

namespace detail {

inline double binomial(int n, int k) {
    double b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace detail

// E[B^n] for n = 1..n_max plus the derivatives at 0 of the companion
// transform C entering the moment recursion.
struct MomentTable {
    int n_max = 0;
    std::vector<double> values;    // values[i] = E[B^{i+1}]
    std::vector<double> c_values;  // c_values[j] = C^{(j)}(0), j = 0..n_max−1
};

struct GridReport {
    GridFunction grid;
    int terms_used = 0;
    double tail_estimate = 0;
    double max_adjustment = 0;  // largest clip/monotonize correction applied
};

struct PeakPair {
    double pi = 0;
    double qi = 0;
};

// Busy-period distribution of the M|G|infinity queue driven by a collection
// law: atom of size G(0) at zero plus, for constant drift, an exponential
// tail, making every functional below available in closed form.
class BusyPeriodLaw {
public:
    explicit BusyPeriodLaw(ServiceLaw law) : law_(std::move(law)) {}

    const ServiceLaw& service() const { return law_; }

    // P(B = 0), equal to the service-time atom.
    double atom() const { return law_.atom(); }

    // Exponential mixture weight and rate of the continuous part (constant
    // drift only): B = 0 w.p. atom, Exp(rate) w.p. weight.
    double mixture_weight() const {
        require_constant("mixture_weight");
        return -std::expm1(-law_.rho()) * (law_.lambda() + law_.eta()) / law_.lambda();
    }

    double mixture_rate() const {
        require_constant("mixture_rate");
        return std::exp(-law_.rho()) * (law_.lambda() + law_.eta());
    }

    // Laplace–Stieltjes transform E[e^{−sB}]: closed form when available,
    // quadrature route otherwise.
    double transform(double s) const {
        if (s == 0) return 1.0;
        if (law_.degenerate() || law_.constant_drift()) return transform_closed(s);
        return transform_numeric(s);
    }

    double transform_closed(double s) const {
        if (s == 0) return 1.0;
        if (law_.degenerate()) return 1.0;
        require_constant("transform_closed");
        const double w = mixture_weight();
        const double r = mixture_rate();
        return atom() + w * r / (s + r);
    }

    // Transform from the kernel Laplace transform alone; valid for every law
    // and independent of the mixture representation.
    double transform_numeric(double s) const {
        if (s == 0) return 1.0;
        if (law_.degenerate()) return 1.0;
        if (!(s > 0)) throw constraint_error("transform_numeric: requires s >= 0");
        const double lam = law_.lambda();
        const double a0 = law_.atom_numeric();
        const double le = laplace_at([this](double t) { return law_.survival_kernel(t); }, s, tight_tolerance());
        const double k = (1 - a0) * le;
        return (1 - (lam + s) * k) / (1 - lam * k);
    }

    // CDF in closed form; time-varying drift must go through the grid route.
    double cdf_closed(double t) const {
        if (t < 0) return 0.0;
        if (law_.degenerate()) return 1.0;
        if (!law_.constant_drift())
            throw constraint_error("busy-period cdf: no closed form for time-varying drift; use bp_cdf_general");
        const double w = mixture_weight();
        const double r = mixture_rate();
        return atom() + w * (-std::expm1(-r * t));
    }

    // Moments through honest quadrature of the recursion inputs
    // mu_j = ∫ t^j lambda (1−G(t)) u(t) dt with u the empty-system
    // probability, then
    //   E[B^n] = e^rho [ (n/lambda) mu_{n−1} + sum_k C(n,k) E[B^k] mu_{n−k} ].
    MomentTable moments(int n_max, const Tolerance& tol = tight_tolerance()) const {
        if (n_max < 1) throw constraint_error("moments: n_max must be at least 1");
        MomentTable table;
        table.n_max = n_max;

        const EmptyProbability u(law_, tol);
        // Time-varying drift evaluates the integrand through checkpointed
        // integrals whose ~1e−12 evaluation jitter puts a floor under what the
        // outer quadrature can resolve; keep the outer request above it.
        Tolerance outer = tol;
        if (!law_.constant_drift()) {
            outer.abs_tol = std::max(outer.abs_tol, 1e-10);
            outer.rel_tol = std::max(outer.rel_tol, 1e-9);
        }
        const double lam = law_.lambda();
        std::vector<double> mu(static_cast<std::size_t>(n_max));
        for (int j = 0; j < n_max; ++j) {
            mu[static_cast<std::size_t>(j)] = integrate_semi_infinite(
                [&, j](double t) {
                    const double s = law_.survival(t);
                    if (s == 0) return 0.0;
                    return std::pow(t, j) * lam * s * u(t);
                },
                outer);
        }

        table.c_values.resize(static_cast<std::size_t>(n_max));
        for (int j = 0; j < n_max; ++j)
            table.c_values[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * mu[static_cast<std::size_t>(j)];

        const double boost = std::exp(law_.rho());
        table.values.resize(static_cast<std::size_t>(n_max));
        for (int n = 1; n <= n_max; ++n) {
            double acc = (n / lam) * mu[static_cast<std::size_t>(n - 1)];
            for (int k = 1; k < n; ++k)
                acc += detail::binomial(n, k) * table.values[static_cast<std::size_t>(k - 1)] *
                       mu[static_cast<std::size_t>(n - k)];
            table.values[static_cast<std::size_t>(n - 1)] = boost * acc;
        }
        return table;
    }

    // Peak parameters: pi = transform at s = lambda/rho, and the companion
    // scalar qi = pi rho/(e^rho − rho − 1) + 1.
    PeakPair peak() const {
        const double pi = transform(law_.lambda() / law_.rho());
        return finish_peak(pi);
    }

    PeakPair peak_numeric() const {
        const double pi = law_.degenerate() ? 1.0 : transform_numeric(law_.lambda() / law_.rho());
        return finish_peak(pi);
    }

    // pi evaluated directly on the (lambda, p, beta) parameter surface,
    // bypassing the transform; constant beta only.
    double peak_parametric() const {
        require_constant("peak_parametric");
        const double lam = law_.lambda();
        const double rho = law_.rho();
        const double p = law_.p();
        const double b = law_.beta(0);
        const double ex = std::exp(-rho);
        const double num = ex * (lam + b) * (rho + 1) - lam * p - b;
        const double den = lam * (ex * (rho + law_.alpha() * b) + 1 - p);
        return num / den;
    }

    // Modified pair: pi' = (rho/(rho+1)) pi and qi' = pi' rho/(e^rho − 1) + 1.
    PeakPair modified_peak() const {
        const double rho = law_.rho();
        const double pi_mod = rho / (rho + 1) * transform(law_.lambda() / rho);
        return {pi_mod, pi_mod * rho / std::expm1(rho) + 1.0};
    }

private:
    void require_constant(const char* what) const {
        if (!law_.constant_drift())
            throw constraint_error(std::string(what) + ": requires constant drift");
    }

    PeakPair finish_peak(double pi) const {
        const double rho = law_.rho();
        return {pi, pi * rho / (std::expm1(rho) - rho) + 1.0};
    }

    ServiceLaw law_;
};

// Busy-period CDF on a uniform grid for any law: the n-fold coverage terms
//   D_0(t) = 1 − (1 − G0)(E(t) + lambda ∫₀ᵗ E),
//   D_{n+1} = D_n ⊛ lambda (1 − G0) E,
// summed until the geometric tail estimate is below tol.abs_tol (term count
// capped at tol.max_depth), then clipped to [0, 1] and monotonized.
inline GridReport bp_cdf_general(const ServiceLaw& law, double t_max, double dt,
                                 const Tolerance& tol = Tolerance{1e-10, 0.0, 1000}) {
    if (!(t_max > 0) || !(dt > 0) || !(dt <= t_max))
        throw constraint_error("bp_cdf_general: requires 0 < dt <= t_max");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;

    GridReport report;
    if (law.degenerate()) {
        report.grid = GridFunction{dt, std::vector<double>(n, 1.0)};
        report.terms_used = 1;
        return report;
    }

    const double lam = law.lambda();
    const double a0 = law.atom_numeric();

    std::vector<double> kernel(n), base(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double e = law.survival_kernel(t);
        kernel[i] = lam * (1 - a0) * e;
        base[i] = 1.0 - (1 - a0) * (e + lam * law.kernel_cumulative(t));
    }
    const GridFunction kernel_grid{dt, kernel};

    GridFunction current{dt, base};
    auto term = [&](int k) {
        if (k == 1) return current;
        current = convolve_grid(current, kernel_grid);
        return current;
    };
    auto series = sum_series_grid(term, tol);

    report.terms_used = series.terms_used;
    report.tail_estimate = series.tail_estimate;
    auto& v = series.value.values;
    double run = 0;
    for (auto& x : v) {
        double y = std::min(1.0, std::max(0.0, x));
        y = std::max(y, run);
        report.max_adjustment = std::max(report.max_adjustment, std::abs(y - x));
        run = y;
        x = y;
    }
    if (report.max_adjustment > 10 * tol.abs_tol)
        throw numeric_error("bp_cdf_general: grid too coarse (large monotonicity repair)", sup_norm(series.value),
                            report.max_adjustment);
    report.grid = std::move(series.value);
    return report;
}

// Law-free busy-period CDF comparison curve: the exponential with the busy
// period's own mean (e^rho−1)/lambda, which every law in the collection sits
// above for t up to that mean (with equality at the drift band's upper edge).
// Because the two curves share their mean they must cross, so this is a lower
// bound only on [0, (e^rho−1)/lambda], not globally.
inline double bp_lower_bound(double lambda, double rho, double t) {
    if (!(lambda > 0) || !(rho > 0)) throw constraint_error("bp_lower_bound: requires lambda, rho > 0");
    if (t < 0) return 0.0;
    return -std::expm1(-lambda * t / std::expm1(rho));
}

}  // namespace mginf
