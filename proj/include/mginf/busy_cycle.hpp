#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "busy_period.hpp"
#include "convolution.hpp"
#include "errors.hpp"
#include "grid_function.hpp"
#include "quadrature.hpp"
#include "service_law.hpp"
#include "tolerance.hpp"

namespace mginf {

namespace detail {

// CDF at t of the sum of independent Exp(a) and Exp(b) variables, written as
// 1 − e^{−at}(1 + a t φ((a−b)t)) with φ(x) = (e^x − 1)/x; exact at a = b.
inline double hypoexp_cdf(double a, double b, double t) {
    if (t <= 0) return 0.0;
    const double x = (a - b) * t;
    if (x > 500.0) return 1.0 - std::exp(-a * t) - (a / (a - b)) * (std::exp(-b * t) - std::exp(-a * t));
    const double phi = x == 0 ? 1.0 : std::expm1(x) / x;
    return 1.0 - std::exp(-a * t) * (1.0 + a * t * phi);
}

}  // namespace detail

enum class RenewalMode { closed, numeric };

struct RenewalCurve {
    GridFunction grid;
    RenewalMode mode = RenewalMode::closed;
};

// Busy-cycle law: an exponential(lambda) idle period followed by an
// independent busy period. No atom at zero.
class BusyCycleLaw {
public:
    explicit BusyCycleLaw(ServiceLaw law) : bp_(std::move(law)) {}

    const BusyPeriodLaw& busy_period() const { return bp_; }
    const ServiceLaw& service() const { return bp_.service(); }

    // E[e^{−sZ}] = lambda/(lambda+s) E[e^{−sB}].
    double transform(double s) const {
        if (s == 0) return 1.0;
        const double lam = service().lambda();
        return lam / (lam + s) * bp_.transform(s);
    }

    double transform_numeric(double s) const {
        if (s == 0) return 1.0;
        const double lam = service().lambda();
        return lam / (lam + s) * bp_.transform_numeric(s);
    }

    // Closed CDF (constant drift): mixture of Exp(lambda) with weight atom0
    // and Exp(lambda)+Exp(r) with weight w; coincident rates are continuous
    // through the same expression.
    double cdf_closed(double t) const {
        if (t <= 0) return 0.0;
        const ServiceLaw& law = service();
        const double lam = law.lambda();
        if (law.degenerate()) return -std::expm1(-lam * t);
        if (!law.constant_drift())
            throw constraint_error("busy-cycle cdf: no closed form for time-varying drift; use bc_cdf_general");
        const double a0 = bp_.atom();
        const double w = bp_.mixture_weight();
        const double r = bp_.mixture_rate();
        return a0 * (-std::expm1(-lam * t)) + w * detail::hypoexp_cdf(lam, r, t);
    }

    // E[Z^n] for n = 1..n_max via the binomial expansion of (I + B)^n with
    // E[I^k] = k!/lambda^k; c_values stays empty (no companion transform).
    MomentTable moments(int n_max, const Tolerance& tol = tight_tolerance()) const {
        if (n_max < 1) throw constraint_error("moments: n_max must be at least 1");
        const MomentTable bp_table = bp_.moments(n_max, tol);
        const double lam = service().lambda();
        MomentTable table;
        table.n_max = n_max;
        table.values.resize(static_cast<std::size_t>(n_max));
        for (int n = 1; n <= n_max; ++n) {
            double acc = 0;
            double idle_fact = 1;  // (n−p)! / lambda^{n−p}, built from p = n down
            acc += bp_table.values[static_cast<std::size_t>(n - 1)];
            for (int p = n - 1; p >= 0; --p) {
                idle_fact *= static_cast<double>(n - p) / lam;
                const double bp_mom = p == 0 ? 1.0 : bp_table.values[static_cast<std::size_t>(p - 1)];
                acc += detail::binomial(n, p) * bp_mom * idle_fact;
            }
            table.values[static_cast<std::size_t>(n - 1)] = acc;
        }
        return table;
    }

    // Peak pair: pi' = transform at lambda/rho = (rho/(rho+1)) pi, and
    // qi' = pi' rho/(e^rho − 1) + 1.
    PeakPair peak() const {
        const ServiceLaw& law = service();
        const double pi = transform(law.lambda() / law.rho());
        return {pi, pi * law.rho() / std::expm1(law.rho()) + 1.0};
    }

    PeakPair peak_numeric() const {
        const ServiceLaw& law = service();
        const double pi = law.degenerate() ? law.rho() / (law.rho() + 1.0)
                                           : transform_numeric(law.lambda() / law.rho());
        return {pi, pi * law.rho() / std::expm1(law.rho()) + 1.0};
    }

    // pi' evaluated directly on the (lambda, p, beta) parameter surface;
    // constant beta only.
    double peak_parametric() const {
        const ServiceLaw& law = service();
        if (!law.constant_drift()) throw constraint_error("peak_parametric: requires constant drift");
        const double lam = law.lambda();
        const double rho = law.rho();
        const double p = law.p();
        const double b = law.beta(0);
        const double ex = std::exp(-rho);
        const double num = ex * (lam + b) * (rho + 1) - lam * p - b;
        const double den = ex * (rho + law.alpha() * b) + 1 - p;
        return law.alpha() * num / ((rho + 1) * den);
    }

private:
    BusyPeriodLaw bp_;
};

// Busy-cycle CDF on a uniform grid for any law: the busy-period grid
// convolved with the exponential(lambda) idle density, then clipped and
// monotonized under the same adjustment guard.
inline GridReport bc_cdf_general(const ServiceLaw& law, double t_max, double dt,
                                 const Tolerance& tol = Tolerance{1e-10, 0.0, 1000}) {
    GridReport bp_report = bp_cdf_general(law, t_max, dt, tol);
    const double lam = law.lambda();
    const GridFunction idle =
        GridFunction::sample([lam](double t) { return lam * std::exp(-lam * t); }, dt, bp_report.grid.size());
    GridFunction z = convolve_grid(bp_report.grid, idle);

    GridReport report;
    report.terms_used = bp_report.terms_used;
    report.tail_estimate = bp_report.tail_estimate;
    report.max_adjustment = bp_report.max_adjustment;
    double run = 0;
    for (auto& x : z.values) {
        double y = std::min(1.0, std::max(0.0, x));
        y = std::max(y, run);
        report.max_adjustment = std::max(report.max_adjustment, std::abs(y - x));
        run = y;
        x = y;
    }
    if (report.max_adjustment > 10 * tol.abs_tol)
        throw numeric_error("bc_cdf_general: grid too coarse (large monotonicity repair)", sup_norm(z),
                            report.max_adjustment);
    report.grid = std::move(z);
    return report;
}

// Two-sided law-free comparison curves for the busy-cycle CDF at t; the lower
// curve switches to its Erlang limit when e^rho − 2 vanishes. The upper curve
// (the idle period alone) bounds Z(t) for every t, because a cycle always
// contains its idle period. The lower curve is the band-top cycle CDF, which
// shares the cycle's law-free mean, so — as with the busy period — it bounds
// Z(t) only on [0, (e^rho−1)/lambda] and crosses above it beyond that.
inline std::pair<double, double> bc_bounds(double lambda, double rho, double t) {
    if (!(lambda > 0) || !(rho > 0)) throw constraint_error("bc_bounds: requires lambda, rho > 0");
    if (t <= 0) return {0.0, 0.0};
    const double upper = -std::expm1(-lambda * t);
    const double em1 = std::expm1(rho);  // e^rho − 1
    double lower;
    if (std::abs(em1 - 1.0) < 1e-8) {
        lower = 1.0 - (1.0 + lambda * t) * std::exp(-lambda * t);
    } else {
        lower = 1.0 - (em1 * std::exp(-lambda * t / em1) - std::exp(-lambda * t)) / (em1 - 1.0);
    }
    return {lower, upper};
}

// Renewal function in closed form (constant drift): the mean number of busy
// periods beginning in [0, t], counting the one at 0. Written as
//   R(t) = 1 + e^{−rho} lambda t − (1−e^{−rho}) eta t ψ((lambda+eta)t),
// ψ(x) = (1 − e^{−x})/x, which is exact at t = 0 and continuous through
// eta → 0 and eta → −lambda.
inline double renewal_closed(const ServiceLaw& law, double t) {
    if (t <= 0) return 1.0;
    const double lam = law.lambda();
    if (law.degenerate()) return 1.0 + lam * t;
    if (!law.constant_drift())
        throw constraint_error("renewal_closed: requires constant drift; use the numeric mode");
    const double eta = law.eta();
    const double x = (lam + eta) * t;
    const double psi = x == 0 ? 1.0 : -std::expm1(-x) / x;
    const double q = -std::expm1(-law.rho());
    return 1.0 + std::exp(-law.rho()) * lam * t - q * eta * t * psi;
}

// The same function as printed with its final coefficient duplicating the
// exponential term's; retained verbatim as a discrepancy exhibit.
inline double renewal_printed_form(const ServiceLaw& law, double t) {
    if (!law.constant_drift() || law.degenerate())
        throw constraint_error("renewal_printed_form: requires constant drift away from the degenerate endpoint");
    const double lam = law.lambda();
    const double eta = law.eta();
    const double q = -std::expm1(-law.rho());
    const double ratio = eta / (lam + eta);
    return std::exp(-law.rho()) * (1.0 + lam * t) + q * ratio * std::exp(-(lam + eta) * t) + q * ratio;
}

// Renewal function by nested quadrature: R(t) = u(t) + lambda ∫₀ᵗ u with
// u the empty-system probability. Valid for every law.
class RenewalNumeric {
public:
    explicit RenewalNumeric(const ServiceLaw& law, Tolerance tol = tight_tolerance())
        : lambda_(law.lambda()),
          u_(law, tol),
          cum_u_([this](double s) { return u_(s); }, std::clamp(0.25 / lambda_, 1e-3, 10.0), tol) {}

    // the checkpoint closure captures `this`
    RenewalNumeric(const RenewalNumeric&) = delete;
    RenewalNumeric& operator=(const RenewalNumeric&) = delete;

    double operator()(double t) const {
        if (t <= 0) return 1.0;
        return u_(t) + lambda_ * cum_u_(t);
    }

private:
    double lambda_;
    EmptyProbability u_;
    CumulativeIntegral cum_u_;
};

// Renewal curve on a uniform grid; closed mode when available, numeric
// otherwise (or on request).
inline RenewalCurve renewal(const ServiceLaw& law, double t_max, double dt) {
    if (!(t_max > 0) || !(dt > 0) || !(dt <= t_max))
        throw constraint_error("renewal: requires 0 < dt <= t_max");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
    RenewalCurve curve;
    if (law.constant_drift() || law.degenerate()) {
        curve.mode = RenewalMode::closed;
        curve.grid = GridFunction::sample([&law](double t) { return renewal_closed(law, t); }, dt, n);
        return curve;
    }
    curve.mode = RenewalMode::numeric;
    const RenewalNumeric r(law);
    curve.grid = GridFunction::sample([&r](double t) { return r(t); }, dt, n);
    return curve;
}

inline RenewalCurve renewal(const ServiceLaw& law, double t_max, double dt, RenewalMode mode) {
    if (mode == RenewalMode::closed) {
        if (!law.constant_drift() && !law.degenerate())
            throw constraint_error("renewal: closed mode requires constant drift");
        return renewal(law, t_max, dt);
    }
    if (!(t_max > 0) || !(dt > 0) || !(dt <= t_max))
        throw constraint_error("renewal: requires 0 < dt <= t_max");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
    RenewalCurve curve;
    curve.mode = RenewalMode::numeric;
    const RenewalNumeric r(law);
    curve.grid = GridFunction::sample([&r](double t) { return r(t); }, dt, n);
    return curve;
}

}  // namespace mginf
