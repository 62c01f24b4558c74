#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "root_finding.hpp"
#include "series.hpp"
#include "tolerance.hpp"

namespace mginf {

struct ConstantBeta {
    double value = 0;
};

// Piecewise-linear beta(t) through (t, beta) knots, constant past the last
// knot; knots strictly increasing in t, starting at t = 0.
struct TabulatedBeta {
    std::vector<std::pair<double, double>> knots;
};

using BetaSpec = std::variant<ConstantBeta, TabulatedBeta>;

struct QueueParams {
    double lambda = 1;
    double rho = 1;
    double p = 0;
    BetaSpec beta = ConstantBeta{0};
};

// Canonical drift eta(t) = (lambda*p + beta(t))/(1 − p), either constant or
// piecewise linear with constant extrapolation. The cumulative integral
// H(t) = ∫₀ᵗ eta is piecewise quadratic and evaluated exactly.
class DriftProfile {
public:
    static DriftProfile constant(double eta) {
        DriftProfile d;
        d.eta0_ = eta;
        return d;
    }

    static DriftProfile tabulated(std::vector<double> ts, std::vector<double> etas) {
        if (ts.empty() || ts.size() != etas.size())
            throw constraint_error("drift table: needs matching, nonempty time and value columns");
        if (ts.front() != 0) throw constraint_error("drift table: first knot must be at t = 0");
        for (std::size_t i = 1; i < ts.size(); ++i)
            if (!(ts[i] > ts[i - 1])) throw constraint_error("drift table: knot times must be strictly increasing");
        DriftProfile d;
        d.eta0_ = etas.front();
        d.ts_ = std::move(ts);
        d.etas_ = std::move(etas);
        d.H_.assign(d.ts_.size(), 0.0);
        for (std::size_t i = 1; i < d.ts_.size(); ++i) {
            const double w = d.ts_[i] - d.ts_[i - 1];
            d.H_[i] = d.H_[i - 1] + 0.5 * w * (d.etas_[i - 1] + d.etas_[i]);
        }
        return d;
    }

    bool is_constant() const { return ts_.empty(); }

    double value(double t) const {
        if (is_constant()) return eta0_;
        if (t >= ts_.back()) return etas_.back();
        if (t <= 0) return etas_.front();
        const auto seg = segment(t);
        const double w = (t - ts_[seg]) / (ts_[seg + 1] - ts_[seg]);
        return etas_[seg] * (1 - w) + etas_[seg + 1] * w;
    }

    double cumulative(double t) const {
        if (t <= 0) return 0;
        if (is_constant()) return eta0_ * t;
        if (t >= ts_.back()) return H_.back() + etas_.back() * (t - ts_.back());
        const auto seg = segment(t);
        const double d = t - ts_[seg];
        const double slope = (etas_[seg + 1] - etas_[seg]) / (ts_[seg + 1] - ts_[seg]);
        return H_[seg] + etas_[seg] * d + 0.5 * slope * d * d;
    }

    double last_value() const { return is_constant() ? eta0_ : etas_.back(); }

    double max_value() const {
        if (is_constant()) return eta0_;
        double m = etas_.front();
        for (double e : etas_) m = std::max(m, e);
        return m;
    }

    const std::vector<double>& knot_times() const { return ts_; }
    const std::vector<double>& knot_values() const { return etas_; }

private:
    std::size_t segment(double t) const {
        const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        return static_cast<std::size_t>(it - ts_.begin()) - 1;
    }

    double eta0_ = 0;
    std::vector<double> ts_, etas_, H_;
};

// One member of the service-time distribution collection, reduced to its
// canonical parameters (lambda, rho, eta). The original (p, beta) surface is
// retained for formula cross-checks only; every evaluation depends on the
// canonical triple alone.
class ServiceLaw {
public:
    static ServiceLaw canonicalize(const QueueParams& q) {
        if (!(q.lambda > 0)) throw constraint_error("canonicalize: lambda must be positive");
        if (!(q.rho > 0)) throw constraint_error("canonicalize: rho must be positive");
        if (!(q.p >= 0 && q.p < 1)) throw constraint_error("canonicalize: p must lie in [0, 1)");

        ServiceLaw law;
        law.lambda_ = q.lambda;
        law.rho_ = q.rho;
        law.p_ = q.p;
        law.beta_spec_ = q.beta;

        if (const auto* cb = std::get_if<ConstantBeta>(&q.beta)) {
            law.drift_ = DriftProfile::constant((q.lambda * q.p + cb->value) / (1 - q.p));
        } else {
            const auto& tb = std::get<TabulatedBeta>(q.beta);
            std::vector<double> ts, etas;
            ts.reserve(tb.knots.size());
            etas.reserve(tb.knots.size());
            for (const auto& [t, b] : tb.knots) {
                ts.push_back(t);
                etas.push_back((q.lambda * q.p + b) / (1 - q.p));
            }
            law.drift_ = DriftProfile::tabulated(std::move(ts), std::move(etas));
        }

        law.check_band();
        law.degenerate_ = (law.lambda_ + law.drift_.last_value() <= 0);
        law.init_numeric_kernel();
        return law;
    }

    double lambda() const { return lambda_; }
    double rho() const { return rho_; }
    double alpha() const { return rho_ / lambda_; }
    double p() const { return p_; }

    double beta(double t) const {
        if (const auto* cb = std::get_if<ConstantBeta>(&beta_spec_)) {
            (void)t;
            return cb->value;
        }
        // invert the canonical map: beta = eta(t)(1 − p) − lambda p
        return drift_.value(t) * (1 - p_) - lambda_ * p_;
    }

    const BetaSpec& beta_spec() const { return beta_spec_; }
    const DriftProfile& drift() const { return drift_; }
    bool constant_drift() const { return drift_.is_constant(); }

    double eta() const {
        if (!constant_drift()) throw constraint_error("eta(): drift is time-varying; use drift()");
        return drift_.value(0);
    }

    bool degenerate() const { return degenerate_; }
    double band_lower() const { return -lambda_; }
    double band_upper() const { return lambda_ / std::expm1(rho_); }

    // E(t) = exp(−lambda·t − ∫₀ᵗ eta): the kernel whose normalization fixes
    // the atom and whose Laplace transform drives the busy-period transform.
    double survival_kernel(double t) const { return std::exp(-lambda_ * t - drift_.cumulative(t)); }

    // ∫₀^∞ E; +inf for the degenerate law.
    double kernel_denominator() const {
        if (degenerate_) return std::numeric_limits<double>::infinity();
        return kernel_den_;
    }

    double kernel_cumulative(double t) const { return (*cum_kernel_)(t); }

    double atom() const {
        if (degenerate_) return 1.0;
        const double q = -std::expm1(-rho_);
        if (constant_drift()) return 1.0 - q * (lambda_ + drift_.value(0)) / lambda_;
        return 1.0 - q / (lambda_ * kernel_den_);
    }

    // Atom via the numeric kernel normalization (cross-check path, any law).
    double atom_numeric() const {
        if (degenerate_) return 1.0;
        return 1.0 - (-std::expm1(-rho_)) / (lambda_ * kernel_den_);
    }

    double cdf(double t) const {
        if (degenerate_) return t >= 0 ? 1.0 : 0.0;
        if (t < 0) return 0.0;
        if (constant_drift()) return cdf_closed(t);
        return cdf_numeric(t);
    }

    // Quadrature route available for every law; for constant drift this is an
    // independent numeric path used by cross-checks.
    double cdf_numeric(double t) const {
        if (degenerate_) return t >= 0 ? 1.0 : 0.0;
        if (t < 0) return 0.0;
        if (t == 0) return atom_numeric();
        const double E = survival_kernel(t);
        if (E == 0) return 1.0;
        const double q = -std::expm1(-rho_);
        const double den = kernel_den_ - q * kernel_cumulative(t);
        return 1.0 - q * E / (lambda_ * den);
    }

    // Survival 1 − G(t) evaluated directly, so tail values keep full relative
    // precision instead of cancelling against 1.
    double survival(double t) const {
        if (degenerate_) return t >= 0 ? 0.0 : 1.0;
        if (t < 0) return 1.0;
        if (constant_drift()) {
            const double c = lambda_ + drift_.value(0);
            const double q = -std::expm1(-rho_);
            const double x = std::exp(-c * t);
            const double u = std::exp(-rho_) + q * x;
            return q * c * x / (lambda_ * u);
        }
        const double E = survival_kernel(t);
        if (E == 0) return 0.0;
        const double q = -std::expm1(-rho_);
        return q * E / (lambda_ * (kernel_den_ - q * kernel_cumulative(t)));
    }

    // Density of the absolutely continuous part, t > 0. Closed form for
    // constant drift; central finite differences of the CDF otherwise.
    double pdf(double t) const {
        if (!(t > 0)) throw constraint_error("pdf: density defined for t > 0 only; query atom() at 0");
        if (degenerate_) return 0.0;
        if (constant_drift()) {
            const double c = lambda_ + drift_.value(0);
            const double q = -std::expm1(-rho_);
            const double x = std::exp(-c * t);
            const double u = std::exp(-rho_) + q * x;
            return q * c * c * std::exp(-rho_) * x / (lambda_ * u * u);
        }
        const double h = std::min(6e-6 * (1 + t), 0.5 * t);
        return (cdf_numeric(t + h) - cdf_numeric(t - h)) / (2 * h);
    }

    // Smallest t ≥ 0 with G(t) ≥ u; exact atom handling.
    double inverse_cdf(double u) const {
        if (!(u >= 0 && u < 1)) throw constraint_error("inverse_cdf: u must lie in [0, 1)");
        if (degenerate_) return 0.0;
        if (u <= atom()) return 0.0;
        if (constant_drift()) {
            const double c = lambda_ + drift_.value(0);
            const double arg = lambda_ * (1 - u) / (std::expm1(rho_) * (lambda_ * u + drift_.value(0)));
            return std::max(0.0, -std::log(arg) / c);
        }
        double hi = 1.0 / lambda_;
        int guard = 0;
        while (cdf_numeric(hi) < u) {
            hi *= 2;
            if (++guard > 80) throw numeric_error("inverse_cdf: bracket search failed", hi, 0.0);
        }
        return invert_monotone([this](double t) { return cdf_numeric(t); }, u, 0.0, hi,
                               Tolerance{1e-12, 1e-10, 60});
    }

    enum class MomentMethod { quadrature, series, discretized };

    struct MomentResult {
        double value = 0;
        int truncation = 0;                              // series: terms used; discretized: m
        std::vector<std::pair<int, double>> refinements;  // discretized: (m, E_m) sequence
    };

    MomentResult moment(int n, MomentMethod method, int m = 2048) const {
        if (n < 1) throw constraint_error("moment: order must be at least 1");
        if (degenerate_) return {0.0, 0, {}};
        switch (method) {
            case MomentMethod::quadrature:
                return moment_quadrature(n);
            case MomentMethod::series:
                return moment_series(n);
            case MomentMethod::discretized:
                return moment_discretized(n, m);
        }
        throw constraint_error("moment: unknown method");
    }

    // Two-sided bracket for E[Tⁿ]; constant drift strictly above the lower
    // band endpoint only.
    std::pair<double, double> moment_bounds(int n) const {
        if (n < 1) throw constraint_error("moment_bounds: order must be at least 1");
        if (!constant_drift())
            throw constraint_error("moment_bounds: requires constant drift");
        if (degenerate_) throw constraint_error("moment_bounds: undefined at the degenerate endpoint");
        const double c = lambda_ + drift_.value(0);
        const double q = -std::expm1(-rho_);
        double fact = 1;
        for (int k = 2; k <= n; ++k) fact *= k;
        const double scale = fact / (lambda_ * std::pow(c, n - 1));
        return {q * std::exp(-rho_) * scale, std::expm1(rho_) * scale};
    }

    // Defect of dG/dt + lambda·G² + (eta − lambda)·G − eta, using pdf() for
    // the derivative.
    double riccati_residual(double t) const {
        if (!(t > 0)) throw constraint_error("riccati_residual: defined for t > 0");
        const double G = cdf(t);
        const double e = drift_.value(t);
        const double g = degenerate_ ? 0.0 : pdf(t);
        return g + lambda_ * G * G + (e - lambda_) * G - e;
    }

private:
    double cdf_closed(double t) const {
        const double c = lambda_ + drift_.value(0);
        const double q = -std::expm1(-rho_);
        const double x = std::exp(-c * t);
        const double u = std::exp(-rho_) + q * x;
        return 1.0 - q * c * x / (lambda_ * u);
    }

    MomentResult moment_quadrature(int n) const {
        const double value = integrate_semi_infinite(
            [this, n](double t) { return t == 0 ? 0.0 : std::pow(t, n) * pdf(t); }, tight_tolerance());
        return {value, 0, {}};
    }

    MomentResult moment_series(int n) const {
        if (!constant_drift())
            throw constraint_error("moment (series): requires constant drift");
        static const double ln2 = std::log(2.0);
        if (!(rho_ < ln2))
            throw constraint_error("moment (series): requires rho < ln 2");
        const double c = lambda_ + drift_.value(0);
        const double y = -std::expm1(rho_);  // 1 − e^rho, in (−1, 0)
        double fact = 1;
        for (int k = 2; k <= n; ++k) fact *= k;

        // truncation index from the two displayed error conditions, then a
        // runtime ratio-witness tail check on top
        const double eps = 1e-12;
        const double m1 = 1.0 / c - 1.0;
        const double m2 = std::log(eps * std::exp(rho_) * lambda_ / (fact * c)) / std::log(std::expm1(rho_)) - 1.0;
        const int m_required = std::max({1, static_cast<int>(std::ceil(m1)), static_cast<int>(std::ceil(m2))});

        double sum = 0;
        double powy = 1;
        int k = 0;
        double prev_abs = 0;
        while (true) {
            ++k;
            powy *= y;
            const double term = powy / std::pow(static_cast<double>(k), n);
            sum += term;
            const double a = std::abs(term);
            if (k >= m_required && k > 1) {
                const double qr = a / prev_abs;
                if (qr < 1 && a * qr / (1 - qr) <= eps) break;
            }
            prev_abs = a;
            if (k > 5000000) throw numeric_error("moment (series): tail did not converge", sum, a);
        }
        const double value = -(c / lambda_) * fact / std::pow(c, n) * sum;
        return {value, k, {}};
    }

    MomentResult moment_discretized(int n, int m) const {
        if (m < 1) throw constraint_error("moment (discretized): refinement level must be positive");
        MomentResult r;
        for (int level = m / 4; level <= m; level *= 2) {
            if (level < 1) continue;
            r.refinements.emplace_back(level, discretized_sum(n, level));
            if (level == m) break;
        }
        if (r.refinements.empty() || r.refinements.back().first != m)
            r.refinements.emplace_back(m, discretized_sum(n, m));
        r.value = r.refinements.back().second;
        r.truncation = m;
        return r;
    }

    double discretized_sum(int n, int m) const {
        double sum = 0;
        double g_prev = cdf(0.0);
        const double step = 1.0 / m;
        double t = 0;
        int k = 0;
        while (true) {
            ++k;
            t = static_cast<double>(k) * step;
            const double g = cdf(t);
            sum += std::pow(t, n) * (g - g_prev);
            g_prev = g;
            const double tail = std::pow(t, n) * (1 - g);
            if (t >= 2 * alpha() && tail < 1e-16 * (1 + std::abs(sum))) break;
            if (k > 100000000) throw numeric_error("moment (discretized): tail did not converge", sum, tail);
        }
        return sum;
    }

    void check_band() {
        const double hi = lambda_ / std::expm1(rho_);
        auto fail = [&](double t, double mean) {
            std::ostringstream os;
            os << "constraint band violated at t = " << t << ": mean drift " << mean << " outside ["
               << -lambda_ << ", " << hi << "]";
            throw constraint_error(os.str());
        };
        if (drift_.is_constant()) {
            // same relative slack as the tabulated path, so reparameterizing a
            // law sitting exactly on a band endpoint survives rounding
            const double e = drift_.value(0);
            if (e < -lambda_ - 1e-12 * lambda_ || e > hi + 1e-12 * lambda_) fail(0.0, e);
            return;
        }
        const auto& ts = drift_.knot_times();
        // knots plus a 10x refinement of every segment; the mean of a
        // piecewise-linear drift is piecewise quadratic, so interior extrema
        // are possible
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            for (int j = 1; j <= 10; ++j) {
                const double t = ts[i] + (ts[i + 1] - ts[i]) * j / 10.0;
                const double mean = drift_.cumulative(t) / t;
                if (mean < -lambda_ - 1e-12 * lambda_ || mean > hi + 1e-12 * lambda_) fail(t, mean);
            }
        }
        // past the last knot the mean tends monotonically to the final level
        const double e_last = drift_.last_value();
        if (e_last < -lambda_ || e_last > hi) fail(std::numeric_limits<double>::infinity(), e_last);
        const double t_end = ts.back() > 0 ? 2 * ts.back() : 1.0;
        for (int j = 1; j <= 10; ++j) {
            const double t = ts.back() + (t_end - ts.back()) * j / 10.0;
            const double mean = drift_.cumulative(t) / t;
            if (mean < -lambda_ - 1e-12 * lambda_ || mean > hi + 1e-12 * lambda_) fail(t, mean);
        }
    }

    void init_numeric_kernel() {
        if (degenerate_) {
            kernel_den_ = std::numeric_limits<double>::infinity();
            cum_kernel_ = std::make_shared<CumulativeIntegral>([](double) { return 0.0; }, 1.0);
            return;
        }
        const DriftProfile drift = drift_;
        const double lambda = lambda_;
        auto kernel = [drift, lambda](double t) { return std::exp(-lambda * t - drift.cumulative(t)); };
        kernel_den_ = integrate_semi_infinite(kernel, tight_tolerance());
        const double h = std::clamp(0.25 / lambda_, 1e-3, 10.0);
        cum_kernel_ = std::make_shared<CumulativeIntegral>(kernel, h, tight_tolerance());
    }

    double lambda_ = 1;
    double rho_ = 1;
    double p_ = 0;
    BetaSpec beta_spec_ = ConstantBeta{0};
    DriftProfile drift_ = DriftProfile::constant(0);
    bool degenerate_ = false;
    double kernel_den_ = 0;
    std::shared_ptr<CumulativeIntegral> cum_kernel_;
};

struct CrossRatioResult {
    double lhs = 0;
    double rhs = 0;
};

// Cross-ratio identity of four collection members sharing (lambda, eta):
// the G_i(t) cross-ratio equals the e^{−rho_i} cross-ratio at every t.
inline CrossRatioResult cross_ratio(double lambda, double eta, const std::array<double, 4>& rhos, double t) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (rhos[i] == rhos[j]) throw constraint_error("cross_ratio: rho values must be distinct");
    std::array<double, 4> G{}, x{};
    for (int i = 0; i < 4; ++i) {
        const auto law = ServiceLaw::canonicalize({lambda, rhos[i], 0.0, ConstantBeta{eta}});
        G[i] = law.cdf(t);
        x[i] = std::exp(-rhos[i]);
    }
    const double den_g = (G[3] - G[0]) * (G[2] - G[1]);
    const double den_x = (x[3] - x[0]) * (x[2] - x[1]);
    if (den_g == 0 || den_x == 0) throw constraint_error("cross_ratio: degenerate configuration (zero denominator)");
    return {(G[3] - G[1]) * (G[2] - G[0]) / den_g, (x[3] - x[1]) * (x[2] - x[0]) / den_x};
}

// e^{−lambda ∫₀ᵗ (1 − G)}: probability the system is empty at t when a busy
// period starts at 0. For constant drift the integral has the exact form
// −ln(e^{−rho} + (1−e^{−rho})e^{−ct})/lambda with c = lambda + eta, so the
// evaluation is closed (and noise-free for downstream quadrature); otherwise
// it falls back to a checkpointed numeric integral of the survival function.
class EmptyProbability {
public:
    explicit EmptyProbability(const ServiceLaw& law, Tolerance tol = tight_tolerance())
        : lambda_(law.lambda()), degenerate_(law.degenerate()) {
        if (degenerate_) return;
        if (law.constant_drift()) {
            rho_ = law.rho();
            c_ = law.lambda() + law.eta();
            closed_ = true;
            return;
        }
        cum_.emplace([law](double t) { return law.survival(t); },
                     std::clamp(0.25 / law.lambda(), 1e-3, 10.0), tol);
    }

    double operator()(double t) const {
        if (degenerate_) return 1.0;
        if (closed_) return std::exp(-rho_) - std::expm1(-rho_) * std::exp(-c_ * t);
        return std::exp(-lambda_ * (*cum_)(t));
    }

    // ∫₀ᵗ (1 − G), exposed for reuse by renewal integration.
    double survival_integral(double t) const {
        if (degenerate_) return 0.0;
        if (closed_) return -std::log((*this)(t)) / lambda_;
        return (*cum_)(t);
    }

private:
    double lambda_;
    double rho_ = 0.0;
    double c_ = 0.0;
    bool degenerate_ = false;
    bool closed_ = false;
    std::optional<CumulativeIntegral> cum_;
};

}  // namespace mginf
