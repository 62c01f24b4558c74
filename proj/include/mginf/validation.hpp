#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "busy_cycle.hpp"
#include "busy_period.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "service_law.hpp"
#include "simulator.hpp"
#include "tolerance.hpp"

namespace mginf {

enum class Budget { quick, full };

struct CheckRow {
    std::string name;
    std::string kind;  // analytic | numeric | monte-carlo
    double lhs = 0;
    double rhs = 0;
    double tolerance = 0;
    bool pass = false;
};

// A site where the printed source formula and the value it must take
// disagree; both readings are reported, neither silently discarded.
struct PaperFlag {
    std::string site;
    double printed_value = 0;
    double computed_value = 0;
    std::string note;
};

struct ValidationReport {
    std::vector<CheckRow> checks;  // sorted by name
    QueueParams params_echo;
    std::uint64_t seed_echo = 0;
    Budget budget = Budget::quick;
    std::vector<PaperFlag> paper_flags;
    bool overall_pass = false;
};

// Default uniform step for CDF grids: keeps (lambda+eta)·dt at or below 0.01
// so trapezoid convolution error stays under the 1e−3 target.
inline double default_grid_step(const ServiceLaw& law) {
    const double scale = std::max(law.lambda(), law.lambda() + law.drift().max_value());
    return 0.01 / scale;
}

namespace detail {

inline void add_check(std::vector<CheckRow>& rows, std::string name, std::string kind, double lhs, double rhs,
                      double tol) {
    const bool pass = std::isfinite(lhs) && std::isfinite(rhs) && std::abs(lhs - rhs) <= tol;
    rows.push_back({std::move(name), std::move(kind), lhs, rhs, tol, pass});
}

// s ∫₀^∞ e^{−st} F(t) dt for a CDF sampled on a grid, with an exponential
// model for the unsampled tail (decay rate fitted to the last grid decade).
inline double grid_cdf_transform(const GridFunction& f, double s) {
    double acc = 0;
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        acc += w * std::exp(-s * f.t(k)) * f.values[k];
    }
    acc *= s * f.dt;
    const double t_max = f.t_max();
    double tail = std::exp(-s * t_max);
    const double def = 1.0 - f.values.back();
    if (def > 1e-12) {
        const auto back = static_cast<std::size_t>(static_cast<double>(n - 1) * 0.9);
        const double def0 = 1.0 - f.values[back];
        if (def0 > def) {
            const double rate = std::log(def0 / def) / (t_max - f.t(back));
            tail -= s * def * std::exp(-s * t_max) / (s + rate);
        }
    }
    return acc + tail;
}

inline QueueParams reparameterized(const ServiceLaw& law, double p) {
    QueueParams q;
    q.lambda = law.lambda();
    q.rho = law.rho();
    q.p = p;
    if (law.constant_drift()) {
        q.beta = ConstantBeta{law.drift().value(0) * (1 - p) - law.lambda() * p};
    } else {
        TabulatedBeta tb;
        const auto& ts = law.drift().knot_times();
        const auto& es = law.drift().knot_values();
        for (std::size_t i = 0; i < ts.size(); ++i)
            tb.knots.emplace_back(ts[i], es[i] * (1 - p) - law.lambda() * p);
        q.beta = std::move(tb);
    }
    return q;
}

}  // namespace detail

inline ValidationReport run_validation(const QueueParams& params, Budget budget, std::uint64_t seed) {
    const ServiceLaw law = ServiceLaw::canonicalize(params);
    const BusyPeriodLaw bp(law);
    const BusyCycleLaw bc(law);

    ValidationReport report;
    report.params_echo = params;
    report.seed_echo = seed;
    report.budget = budget;
    auto& rows = report.checks;

    const double lam = law.lambda();
    const double rho = law.rho();
    const double t_hi = 10.0 / lam;
    const bool closed_forms = law.constant_drift() && !law.degenerate();
    const bool has_closed_cdf = law.constant_drift() || law.degenerate();

    // Grids shared by several checks.
    const double dt = default_grid_step(law);
    const Tolerance grid_tol{1e-8, 0.0, 4000};
    const GridFunction bp_grid = bp_cdf_general(law, t_hi, dt, grid_tol).grid;
    const GridFunction bc_grid = bc_cdf_general(law, t_hi, dt, grid_tol).grid;
    auto busy_cdf = [&](double t) { return has_closed_cdf ? bp.cdf_closed(t) : bp_grid.interpolate(t); };
    auto cycle_cdf = [&](double t) { return has_closed_cdf ? bc.cdf_closed(t) : bc_grid.interpolate(t); };

    // --- service-law structure ----------------------------------------------
    {
        double worst = 0;
        for (int k = 1; k <= 100; ++k) worst = std::max(worst, std::abs(law.riccati_residual(k * t_hi / 100)));
        detail::add_check(rows, "riccati_residual_max", "numeric", worst, 0.0,
                          law.constant_drift() ? 1e-6 : 1e-4);
    }
    if (!law.degenerate()) {
        const double mean =
            integrate_semi_infinite([&law](double t) { return law.survival(t); }, tight_tolerance());
        detail::add_check(rows, "mean_is_alpha", "numeric", mean, law.alpha(), 1e-6);
    }
    {
        double worst = 0;  // most negative forward increment
        double prev = law.cdf(0.0);
        for (int k = 1; k <= 200; ++k) {
            const double g = law.cdf(k * t_hi / 200);
            worst = std::min(worst, g - prev);
            prev = g;
        }
        detail::add_check(rows, "cdf_monotone_grid", "numeric", -worst, 0.0, 1e-12);
    }
    detail::add_check(rows, "atom_identity", "analytic", bp_grid.values[0], law.atom(), 1e-9);
    if (closed_forms) {
        const double eta = law.eta();
        const double cap = eta > 0 ? 0.95 * std::log1p(lam / eta) : std::max(2.0 * rho, 2.0);
        SplitMix64 rng(seed + 424243);
        std::array<double, 4> rhos{};
        while (true) {
            for (auto& r : rhos) r = cap * (0.05 + 0.9 * rng.uniform01());
            std::sort(rhos.begin(), rhos.end());
            double gap = cap;
            for (int i = 0; i < 3; ++i) gap = std::min(gap, rhos[i + 1] - rhos[i]);
            if (gap > 1e-3 * cap) break;
        }
        const auto cr = cross_ratio(lam, eta, rhos, 1.0 / lam);
        detail::add_check(rows, "cross_ratio_invariance", "analytic", cr.lhs, cr.rhs, 1e-10);
    }
    {
        const std::array<double, 3> ps{0.0, 0.3, 0.7};
        const std::array<double, 5> ts{0.0, 0.5 / lam, 1.0 / lam, 2.0 / lam, 5.0 / lam};
        const double base_pi = bp.transform(lam / rho);
        double worst = 0;
        for (double p : ps) {
            const ServiceLaw lp = ServiceLaw::canonicalize(detail::reparameterized(law, p));
            const BusyPeriodLaw bpp(lp);
            for (double t : ts) worst = std::max(worst, std::abs(lp.cdf(t) - law.cdf(t)));
            worst = std::max(worst, std::abs(bpp.transform(lam / rho) - base_pi));
        }
        detail::add_check(rows, "p_invariance", "analytic", worst, 0.0, 1e-10);
    }

    // --- busy period / busy cycle --------------------------------------------
    if (has_closed_cdf) {
        double worst_b = 0, worst_z = 0;
        for (std::size_t k = 0; k < bp_grid.size(); ++k) {
            worst_b = std::max(worst_b, std::abs(bp_grid.values[k] - bp.cdf_closed(bp_grid.t(k))));
            worst_z = std::max(worst_z, std::abs(bc_grid.values[k] - bc.cdf_closed(bc_grid.t(k))));
        }
        detail::add_check(rows, "bp_series_vs_closed", "numeric", worst_b, 0.0, 1e-3);
        detail::add_check(rows, "bc_series_vs_closed", "numeric", worst_z, 0.0, 1e-3);
    }
    {
        const double s = lam;
        const double zhat = detail::grid_cdf_transform(bc_grid, s);
        const double factored = lam / (lam + s) * detail::grid_cdf_transform(bp_grid, s);
        detail::add_check(rows, "bc_factorization_grid", "numeric", zhat, factored, 1e-3);
    }
    if (!law.degenerate()) {
        const MomentTable table = bp.moments(1);
        const double closed = std::expm1(rho) / lam;
        detail::add_check(rows, "mean_busy_identity", "numeric",
                          std::abs(table.values[0] - closed) / closed, 0.0, 1e-8);
    }
    if (closed_forms) {
        const MomentTable table = bp.moments(5);
        const double w = bp.mixture_weight();
        const double r = bp.mixture_rate();
        double fact = 1;
        double worst = 0;
        for (int n = 1; n <= 5; ++n) {
            fact *= n;
            const double mixture = w * fact / std::pow(r, n);
            worst = std::max(worst, std::abs(table.values[static_cast<std::size_t>(n - 1)] - mixture) / mixture);
        }
        detail::add_check(rows, "moment_recursion_vs_mixture", "numeric", worst, 0.0, 1e-6);
    }
    if (closed_forms) {
        const double pi_closed = bp.transform_closed(lam / rho);
        detail::add_check(rows, "peak_consistency_analytic", "analytic", bp.peak_parametric(), pi_closed, 1e-10);
        detail::add_check(rows, "peak_consistency_numeric", "numeric", bp.transform_numeric(lam / rho), pi_closed,
                          1e-4);
        double worst = 0;
        for (double s : {0.1, 1.0 / law.alpha(), 1.0, 10.0})
            worst = std::max(worst, std::abs(bp.transform_numeric(s) - bp.transform_closed(s)));
        detail::add_check(rows, "transform_consistency", "numeric", worst, 0.0, 1e-8);
    }

    // --- bounds ----------------------------------------------------------------
    {
        // The lower comparison curves share the busy period's (resp. cycle's)
        // law-free mean, so they bound the CDFs only up to t = (e^rho−1)/lambda
        // and provably cross beyond it; the upper curve holds for every t.
        const double t_valid = std::min(t_hi, std::expm1(rho) / lam);
        double worst_b = 0, worst_z = 0;
        for (int k = 0; k <= 200; ++k) {
            const double t_lo = k * t_valid / 200;
            worst_b = std::max(worst_b, bp_lower_bound(lam, rho, t_lo) - busy_cdf(t_lo));
            worst_z = std::max(worst_z, bc_bounds(lam, rho, t_lo).first - cycle_cdf(t_lo));
            const double t = k * t_hi / 200;
            worst_z = std::max(worst_z, cycle_cdf(t) - bc_bounds(lam, rho, t).second);
        }
        detail::add_check(rows, "bounds_ordering_busy", "numeric", std::max(worst_b, 0.0), 0.0, 1e-9);
        detail::add_check(rows, "bounds_ordering_cycle", "numeric", std::max(worst_z, 0.0), 0.0, 1e-9);
    }

    // --- renewal -----------------------------------------------------------------
    {
        const RenewalNumeric rn(law);
        if (has_closed_cdf) {
            double worst = 0;
            for (int k = 0; k <= 20; ++k) {
                const double t = k * t_hi / 20;
                worst = std::max(worst, std::abs(rn(t) - renewal_closed(law, t)));
            }
            detail::add_check(rows, "renewal_closed_vs_numeric", "numeric", worst, 0.0, 1e-6);
        }
        double prev = rn(0.0);
        double monotone_violation = 0, cap_violation = std::abs(prev - 1.0);
        for (int k = 1; k <= 20; ++k) {
            const double t = k * t_hi / 20;
            const double r = rn(t);
            monotone_violation = std::min(monotone_violation, r - prev);
            cap_violation = std::max(cap_violation, r - 1.0 - lam * t);
            prev = r;
        }
        detail::add_check(rows, "renewal_properties", "numeric",
                          std::max(-monotone_violation, std::max(cap_violation, 0.0)), 0.0, 1e-9);
    }

    // --- Monte Carlo (full budget) -------------------------------------------------
    if (budget == Budget::full) {
        const std::size_t n_samples = has_closed_cdf ? 200000 : 20000;
        SimConfig config;
        config.law = law;
        config.seed = seed;
        config.n_cycles = n_samples;
        const SimResult sim = run_busy_cycles(config);

        GridFunction bp_oracle{1.0, {0.0}}, bc_oracle{1.0, {0.0}};
        if (!has_closed_cdf) {
            const double t_oracle = std::max(30.0, 10.0 * rho) / lam;
            bp_oracle = bp_cdf_general(law, t_oracle, dt).grid;
            bc_oracle = bc_cdf_general(law, t_oracle, dt).grid;
        }
        auto busy_model = [&](double t) { return has_closed_cdf ? bp.cdf_closed(t) : bp_oracle.interpolate(t); };
        auto cycle_model = [&](double t) { return has_closed_cdf ? bc.cdf_closed(t) : bc_oracle.interpolate(t); };

        const double dkw = std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(n_samples)));
        const EmpiricalCdf busy_ecdf(sim.busy_samples);
        detail::add_check(rows, "mc_busy_ks", "monte-carlo", ks_distance(busy_ecdf, busy_model), 0.0, dkw);
        const EmpiricalCdf cycle_ecdf(sim.cycle_samples);
        detail::add_check(rows, "mc_cycle_ks", "monte-carlo", ks_distance(cycle_ecdf, cycle_model), 0.0, dkw);

        std::size_t zeros = 0;
        for (double b : sim.busy_samples)
            if (b == 0) ++zeros;
        const double a0 = law.atom();
        const double frac = static_cast<double>(zeros) / static_cast<double>(n_samples);
        const double sigma = std::sqrt(a0 * (1 - a0) / static_cast<double>(n_samples));
        detail::add_check(rows, "mc_atom_fraction", "monte-carlo", frac, a0, 3 * sigma);

        SimConfig rconfig;
        rconfig.law = law;
        rconfig.seed = seed + 100003;
        rconfig.renewal_horizon = t_hi;
        // counts are integer and right-skewed, so a few hundred replications
        // leave the 3-sigma t-statistic with an inflated tail; 2000 keeps the
        // gate at its nominal level for a negligible simulation cost
        rconfig.n_replications = 2000;
        rconfig.start_mode = StartMode::arrival_at_zero;
        const std::vector<double> times{1.0 / lam, 2.0 / lam, 5.0 / lam, 10.0 / lam};
        const SimResult counts = run_renewal_counts(rconfig, times);
        const RenewalNumeric rn(law);
        double worst_z_score = 0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            double mean = 0, m2 = 0;
            const auto reps = static_cast<double>(counts.renewal_counts.size());
            for (const auto& rep : counts.renewal_counts) mean += rep[j];
            mean /= reps;
            for (const auto& rep : counts.renewal_counts) m2 += (rep[j] - mean) * (rep[j] - mean);
            const double se = std::sqrt(m2 / (reps - 1) / reps);
            const double expected = has_closed_cdf ? renewal_closed(law, times[j]) : rn(times[j]);
            const double z = se > 0 ? std::abs(mean - expected) / se : (mean == expected ? 0.0 : 1e30);
            worst_z_score = std::max(worst_z_score, z);
        }
        detail::add_check(rows, "mc_renewal_counts", "monte-carlo", worst_z_score, 0.0, 3.0);
    }

    // --- discrepancy exhibits ---------------------------------------------------
    {
        const double eta_ex = closed_forms ? law.eta() : 0.0;
        const double p_ex = 0.3;
        const double beta_ex = eta_ex * (1 - p_ex) - lam * p_ex;
        const ServiceLaw law_ex = ServiceLaw::canonicalize({lam, rho, p_ex, ConstantBeta{beta_ex}});
        const BusyPeriodLaw bp_ex(law_ex);
        const double alpha = law_ex.alpha();
        const double ex = std::exp(-rho);
        const double t1 = 1.0 / lam;

        {
            const MomentTable table = bp_ex.moments(2);
            const double unsigned_reading = std::exp(rho) * (2.0 / lam + 2.0 * table.values[0]) * table.c_values[1];
            report.paper_flags.push_back(
                {"moment_recursion_leading_factor", unsigned_reading, table.values[1],
                 "the damaged leading sign factor is restored by differentiating the displayed functional "
                 "equation; reading it as +1 for every order turns the second moment negative"});
        }
        {
            const double num_variant = ex * (lam + beta_ex) * (rho + 1) - lam * p_ex + beta_ex;
            const double den = lam * (ex * (rho + alpha * beta_ex) + 1 - p_ex);
            report.paper_flags.push_back(
                {"peak_scalar_numerator_sign", num_variant / den, bp_ex.peak_parametric(),
                 "the two displayed peak formulas disagree on the sign of the beta term in the numerator; the "
                 "minus reading matches the transform route"});
        }
        report.paper_flags.push_back(
            {"renewal_closed_last_term", renewal_printed_form(law_ex, t1), renewal_closed(law_ex, t1),
             "the displayed constant term duplicates the exponential term's coefficient and misses the value "
             "1 at t = 0; the corrected constant restores agreement with the integral route"});
        report.paper_flags.push_back(
            {"band_upper_exponent_reading", lam / std::exp(rho - 1), law.band_upper(),
             "an ambiguous superscript; read as e^rho − 1 so the displayed purely-exponential special case "
             "comes out with the matching rate"});
        {
            const double e1 = std::exp(rho - 1);
            const double printed =
                std::abs(e1 - 1.0) < 1e-12
                    ? 1.0
                    : 1.0 - (e1 * std::exp(-lam * t1 / e1) - std::exp(-lam * t1)) / (e1 - 1.0);
            report.paper_flags.push_back(
                {"cycle_bound_exponent_reading", printed, bc_bounds(lam, rho, t1).first,
                 "same superscript ambiguity inside the cycle lower bound; the e^rho − 1 reading keeps the bound "
                 "coherent at e^rho = 2"});
        }
        {
            const double pi_mod = bp_ex.modified_peak().pi;
            report.paper_flags.push_back(
                {"modified_peak_exponent_reading", pi_mod * rho / std::exp(rho - 1) + 1.0,
                 pi_mod * rho / std::expm1(rho) + 1.0,
                 "same superscript ambiguity in the modified-peak relation; resolved as e^rho − 1 and recorded "
                 "as an assumption"});
        }
        {
            // The lower comparison curves are displayed as holding for every
            // t; sharing the law-free mean forces a crossing. Exhibited at two
            // and a half times the busy-period mean.
            const BusyCycleLaw bc_ex(law_ex);
            const double t_cross = 2.5 * std::expm1(rho) / lam;
            report.paper_flags.push_back(
                {"busy_lower_bound_range", bp_lower_bound(lam, rho, t_cross), bp_ex.cdf_closed(t_cross),
                 "the displayed busy-period lower bound is the exponential with the busy period's own mean; "
                 "equal means force the curves to cross so the bound holds only up to that mean and sits above "
                 "the distribution past it"});
            report.paper_flags.push_back(
                {"cycle_lower_bound_range", bc_bounds(lam, rho, t_cross).first, bc_ex.cdf_closed(t_cross),
                 "the displayed cycle lower bound is the band-top cycle distribution which shares the cycle's "
                 "law-free mean; it bounds the distribution only up to the busy-period mean for the same "
                 "crossing reason"});
        }
        std::sort(report.paper_flags.begin(), report.paper_flags.end(),
                  [](const PaperFlag& a, const PaperFlag& b) { return a.site < b.site; });
    }

    std::sort(rows.begin(), rows.end(), [](const CheckRow& a, const CheckRow& b) { return a.name < b.name; });
    report.overall_pass = true;
    for (const auto& row : rows) report.overall_pass = report.overall_pass && row.pass;
    return report;
}

inline nlohmann::json to_json(const QueueParams& params) {
    nlohmann::json j;
    j["lambda"] = params.lambda;
    j["rho"] = params.rho;
    j["p"] = params.p;
    if (const auto* cb = std::get_if<ConstantBeta>(&params.beta)) {
        j["beta"] = {{"kind", "constant"}, {"value", cb->value}};
    } else {
        const auto& tb = std::get<TabulatedBeta>(params.beta);
        nlohmann::json knots = nlohmann::json::array();
        for (const auto& [t, b] : tb.knots) knots.push_back({t, b});
        j["beta"] = {{"kind", "table"}, {"knots", knots}};
    }
    return j;
}

inline nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["overall_pass"] = report.overall_pass;
    j["budget"] = report.budget == Budget::quick ? "quick" : "full";
    j["seed_echo"] = report.seed_echo;
    j["params_echo"] = to_json(report.params_echo);
    j["checks"] = nlohmann::json::array();
    for (const auto& row : report.checks)
        j["checks"].push_back({{"name", row.name},
                               {"kind", row.kind},
                               {"lhs", row.lhs},
                               {"rhs", row.rhs},
                               {"tolerance", row.tolerance},
                               {"pass", row.pass}});
    j["paper_flags"] = nlohmann::json::array();
    for (const auto& flag : report.paper_flags)
        j["paper_flags"].push_back({{"site", flag.site},
                                    {"printed_value", flag.printed_value},
                                    {"computed_value", flag.computed_value},
                                    {"note", flag.note}});
    return j;
}

}  // namespace mginf
