#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "service_law.hpp"

namespace mginf {

enum class StartMode { empty_at_zero, arrival_at_zero };

struct SimConfig {
    ServiceLaw law;
    std::uint64_t seed = 0;
    std::size_t n_cycles = 1;
    double renewal_horizon = 1.0;
    int n_replications = 1;
    StartMode start_mode = StartMode::empty_at_zero;
};

struct SimResult {
    std::vector<double> busy_samples;
    std::vector<double> cycle_samples;  // cycle_samples[i] = idle + busy_samples[i]
    std::vector<double> renewal_times;
    std::vector<std::vector<int>> renewal_counts;  // [replication][time index]
    std::uint64_t seed_echo = 0;
};

namespace detail {

// One arrival's worth of randomness: the inter-arrival gap is always drawn
// before the arrival's service time, so the draw sequence per stream is
// gap_1, service_1, gap_2, service_2, ...
struct ArrivalStream {
    SplitMix64 rng;
    const ServiceLaw* law;
    double lambda;

    double gap() { return rng.exponential(lambda); }
    double service() { return law->inverse_cdf(rng.uniform01()); }
};

}  // namespace detail

// Collects consecutive (idle, busy) pairs. With infinitely many servers the
// system stays busy exactly while arrivals land strictly before the running
// coverage maximum max(arrival + service); an arrival at or past it finds
// the system empty and starts the next busy period (ties end the period).
inline SimResult run_busy_cycles(const SimConfig& config) {
    if (config.n_cycles < 1) throw constraint_error("run_busy_cycles: n_cycles must be at least 1");
    SimResult result;
    result.seed_echo = config.seed;
    result.busy_samples.reserve(config.n_cycles);
    result.cycle_samples.reserve(config.n_cycles);

    detail::ArrivalStream stream{SplitMix64(config.seed), &config.law, config.law.lambda()};

    double prev_end = 0.0;  // time the previous busy period ended (0 = origin)
    double start = config.start_mode == StartMode::arrival_at_zero ? 0.0 : stream.gap();
    for (std::size_t cycle = 0; cycle < config.n_cycles; ++cycle) {
        const double idle = start - prev_end;
        double coverage = start + stream.service();
        double arrival = start;
        while (true) {
            arrival += stream.gap();
            if (arrival >= coverage) break;
            coverage = std::max(coverage, arrival + stream.service());
        }
        result.busy_samples.push_back(coverage - start);
        result.cycle_samples.push_back(idle + (coverage - start));
        prev_end = coverage;
        start = arrival;  // the terminating arrival begins the next busy period
    }
    return result;
}

// Per replication, counts busy-period beginnings in [0, t] at the given grid
// times; replication k uses seed + k. A busy period begins at time 0.
inline SimResult run_renewal_counts(const SimConfig& config, std::vector<double> times = {}) {
    if (config.n_replications < 1)
        throw constraint_error("run_renewal_counts: n_replications must be at least 1");
    if (!(config.renewal_horizon > 0))
        throw constraint_error("run_renewal_counts: renewal_horizon must be positive");
    if (config.start_mode != StartMode::arrival_at_zero)
        throw constraint_error("run_renewal_counts: requires start_mode = arrival-at-0");

    if (times.empty()) {
        for (int k = 0; k <= 10; ++k) times.push_back(config.renewal_horizon * k / 10.0);
    }
    for (double t : times)
        if (t < 0 || t > config.renewal_horizon)
            throw constraint_error("run_renewal_counts: grid times must lie in [0, horizon]");

    SimResult result;
    result.seed_echo = config.seed;
    result.renewal_times = times;
    result.renewal_counts.reserve(static_cast<std::size_t>(config.n_replications));

    for (int rep = 0; rep < config.n_replications; ++rep) {
        detail::ArrivalStream stream{SplitMix64(config.seed + static_cast<std::uint64_t>(rep)), &config.law,
                                     config.law.lambda()};
        std::vector<double> beginnings{0.0};
        double coverage = stream.service();  // first busy period starts at 0
        double arrival = 0.0;
        while (true) {
            arrival += stream.gap();
            if (arrival > config.renewal_horizon) break;
            if (arrival >= coverage) {
                beginnings.push_back(arrival);
                coverage = arrival + stream.service();
            } else {
                coverage = std::max(coverage, arrival + stream.service());
            }
        }
        std::vector<int> counts;
        counts.reserve(times.size());
        for (double t : times) {
            const auto it = std::upper_bound(beginnings.begin(), beginnings.end(), t);
            counts.push_back(static_cast<int>(it - beginnings.begin()));
        }
        result.renewal_counts.push_back(std::move(counts));
    }
    return result;
}

// Right-continuous empirical distribution of a sample.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) throw constraint_error("EmpiricalCdf: needs at least one sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double t) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    std::size_t n() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

// sup_t |empirical − F| over the sample points, comparing both one-sided
// limits at each positive point; at 0 only the right limit is meaningful
// when F carries an atom there.
template <typename F>
double ks_distance(const EmpiricalCdf& e, F&& model) {
    const auto& xs = e.sorted();
    const double n = static_cast<double>(xs.size());
    double d = 0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
        const double x = xs[i];
        const double fx = model(x);
        const double hi = static_cast<double>(j + 1) / n;
        d = std::max(d, std::abs(hi - fx));
        if (x > 0) {
            const double lo = static_cast<double>(i) / n;
            d = std::max(d, std::abs(lo - fx));
        }
        i = j + 1;
    }
    return d;
}

}  // namespace mginf
