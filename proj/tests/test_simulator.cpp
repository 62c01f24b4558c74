#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <mginf/busy_period.hpp>
#include <mginf/busy_cycle.hpp>
#include <mginf/simulator.hpp>

#include "helpers.hpp"

using namespace mginf;
using test_util::canonical;
using test_util::check_close;
using test_util::law_const;

namespace {

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double se_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double acc = 0;
    for (double x : xs) acc += (x - m) * (x - m);
    const auto n = static_cast<double>(xs.size());
    return std::sqrt(acc / (n - 1) / n);
}

}  // namespace

TEST_CASE("simulation is bit-identical for a fixed seed") {
    SimConfig config;
    config.law = canonical();
    config.seed = 7;
    config.n_cycles = 500;
    const SimResult a = run_busy_cycles(config);
    const SimResult b = run_busy_cycles(config);
    CHECK(a.seed_echo == 7);
    CHECK(a.busy_samples == b.busy_samples);
    CHECK(a.cycle_samples == b.cycle_samples);
    const SimResult c = [&] {
        SimConfig other = config;
        other.seed = 8;
        return run_busy_cycles(other);
    }();
    CHECK(a.busy_samples != c.busy_samples);
}

TEST_CASE("cycles dominate their busy periods pairwise") {
    SimConfig config;
    config.law = law_const(0.7, 1.3, 0.2);
    config.seed = 5;
    config.n_cycles = 2000;
    const SimResult r = run_busy_cycles(config);
    REQUIRE(r.busy_samples.size() == 2000);
    REQUIRE(r.cycle_samples.size() == 2000);
    for (std::size_t i = 0; i < r.busy_samples.size(); ++i) {
        CHECK(r.cycle_samples[i] >= r.busy_samples[i]);
        CHECK(r.busy_samples[i] >= 0.0);
    }
}

TEST_CASE("empirical busy-period statistics match the closed forms") {
    const ServiceLaw law = canonical();
    const BusyPeriodLaw bp(law);
    SimConfig config;
    config.law = law;
    config.seed = 3;
    config.n_cycles = 30000;
    const SimResult r = run_busy_cycles(config);
    const auto n = static_cast<double>(r.busy_samples.size());

    std::size_t zeros = 0;
    for (double b : r.busy_samples)
        if (b == 0) ++zeros;
    const double a0 = law.atom();
    const double sigma = std::sqrt(a0 * (1 - a0) / n);
    check_close(static_cast<double>(zeros) / n, a0, 3 * sigma);

    check_close(mean_of(r.busy_samples), std::expm1(1.0), 3 * se_of(r.busy_samples));
    check_close(mean_of(r.cycle_samples), std::expm1(1.0) + 1.0, 3 * se_of(r.cycle_samples));

    const double dkw = std::sqrt(std::log(200.0) / (2.0 * n));
    CHECK(ks_distance(EmpiricalCdf(r.busy_samples), [&bp](double t) { return bp.cdf_closed(t); }) < dkw);
    const BusyCycleLaw bc(law);
    CHECK(ks_distance(EmpiricalCdf(r.cycle_samples), [&bc](double t) { return bc.cdf_closed(t); }) < dkw);
}

TEST_CASE("sample halves are exchangeable") {
    SimConfig config;
    config.law = canonical();
    config.seed = 12;
    config.n_cycles = 20000;
    const SimResult r = run_busy_cycles(config);
    const std::size_t half = r.busy_samples.size() / 2;
    const std::vector<double> first(r.busy_samples.begin(), r.busy_samples.begin() + half);
    const std::vector<double> second(r.busy_samples.begin() + half, r.busy_samples.end());
    const double pooled = std::sqrt(se_of(first) * se_of(first) + se_of(second) * se_of(second));
    check_close(mean_of(first), mean_of(second), 4 * pooled);
}

TEST_CASE("renewal counts start at one and track the renewal function") {
    const ServiceLaw law = canonical();
    SimConfig config;
    config.law = law;
    config.seed = 11;
    config.n_replications = 100;
    config.renewal_horizon = 10.0;
    config.start_mode = StartMode::arrival_at_zero;
    const std::vector<double> times{0.0, 1.0, 2.0, 5.0, 10.0};
    const SimResult r = run_renewal_counts(config, times);
    REQUIRE(r.renewal_times == times);
    REQUIRE(r.renewal_counts.size() == 100);

    for (const auto& rep : r.renewal_counts) CHECK(rep[0] == 1);

    for (std::size_t j = 1; j < times.size(); ++j) {
        std::vector<double> counts;
        counts.reserve(r.renewal_counts.size());
        for (const auto& rep : r.renewal_counts) counts.push_back(rep[j]);
        const double expected = renewal_closed(law, times[j]);
        check_close(mean_of(counts), expected, 3 * se_of(counts));
    }
}

TEST_CASE("renewal counting requires an arrival at time zero") {
    SimConfig config;
    config.law = canonical();
    config.start_mode = StartMode::empty_at_zero;
    CHECK_THROWS_AS(run_renewal_counts(config), constraint_error);
}

TEST_CASE("degenerate service times produce zero-length busy periods") {
    const ServiceLaw law = law_const(1.0, 1.0, -1.0);
    SimConfig config;
    config.law = law;
    config.seed = 21;
    config.n_cycles = 5000;
    const SimResult r = run_busy_cycles(config);
    for (double b : r.busy_samples) CHECK(b == 0.0);
    check_close(mean_of(r.cycle_samples), 1.0, 3 * se_of(r.cycle_samples));

    SimConfig rc = config;
    rc.start_mode = StartMode::arrival_at_zero;
    rc.n_replications = 200;
    rc.renewal_horizon = 5.0;
    const std::vector<double> times{2.0};
    const SimResult counts = run_renewal_counts(rc, times);
    std::vector<double> at2;
    for (const auto& rep : counts.renewal_counts) at2.push_back(rep[0]);
    check_close(mean_of(at2), 3.0, 3 * se_of(at2));  // 1 + lambda t renewals on average
}

TEST_CASE("upper band edge removes the atom entirely") {
    const ServiceLaw law = law_const(1.0, 1.0, 1.0 / std::expm1(1.0));
    SimConfig config;
    config.law = law;
    config.seed = 17;
    config.n_cycles = 10000;
    const SimResult r = run_busy_cycles(config);
    std::size_t zeros = 0;
    for (double b : r.busy_samples)
        if (b == 0) ++zeros;
    CHECK(zeros == 0);
    check_close(mean_of(r.busy_samples), std::expm1(1.0), 3 * se_of(r.busy_samples));
}

TEST_CASE("empirical cdf and KS distance handle atoms at zero") {
    const EmpiricalCdf zeros(std::vector<double>{0.0, 0.0, 0.0});
    CHECK(zeros.n() == 3);
    CHECK(zeros(0.0) == 1.0);
    CHECK(zeros(-1.0) == 0.0);
    check_close(ks_distance(zeros, [](double) { return 1.0; }), 0.0, 1e-15);

    const EmpiricalCdf one_zero(std::vector<double>{0.0});
    check_close(ks_distance(one_zero, [](double t) { return -std::expm1(-t); }), 1.0, 1e-15);

    const EmpiricalCdf mixed(std::vector<double>{0.0, 1.0, 1.0, 2.0});
    CHECK(mixed(0.5) == 0.25);
    CHECK(mixed(1.0) == 0.75);
    CHECK(mixed(2.5) == 1.0);
}
