#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include <mginf/busy_period.hpp>
#include <mginf/validation.hpp>

#include "helpers.hpp"

using namespace mginf;
using test_util::canonical;
using test_util::check_close;
using test_util::check_rel;
using test_util::law_const;
using test_util::tab_law1;

TEST_CASE("canonical transform and cdf reproduce frozen values") {
    const BusyPeriodLaw bp(canonical());
    check_close(bp.transform_closed(1.0), 0.53788284273999024, 1e-14);
    check_close(bp.transform(0.0), 1.0, 0.0);
    check_close(bp.cdf_closed(1.0), 0.56244575248823614, 1e-14);
    check_close(bp.cdf_closed(0.0), bp.atom(), 1e-15);
    CHECK(bp.cdf_closed(-1.0) == 0.0);
}

TEST_CASE("numeric transform route agrees with the closed form") {
    const BusyPeriodLaw bp(canonical());
    for (double s : {0.1, 1.0, 10.0}) check_close(bp.transform_numeric(s), bp.transform_closed(s), 1e-9);
    const BusyPeriodLaw bp2(law_const(0.7, 1.3, 0.2));
    for (double s : {0.1, 1.0 / bp2.service().alpha(), 1.0, 10.0})
        check_close(bp2.transform_numeric(s), bp2.transform_closed(s), 1e-8);
}

TEST_CASE("moment recursion reproduces frozen values") {
    const BusyPeriodLaw bp(canonical());
    const MomentTable t = bp.moments(5);
    check_rel(t.values[0], 1.7182818284590452, 1e-10);
    check_rel(t.values[1], 9.34154854094321, 1e-9);
    check_rel(t.values[2], 76.178884945542105, 1e-9);
    check_rel(t.values[3], 828.30271463895771, 1e-8);
    check_rel(t.values[4], 11257.801088331884, 1e-8);
    check_close(t.c_values[0], 0.63212055882855768, 1e-10);

    const BusyPeriodLaw bp2(law_const(0.7, 1.3, 0.2));
    const MomentTable t2 = bp2.moments(4);
    check_rel(t2.values[0], 3.8132809537417775, 1e-10);
    check_rel(t2.values[1], 31.093464658356972, 1e-9);
    check_rel(t2.values[2], 380.30382085215326, 1e-9);
    check_rel(t2.values[3], 6201.9890779363201, 1e-8);
}

TEST_CASE("moment recursion matches the exponential mixture closed form") {
    for (const ServiceLaw& law : {canonical(), law_const(1.0, 0.5, 0.3), law_const(1.0, 2.0, -0.5)}) {
        const BusyPeriodLaw bp(law);
        const MomentTable t = bp.moments(5);
        const double w = bp.mixture_weight();
        const double r = bp.mixture_rate();
        double fact = 1;
        for (int n = 1; n <= 5; ++n) {
            fact *= n;
            check_rel(t.values[static_cast<std::size_t>(n - 1)], w * fact / std::pow(r, n), 1e-8);
        }
    }
}

TEST_CASE("mean busy period is law-independent") {
    for (const ServiceLaw& law :
         {canonical(), law_const(2.0, 0.4, 0.1), law_const(0.5, 2.5, -0.3), tab_law1(), test_util::tab_law2()}) {
        const BusyPeriodLaw bp(law);
        check_rel(bp.moments(1).values[0], std::expm1(law.rho()) / law.lambda(), 1e-8);
    }
}

TEST_CASE("tabulated-law transform reproduces frozen values") {
    const BusyPeriodLaw bp(tab_law1());
    check_close(bp.transform_numeric(1.0), 0.52651613735574652, 1e-9);
    check_close(bp.atom(), 0.38026178790372143, 1e-9);
    CHECK_THROWS_AS(bp.cdf_closed(1.0), constraint_error);
}

TEST_CASE("series-grid cdf converges to the closed form") {
    const ServiceLaw law = canonical();
    const BusyPeriodLaw bp(law);
    const GridReport report = bp_cdf_general(law, 10.0, 0.01);
    double sup = 0;
    for (std::size_t k = 0; k < report.grid.size(); ++k)
        sup = std::max(sup, std::abs(report.grid.values[k] - bp.cdf_closed(report.grid.t(k))));
    CHECK(sup < 1e-3);
    check_close(report.grid.values[0], law.atom(), 1e-9);
    CHECK(report.terms_used > 1);
    CHECK(report.max_adjustment < 1e-9);
    for (std::size_t k = 1; k < report.grid.size(); ++k)
        CHECK(report.grid.values[k] >= report.grid.values[k - 1]);
}

TEST_CASE("a flat drift table behaves exactly like the constant law") {
    TabulatedBeta tb;
    tb.knots = {{0.0, 0.0}, {1.0, 0.0}};
    const ServiceLaw tab = ServiceLaw::canonicalize({1.0, 1.0, 0.0, tb});
    const BusyPeriodLaw closed(canonical());
    const GridFunction grid = bp_cdf_general(tab, 6.0, 0.01).grid;
    double sup = 0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        sup = std::max(sup, std::abs(grid.values[k] - closed.cdf_closed(grid.t(k))));
    CHECK(sup < 1e-4);
}

TEST_CASE("grid request validation") {
    const ServiceLaw law = canonical();
    CHECK_THROWS_AS(bp_cdf_general(law, 1.0, 0.0), constraint_error);
    CHECK_THROWS_AS(bp_cdf_general(law, 1.0, 2.0), constraint_error);
}

TEST_CASE("peak parameter routes agree") {
    const BusyPeriodLaw bp(canonical());
    const PeakPair peak = bp.peak();
    check_close(peak.pi, 0.53788284273999024, 1e-13);
    check_close(peak.qi, 1.7488465132048918, 1e-12);
    check_close(bp.peak_parametric(), peak.pi, 1e-13);
    check_close(bp.peak_numeric().pi, peak.pi, 1e-6);

    check_close(BusyPeriodLaw(law_const(1.0, 1.0, -0.5)).peak().pi, 0.73304360524544541, 1e-13);
    check_close(BusyPeriodLaw(law_const(0.7, 1.3, 0.2)).peak().pi, 0.35739947202760914, 1e-13);
}

TEST_CASE("modified peak uses the cycle transform at the same abscissa") {
    const BusyPeriodLaw bp(canonical());
    const PeakPair mod = bp.modified_peak();
    check_close(mod.pi, 0.26894142136999512, 1e-13);
    check_close(mod.qi, 1.1565176427496657, 1e-12);
}

TEST_CASE("lower bound holds up to the mean and crosses beyond it") {
    check_close(bp_lower_bound(1.0, 1.0, 1.0), 0.44120729523725308, 1e-14);
    // valid on [0, E[B]] for every law: the band-top law minimizes the CDF there
    for (const ServiceLaw& law : {canonical(), law_const(2.0, 0.4, 0.1), law_const(0.5, 2.5, -0.3)}) {
        const BusyPeriodLaw bp(law);
        const double t_valid = std::expm1(law.rho()) / law.lambda();
        for (int k = 0; k <= 100; ++k) {
            const double t = k * t_valid / 100;
            CHECK(bp_lower_bound(law.lambda(), law.rho(), t) <= bp.cdf_closed(t) + 1e-9);
        }
    }
    // both curves share the mean (e^rho−1)/lambda, so they must cross: past the
    // mean the comparison curve overtakes the distribution
    const BusyPeriodLaw bp(canonical());
    CHECK(bp_lower_bound(1.0, 1.0, 4.3) > bp.cdf_closed(4.3) + 0.04);
}

TEST_CASE("upper band edge turns the busy period purely exponential") {
    const ServiceLaw law = law_const(1.0, 1.0, 1.0 / std::expm1(1.0));
    const BusyPeriodLaw bp(law);
    check_close(law.atom(), 0.0, 1e-14);
    check_close(bp.cdf_closed(1.0), 0.44120729523725308, 1e-13);
    for (double t : {0.5, 1.0, 3.0}) check_close(bp.cdf_closed(t), bp_lower_bound(1.0, 1.0, t), 1e-12);
    check_close(bp.peak().pi, 0.36787944117144232, 1e-12);
}

TEST_CASE("degenerate law yields an instantaneous busy period") {
    const ServiceLaw law = law_const(1.0, 1.0, -1.0);
    const BusyPeriodLaw bp(law);
    CHECK(bp.cdf_closed(0.0) == 1.0);
    CHECK(bp.cdf_closed(2.0) == 1.0);
    const MomentTable t = bp.moments(3);
    CHECK(t.values[0] == 0.0);
    CHECK(t.values[1] == 0.0);
    CHECK(t.values[2] == 0.0);
    CHECK(bp.peak_numeric().pi == 1.0);
    const GridFunction grid = bp_cdf_general(law, 1.0, 0.1).grid;
    for (double v : grid.values) CHECK(v == 1.0);
}
