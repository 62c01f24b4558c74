#pragma once

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include <mginf/service_law.hpp>

namespace test_util {

inline void check_close(double actual, double expected, double tol) {
    CAPTURE(actual, expected, tol);
    CHECK(std::abs(actual - expected) <= tol);
}

inline void check_rel(double actual, double expected, double rel) {
    CAPTURE(actual, expected, rel);
    REQUIRE(expected != 0.0);
    CHECK(std::abs(actual - expected) <= rel * std::abs(expected));
}

// Constant canonical drift eta expressed through the (p, beta) surface.
inline mginf::ServiceLaw law_const(double lambda, double rho, double eta, double p = 0.0) {
    return mginf::ServiceLaw::canonicalize({lambda, rho, p, mginf::ConstantBeta{eta * (1 - p) - lambda * p}});
}

inline mginf::ServiceLaw canonical() { return law_const(1.0, 1.0, 0.0); }

inline mginf::ServiceLaw tab_law1() {
    mginf::TabulatedBeta tb;
    tb.knots = {{0.0, -0.2}, {1.0, 0.1}, {3.0, 0.05}};
    return mginf::ServiceLaw::canonicalize({1.0, 1.0, 0.0, tb});
}

inline mginf::ServiceLaw tab_law2() {
    mginf::TabulatedBeta tb;
    tb.knots = {{0.0, 0.3}, {2.0, -0.1}};
    return mginf::ServiceLaw::canonicalize({1.0, 0.8, 0.0, tb});
}

}  // namespace test_util
