#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "emdsel/special_functions.hpp"

using namespace emdsel;

namespace {

// Independent series oracle for the Euler-Mascheroni constant:
// gamma = H_n - ln n - 1/(2n) + 1/(12n^2) - 1/(120n^4) + O(n^-6).
double euler_gamma_series() {
    const int n = 4000;
    double h = 0.0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    const double dn = n;
    return h - std::log(dn) - 1.0 / (2.0 * dn) + 1.0 / (12.0 * dn * dn) -
           1.0 / (120.0 * dn * dn * dn * dn);
}

// Basel series with tail correction: sum 1/k^2 = pi^2/6; the truncated tail is
// ~ 1/n - 1/(2n^2) + 1/(6n^3).
double basel_series() {
    const int n = 20000;
    double s = 0.0;
    for (int k = n; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k);
    const double dn = n;
    return s + 1.0 / dn - 1.0 / (2.0 * dn * dn) + 1.0 / (6.0 * dn * dn * dn);
}

#include "specfun_table.inc"

}  // namespace

TEST_CASE("digamma matches independent oracles at small arguments") {
    const double gamma = euler_gamma_series();
    CHECK(digamma(1.0) == Catch::Approx(-gamma).epsilon(1e-13));
    CHECK(digamma(2.0) == Catch::Approx(digamma(1.0) + 1.0).margin(1e-14));
    CHECK(digamma(0.5) == Catch::Approx(-gamma - 2.0 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("trigamma matches independent oracles at small arguments") {
    const double pi2_6 = basel_series();
    CHECK(trigamma(1.0) == Catch::Approx(pi2_6).epsilon(1e-12));
    CHECK(trigamma(2.0) == Catch::Approx(pi2_6 - 1.0).epsilon(1e-12));
    CHECK(trigamma(0.5) == Catch::Approx(3.0 * pi2_6).epsilon(1e-12));  // pi^2/2
}

TEST_CASE("digamma/trigamma recurrences hold across the domain") {
    for (double x : {1e-3, 0.02, 0.3, 1.7, 5.9, 6.1, 47.0, 1.3e4, 9.7e5}) {
        CAPTURE(x);
        CHECK(digamma(x + 1.0) == Catch::Approx(digamma(x) + 1.0 / x).margin(1e-11 * (1 + std::fabs(digamma(x)))));
        CHECK(trigamma(x + 1.0) == Catch::Approx(trigamma(x) - 1.0 / (x * x)).epsilon(1e-10));
        CHECK(trigamma(x) > 0.0);
    }
}

TEST_CASE("reference table spanning [1e-3, 1e6]") {
    for (const auto& ref : kSpecFunTable) {
        CAPTURE(ref.x);
        CHECK(std::fabs(digamma(ref.x) - ref.digamma) <=
              1e-12 * std::max(1.0, std::fabs(ref.digamma)));
        CHECK(std::fabs(trigamma(ref.x) - ref.trigamma) <= 1e-12 * std::fabs(ref.trigamma));
    }
}

TEST_CASE("tetragamma is accurate enough for Jacobians") {
    // Central differences of trigamma as the oracle.
    for (double x : {0.05, 0.7, 3.0, 12.0, 400.0}) {
        const double h = x * 1e-6;
        const double fd = (trigamma(x + h) - trigamma(x - h)) / (2.0 * h);
        CHECK(tetragamma(x) == Catch::Approx(fd).epsilon(1e-7));
        CHECK(tetragamma(x) < 0.0);
    }
}

TEST_CASE("trigamma_inverse is a two-sided inverse") {
    for (double y : {1e-10, 1e-4, 0.3, 1.6449, 100.0, 1e8}) {
        CAPTURE(y);
        CHECK(trigamma(trigamma_inverse(y)) == Catch::Approx(y).epsilon(1e-12));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_WITH(digamma(0.0), Catch::Matchers::ContainsSubstring("domain error"));
    CHECK_THROWS_WITH(digamma(-1.5), Catch::Matchers::ContainsSubstring("domain error"));
    CHECK_THROWS_WITH(trigamma(0.0), Catch::Matchers::ContainsSubstring("domain error"));
    CHECK_THROWS_WITH(trigamma(-3.0), Catch::Matchers::ContainsSubstring("domain error"));
}
