#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "emdsel/hb_process.hpp"
#include "emdsel/special_functions.hpp"

using namespace emdsel;

namespace {

std::vector<double> linspace_values(double lo, double hi) {
    std::vector<double> v(1025);
    for (int j = 0; j <= 1024; ++j) v[j] = lo + (hi - lo) * j / 1024.0;
    return v;
}

HbParams smooth_params(double c) {
    std::vector<double> q(1025), d(1025);
    for (int j = 0; j <= 1024; ++j) {
        const double phi = j / 1024.0;
        q[j] = phi * phi * 3.0 - 1.0;
        d[j] = 0.05 + 0.1 * phi * (1.0 - phi);
    }
    return {EmpiricalPpf(1024, q), DiscrepancyFn(1024, d), c, 8};
}

}  // namespace

TEST_CASE("solver recovers the symmetric unit solution") {
    const BetaParams p = solve_alpha_beta(1.0, std::numbers::pi * std::numbers::pi / 3.0);
    CHECK(std::fabs(p.alpha - 1.0) < 1e-9);
    CHECK(std::fabs(p.beta - 1.0) < 1e-9);
    CHECK(std::fabs(digamma(p.alpha) - digamma(p.beta)) < 1e-10);
    CHECK(std::fabs(std::log(trigamma(p.alpha) + trigamma(p.beta)) -
                    std::log(std::numbers::pi * std::numbers::pi / 3.0)) < 1e-10);
}

TEST_CASE("r=1 gives alpha == beta by symmetry") {
    for (double v : {1e-9, 1e-3, 0.7, 42.0, 1e5}) {
        CAPTURE(v);
        const BetaParams p = solve_alpha_beta(1.0, v);
        CHECK(p.alpha == Catch::Approx(p.beta).epsilon(1e-12));
    }
}

TEST_CASE("solved parameters satisfy both equations") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> lr(std::log(1e-8), std::log(1e8));
    std::uniform_real_distribution<double> lv(std::log(1e-12), std::log(1e8));
    for (int i = 0; i < 500; ++i) {
        const double r = std::exp(lr(gen));
        const double v = std::exp(lv(gen));
        CAPTURE(r, v);
        const BetaParams p = solve_alpha_beta(r, v);
        CHECK(std::fabs(digamma(p.alpha) - digamma(p.beta) - std::log(r)) < 1e-10);
        CHECK(std::fabs(std::log(trigamma(p.alpha) + trigamma(p.beta)) - std::log(v)) < 1e-10);
    }
}

TEST_CASE("solver centre matches the Aitchison form") {
    // e^psi(alpha) / e^psi(beta) = r within 1e-9 relative.
    for (auto [r, v] : {std::pair{2.0, 0.5}, {0.2, 3.0}, {17.0, 1e-4}, {1e-4, 20.0}}) {
        CAPTURE(r, v);
        const BetaParams p = solve_alpha_beta(r, v);
        CHECK(std::exp(digamma(p.alpha) - digamma(p.beta)) == Catch::Approx(r).epsilon(1e-9));
        CHECK(trigamma(p.alpha) + trigamma(p.beta) == Catch::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("solver rejects invalid input") {
    CHECK_THROWS(solve_alpha_beta(0.0, 1.0));
    CHECK_THROWS(solve_alpha_beta(1.0, -2.0));
    CHECK_THROWS(solve_alpha_beta(std::nan(""), 1.0));
}

TEST_CASE("refine_increment stays inside the parent increment") {
    RngStream rng(99);
    CHECK(refine_increment(2.5, 2.5, 1.0, 0.3, rng) == 2.5);
    for (int i = 0; i < 200; ++i) {
        const double mid = refine_increment(-1.0, 3.0, 4.0, 7.0, rng);
        CHECK(mid >= -1.0);
        CHECK(mid <= 3.0);
    }
}

TEST_CASE("symmetric degenerate limit splits at the midpoint") {
    RngStream rng(1);
    for (int i = 0; i < 50; ++i) {
        const double mid = refine_increment(0.0, 1.0, 1.0, 1e-12, rng);
        CHECK(mid == Catch::Approx(0.5).margin(1e-5));
    }
}

TEST_CASE("beta draws satisfy the logistic moment identity") {
    // E[ln(x1/(1-x1))] = psi(alpha) - psi(beta), Var = psi_1(alpha) + psi_1(beta).
    const double r = 3.0, v = 0.8;
    const BetaParams p = solve_alpha_beta(r, v);
    RngStream rng(5);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = draw_beta(rng, p.alpha, p.beta);
        const double logit = std::log(x / (1.0 - x));
        sum += logit;
        sum2 += logit * logit;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double expected_mean = digamma(p.alpha) - digamma(p.beta);
    const double se = std::sqrt(var / n);
    CHECK(std::fabs(mean - expected_mean) < 4.0 * se);
    CHECK(var == Catch::Approx(trigamma(p.alpha) + trigamma(p.beta)).epsilon(0.05));
}

TEST_CASE("c=0 realizations collapse onto the centre") {
    HbParams params = smooth_params(0.0);
    const HbProcess process(params);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const PpfRealization q = process.sample(seed);
        REQUIRE(q.dyadic_values.size() == 257u);
        const double range = params.q_star(1.0) - params.q_star(0.0);
        for (std::size_t k = 0; k < q.dyadic_values.size(); ++k) {
            const double phi = static_cast<double>(k) / 256.0;
            CHECK(std::fabs(q.dyadic_values[k] - params.q_star(phi)) < 1e-5 * range);
        }
    }
}

TEST_CASE("default refinement depth is 8") {
    CHECK(HbParams{EmpiricalPpf(2, {0.0, 0.5, 1.0}), DiscrepancyFn(2, {0.1, 0.1, 0.1})}.depth == 8);
}

TEST_CASE("realizations are monotone for fuzzed parameters") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<double> q(1025), d(1025);
        double acc = -unif(gen) * 10.0;
        for (int j = 0; j <= 1024; ++j) {
            q[j] = acc;
            acc += unif(gen) * 0.02;
            d[j] = unif(gen) * 2.0;
        }
        const double c = std::exp2(-6.0 + 9.0 * unif(gen));
        const HbProcess process({EmpiricalPpf(1024, q), DiscrepancyFn(1024, d), c, 6});
        for (int s = 0; s < 10; ++s) {
            const PpfRealization real = process.sample(gen());
            for (std::size_t k = 1; k < real.dyadic_values.size(); ++k) {
                REQUIRE(real.dyadic_values[k] >= real.dyadic_values[k - 1]);
            }
        }
    }
}

TEST_CASE("extending the depth keeps shallow dyadic values bit-identical") {
    HbParams p8 = smooth_params(0.7);
    HbParams p9 = smooth_params(0.7);
    p9.depth = 9;
    const HbProcess proc8(p8), proc9(p9);
    for (std::uint64_t seed : {1ull, 77ull, 12345ull}) {
        const PpfRealization a = proc8.sample(seed);
        const PpfRealization b = proc9.sample(seed);
        REQUIRE(b.dyadic_values.size() == 2 * a.dyadic_values.size() - 1);
        for (std::size_t k = 0; k < a.dyadic_values.size(); ++k) {
            REQUIRE(a.dyadic_values[k] == b.dyadic_values[2 * k]);  // bit-exact
        }
    }
}

TEST_CASE("constant centre with zero endpoint spread exhausts the retry budget") {
    // q(0) == q(1) with no endpoint noise can never satisfy q(0) < q(1).
    const HbParams params{EmpiricalPpf(1024, std::vector<double>(1025, 5.0)),
                          DiscrepancyFn(1024, std::vector<double>(1025, 0.0)), 0.25, 4};
    const HbProcess process(params);
    try {
        (void)process.sample(1);
        FAIL("expected DegenerateEndpoints");
    } catch (const DegenerateEndpoints& e) {
        CHECK(std::string(e.what()).find("degenerate endpoints") != std::string::npos);
        CHECK(std::string(e.what()).find("0.25") != std::string::npos);  // names c
    }
}

TEST_CASE("wide endpoint spread still terminates") {
    // The Gaussian endpoint draws keep P(q(0) < q(1)) >= 1/2 whenever the
    // centre is monotone, so huge c only slows acceptance, never blocks it.
    std::vector<double> q = linspace_values(0.0, 1e-9);
    std::vector<double> d(1025, 1.0);
    const HbProcess process({EmpiricalPpf(1024, q), DiscrepancyFn(1024, d), 100.0, 4});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const PpfRealization real = process.sample(seed);
        CHECK(real.dyadic_values.front() < real.dyadic_values.back());
    }
}

TEST_CASE("sampling is a pure function of (params, seed)") {
    const HbParams params = smooth_params(0.5);
    const HbProcess p1(params), p2(params);
    const PpfRealization a = p1.sample(31415);
    const PpfRealization b = p2.sample(31415);
    REQUIRE(a.dyadic_values == b.dyadic_values);
}
