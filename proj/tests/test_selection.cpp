#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "emdsel/emd.hpp"
#include "emdsel/selection.hpp"

using namespace emdsel;

namespace {

// The four-candidate comparison table used as the worked example, with risks
// ordered consistently with the off-diagonal probabilities.
ComparisonMatrix example_matrix() {
    ComparisonMatrix m;
    m.model_ids = {"A", "B", "C", "D"};
    m.bemd = {{0.500, 0.483, 0.846, 0.821},
              {0.517, 0.500, 0.972, 0.940},
              {0.154, 0.028, 0.500, 0.463},
              {0.179, 0.060, 0.537, 0.500}};
    m.empirical_risks = {1.1, 1.0, 2.1, 2.0};
    return m;
}

}  // namespace

TEST_CASE("example table at eps=0.95 rejects exactly C") {
    const RejectionOutcome out = reject(example_matrix(), 0.95);
    REQUIRE(out.rejected == std::vector<std::string>{"C"});
}

TEST_CASE("all-0.5 matrix rejects nothing") {
    ComparisonMatrix m;
    m.model_ids = {"x", "y"};
    m.bemd = {{0.5, 0.5}, {0.5, 0.5}};
    m.empirical_risks = {1.0, 2.0};
    CHECK(reject(m, 0.95).rejected.empty());
}

TEST_CASE("rejection needs both conditions") {
    ComparisonMatrix m;
    m.model_ids = {"a", "b"};
    m.bemd = {{0.5, 0.99}, {0.01, 0.5}};
    m.empirical_risks = {3.0, 1.0};  // a has higher risk: the bemd evidence conflicts
    CHECK(reject(m, 0.95).rejected.empty());
}

TEST_CASE("threshold must exceed 0.5") {
    CHECK_THROWS_WITH(reject(example_matrix(), 0.5),
                      Catch::Matchers::ContainsSubstring("threshold must exceed 0.5"));
    CHECK_THROWS(reject(example_matrix(), 0.2));
    CHECK_THROWS(reject(example_matrix(), 1.2));
}

TEST_CASE("the minimal-risk model always survives") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + gen() % 5;
        ComparisonMatrix m;
        std::vector<std::pair<double, std::size_t>> byrisk;
        for (std::size_t i = 0; i < n; ++i) {
            m.model_ids.push_back("m" + std::to_string(i));
            m.empirical_risks.push_back(unif(gen) * 10.0);
            byrisk.emplace_back(m.empirical_risks.back(), i);
        }
        m.bemd.assign(n, std::vector<double>(n, 0.5));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // favour the lower-risk model so the matrix stays coherent
                const double p = 0.5 + 0.5 * unif(gen);
                const bool i_better = m.empirical_risks[i] < m.empirical_risks[j];
                m.bemd[i][j] = i_better ? p : 1.0 - p;
                m.bemd[j][i] = 1.0 - m.bemd[i][j];
            }
        }
        const RejectionOutcome out = reject(m, 0.5 + 0.5 * unif(gen));
        CHECK(out.rejected.size() < n);
        const std::size_t best = std::min_element(byrisk.begin(), byrisk.end())->second;
        CHECK(std::find(out.rejected.begin(), out.rejected.end(), m.model_ids[best]) ==
              out.rejected.end());
    }
}

TEST_CASE("transitive shortcut bounds") {
    const auto bound = transitive_shortcut(0.99, 0.99, 0.95);
    REQUIRE(bound.has_value());
    CHECK(*bound == Catch::Approx(0.9801));
    CHECK(*bound > 0.95);

    CHECK_FALSE(transitive_shortcut(0.9, 0.6, 0.9).has_value());  // 0.6 < sqrt(0.9)

    CHECK_THROWS_WITH(transitive_shortcut(0.9, 0.9, 0.38),
                      Catch::Matchers::ContainsSubstring("transitivity domain"));
}

TEST_CASE("Monte-Carlo dice transitivity over independent triples") {
    // For independent risk samples with both legs above 1/phi, the chained
    // probability never undercuts the product bound by more than noise.
    std::mt19937_64 gen(43);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double phi_inv = 2.0 / (1.0 + std::sqrt(5.0));
    int qualifying = 0;
    int tested = 0;
    while (qualifying < 1000 && tested < 20000) {
        ++tested;
        const std::size_t m = 64;
        std::vector<double> a(m), b(m), c(m);
        const double mu_b = std::uniform_real_distribution<>(0.5, 2.0)(gen);
        const double mu_c = mu_b + std::uniform_real_distribution<>(0.5, 2.0)(gen);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = noise(gen);
            b[i] = mu_b + noise(gen);
            c[i] = mu_c + noise(gen);
        }
        const double b_ab = bemd(a, b), b_bc = bemd(b, c), b_ac = bemd(a, c);
        if (b_ab <= phi_inv || b_bc <= phi_inv) continue;
        ++qualifying;
        REQUIRE(b_ac >= b_ab * b_bc - 0.02);
    }
    REQUIRE(qualifying == 1000);
}

TEST_CASE("logit round-trips through the logistic") {
    for (double p = 0.01; p <= 0.99; p += 0.007) {
        CHECK(log10_logistic(log10_logit(p)) == Catch::Approx(p).margin(1e-12));
    }
    CHECK(log10_logit(0.5) == 0.0);
    CHECK(std::isinf(log10_logit(1.0)));
    CHECK(std::isinf(log10_logit(0.0)));
    CHECK(format_criterion_value(log10_logit(1.0)) == "+inf");
    CHECK(format_criterion_value(log10_logit(0.0)) == "-inf");
}

TEST_CASE("classical criteria vanish for identical models") {
    const std::vector<double> losses{0.3, 1.7, 0.9, 2.2};
    const ClassicalCriteria c = classical_criteria(losses, losses, 0.5);
    CHECK(c.log10_bl == 0.0);
    CHECK(c.delta_aic == 0.0);
    CHECK(c.log10_br_bar == 0.0);
    CHECK(c.log10_bemd_bar == 0.0);
}

TEST_CASE("delta AIC is 2 ln10 times the decimal likelihood ratio") {
    const std::vector<double> a{0.5, 1.0, 0.25};
    const std::vector<double> b{0.75, 1.5, 0.5};
    const ClassicalCriteria c = classical_criteria(a, b, 0.8);
    CHECK(c.delta_aic == Catch::Approx(2.0 * std::log(10.0) * c.log10_bl).epsilon(1e-12));
    CHECK(c.log10_bl > 0.0);  // a has smaller total loss
    CHECK(c.log10_bemd_bar == Catch::Approx(std::log10(0.8 / 0.2)));
}

TEST_CASE("comparison matrix CSV mirrors the table layout and round-trips") {
    const ComparisonMatrix m = example_matrix();
    const std::string csv = comparison_matrix_to_csv(m);
    CHECK(csv.starts_with("model,A,B,C,D\n"));
    const ComparisonMatrix back = comparison_matrix_from_csv(csv);
    CHECK(back.model_ids == m.model_ids);
    CHECK(back.bemd == m.bemd);
    CHECK(comparison_matrix_to_csv(back) == csv);  // byte-identical rewrite
}
