#include "emdsel/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emdsel {

namespace {

void check_positive(double x, const char* fn) {
    if (!(x > 0.0)) {
        throw std::domain_error(std::string(fn) + ": domain error, requires x > 0, got x=" + std::to_string(x));
    }
}

// B_{2k} for k = 1..10.
constexpr double kBernoulli[] = {
    1.0 / 6.0,    -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,      5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0,
};

constexpr double kShiftLimit = 6.0;

}  // namespace

double digamma(double x) {
    check_positive(x, "digamma");
    double result = 0.0;
    while (x < kShiftLimit) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
    const double w = 1.0 / (x * x);
    double series = 0.0;
    double wk = w;
    for (int k = 0; k < 10; ++k) {
        series += kBernoulli[k] / (2.0 * (k + 1)) * wk;
        wk *= w;
    }
    return result + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    check_positive(x, "trigamma");
    double result = 0.0;
    while (x < kShiftLimit) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    // psi_1(x) ~ 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
    const double w = 1.0 / (x * x);
    double series = 0.0;
    double wk = w / x;
    for (int k = 0; k < 10; ++k) {
        series += kBernoulli[k] * wk;
        wk *= w;
    }
    return result + 1.0 / x + 0.5 * w + series;
}

double tetragamma(double x) {
    check_positive(x, "tetragamma");
    double result = 0.0;
    while (x < kShiftLimit) {
        result -= 2.0 / (x * x * x);  // psi_2(x) = psi_2(x+1) - 2/x^3
        x += 1.0;
    }
    // psi_2(x) ~ -1/x^2 - 1/x^3 - sum_k B_{2k} (2k+1) / x^{2k+2}
    const double w = 1.0 / (x * x);
    double series = 0.0;
    double wk = w * w;
    for (int k = 0; k < 8; ++k) {
        series += kBernoulli[k] * (2.0 * (k + 1) + 1.0) * wk;
        wk *= w;
    }
    return result - w - w / x - series;
}

double trigamma_inverse(double y) {
    if (!(y > 0.0)) throw std::domain_error("trigamma_inverse: requires y > 0");
    // Asymptotic starting point: psi_1(x) ~ 1/x^2 (small x), ~ 1/x (large x).
    double x = (y > 1.0) ? 1.0 / std::sqrt(y) : 1.0 / y + 0.5;
    for (int it = 0; it < 60; ++it) {
        const double f = trigamma(x) - y;
        const double df = tetragamma(x);
        double step = f / df;
        // psi_1 is decreasing and convex; keep the iterate positive.
        if (x - step <= 0.0) step = x * 0.5;
        x -= step;
        if (std::fabs(step) <= 1e-14 * x) break;
    }
    return x;
}

}  // namespace emdsel
