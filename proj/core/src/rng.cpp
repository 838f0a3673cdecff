#include "emdsel/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace emdsel {

namespace {

// Marsaglia-Tsang squeeze for shape >= 1; returns log of the draw.
double log_gamma_draw_ge1(RngStream& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double z, v;
        do {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open01();
        if (u < 1.0 - 0.0331 * z * z * z * z) return std::log(d * v);
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return std::log(d * v);
    }
}

}  // namespace

double log_gamma_draw(RngStream& rng, double shape) {
    if (shape >= 1.0) return log_gamma_draw_ge1(rng, shape);
    // Gamma(a) = Gamma(a+1) * U^(1/a); kept in log space.
    const double boost = std::log(rng.uniform_open01()) / shape;
    return log_gamma_draw_ge1(rng, shape + 1.0) + boost;
}

double draw_beta(RngStream& rng, double alpha, double beta) {
    const double lx = log_gamma_draw(rng, alpha);
    const double ly = log_gamma_draw(rng, beta);
    const double diff = ly - lx;
    // x1 = X / (X + Y) = 1 / (1 + exp(ly - lx))
    if (diff > 745.0) return 0.0;
    if (diff < -745.0) return 1.0;
    return 1.0 / (1.0 + std::exp(diff));
}

double draw_poisson(RngStream& rng, double mean) {
    if (!(mean >= 0.0) || mean > 1e15) throw std::domain_error("gain too large: Poisson mean " + std::to_string(mean));
    if (mean == 0.0) return 0.0;
    if (mean < 30.0) {
        // Inversion by product of uniforms.
        const double limit = std::exp(-mean);
        double prod = rng.uniform_open01();
        double k = 0.0;
        while (prod > limit) {
            prod *= rng.uniform_open01();
            k += 1.0;
        }
        return k;
    }
    // PTRS transformed rejection (Hormann 1993).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.uniform_open01() - 0.5;
        const double v = rng.uniform_open01();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
        if (lhs <= rhs) return k;
    }
}

}  // namespace emdsel
