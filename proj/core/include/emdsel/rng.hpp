#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace emdsel {

// SplitMix64 finalizer.  All randomness in the library flows through keyed
// streams built on this, so results are bit-reproducible across runs and
// across worker counts.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Order-sensitive hash of a key tuple, e.g. (seed, level, index).
constexpr std::uint64_t key_hash(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (std::uint64_t p : parts) h = mix64(h ^ p);
    return h;
}

// Counter-mode SplitMix64 stream.  Satisfies UniformRandomBitGenerator but the
// distributions below are hand-rolled so draw sequences are pinned by us, not
// by the standard library implementation.
class RngStream {
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0, 1); never returns an endpoint, so
    // log(u) is always finite.
    double uniform_open01() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
    }

    // Standard normal via Box-Muller (no rejection: fixed draw count).
    double normal() noexcept {
        const double u1 = uniform_open01();
        const double u2 = uniform_open01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  private:
    std::uint64_t state_;
};

// log of a Gamma(shape, 1) draw.  Marsaglia-Tsang for shape >= 1, with the
// log-space boost for shape < 1 so tiny shapes (alpha ~ 1/sqrt(v), v huge) do
// not underflow.
double log_gamma_draw(RngStream& rng, double shape);

// Beta(alpha, beta) draw as sigmoid(logX - logY) of two log-gamma draws.
// Valid over the full clamped parameter domain, including alpha, beta << 1.
double draw_beta(RngStream& rng, double alpha, double beta);

// Poisson draw: product-of-uniforms inversion for small means, PTRS rejection
// for large ones.  Throws std::domain_error("gain too large") when the mean
// exceeds the sampler's integer-exact range.
double draw_poisson(RngStream& rng, double mean);

}  // namespace emdsel
