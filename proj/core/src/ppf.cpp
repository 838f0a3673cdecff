#include "emdsel/ppf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace emdsel {

LossSamples::LossSamples(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("insufficient samples: need at least 2 losses, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("invalid loss sample at index " + std::to_string(i));
        }
    }
}

EmpiricalPpf::EmpiricalPpf(std::size_t resolution, std::vector<double> q_values)
    : resolution_(resolution), q_(std::move(q_values)) {
    if (resolution_ < 2) throw std::invalid_argument("PPF resolution must be >= 2");
    if (q_.size() != resolution_ + 1) {
        throw std::invalid_argument("PPF needs resolution+1 grid values");
    }
    for (std::size_t j = 0; j + 1 < q_.size(); ++j) {
        if (!(q_[j] <= q_[j + 1])) throw std::invalid_argument("PPF values must be non-decreasing");
    }
}

double EmpiricalPpf::operator()(double phi) const noexcept {
    if (phi <= 0.0) return q_.front();
    if (phi >= 1.0) return q_.back();
    const double u = phi * static_cast<double>(resolution_);
    const auto j = static_cast<std::size_t>(u);
    if (j >= resolution_) return q_.back();
    const double frac = u - static_cast<double>(j);
    return q_[j] + frac * (q_[j + 1] - q_[j]);
}

EmpiricalPpf build_empirical_ppf(const LossSamples& losses, std::size_t resolution) {
    if (resolution < 2) throw std::invalid_argument("PPF resolution must be >= 2");
    std::vector<double> sorted = losses.values();
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = sorted.size();
    const double denom = static_cast<double>(n) + 1.0;  // Phi_i = i/(L+1), i = 1..L

    std::vector<double> grid(resolution + 1);
    std::size_t i = 0;  // left sample index of the current segment, 0-based
    for (std::size_t j = 0; j <= resolution; ++j) {
        const double phi = static_cast<double>(j) / static_cast<double>(resolution);
        if (phi <= 1.0 / denom) {
            grid[j] = sorted.front();
            continue;
        }
        if (phi >= static_cast<double>(n) / denom) {
            grid[j] = sorted.back();
            continue;
        }
        while (static_cast<double>(i + 2) / denom < phi && i + 2 < n) ++i;
        const double phi_lo = static_cast<double>(i + 1) / denom;
        const double frac = (phi - phi_lo) * denom;
        grid[j] = sorted[i] + frac * (sorted[i + 1] - sorted[i]);
    }
    // Resampling a monotone interpolant stays monotone; enforce against FP dust.
    for (std::size_t j = 1; j <= resolution; ++j) grid[j] = std::max(grid[j], grid[j - 1]);
    return EmpiricalPpf(resolution, std::move(grid));
}

double risk(std::span<const double> v) noexcept {
    const std::size_t k = v.size() - 1;
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j < k; ++j) sum += v[j];
    return sum / static_cast<double>(k);
}

double risk(const EmpiricalPpf& ppf) noexcept { return risk(std::span<const double>(ppf.q_values())); }

double empirical_cdf_value(const LossSamples& losses, double q) noexcept {
    std::size_t count = 0;
    for (double v : losses.values()) count += (v <= q);
    return static_cast<double>(count) / static_cast<double>(losses.count());
}

}  // namespace emdsel
