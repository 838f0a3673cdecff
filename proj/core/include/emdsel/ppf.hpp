#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emdsel {

// Per-sample losses of one model on one dataset.  Validates on construction:
// all values finite, at least two samples.
class LossSamples {
  public:
    explicit LossSamples(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t count() const noexcept { return values_.size(); }

  private:
    std::vector<double> values_;
};

// A monotone quantile function of the loss, stored on the uniform grid
// Phi_j = j/K for j = 0..K.  Evaluation anywhere in [0,1] is by linear
// interpolation.  Plays both the "mixed" and "synthetic" roles.
class EmpiricalPpf {
  public:
    static constexpr std::size_t kDefaultResolution = 1024;

    // q_values.size() must be resolution+1 and non-decreasing.
    EmpiricalPpf(std::size_t resolution, std::vector<double> q_values);

    std::size_t resolution() const noexcept { return resolution_; }
    const std::vector<double>& q_values() const noexcept { return q_; }

    double operator()(double phi) const noexcept;

  private:
    std::size_t resolution_;
    std::vector<double> q_;
};

// Sorts the losses, places the i-th smallest at Phi_i = i/(L+1), extends flat
// beyond Phi_1 and Phi_L, and resamples onto the uniform K+1-point grid.
EmpiricalPpf build_empirical_ppf(const LossSamples& losses,
                                 std::size_t resolution = EmpiricalPpf::kDefaultResolution);

// Trapezoid integral of the interpolated PPF over [0,1]; for values on a
// uniform grid this is the risk functional.
double risk(const EmpiricalPpf& ppf) noexcept;
double risk(std::span<const double> uniform_grid_values) noexcept;

// Fraction of losses <= q (Heaviside convention H(0) = 1).
double empirical_cdf_value(const LossSamples& losses, double q) noexcept;

}  // namespace emdsel
