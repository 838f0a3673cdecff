#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "emdsel/ppf.hpp"
#include "emdsel/rng.hpp"

namespace emdsel {

struct BetaParams {
    double alpha = 0.0;
    double beta = 0.0;
};

struct HbClamps {
    double r_min = 1e-8;
    double r_max = 1e8;
    double v_min = 1e-12;
};

// Pointwise discrepancy |q_synth - q_mixed| on the same grid as its parents.
class DiscrepancyFn {
  public:
    DiscrepancyFn(std::size_t resolution, std::vector<double> values);

    std::size_t resolution() const noexcept { return resolution_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator()(double phi) const noexcept;

  private:
    std::size_t resolution_;
    std::vector<double> values_;
};

// Parameters of the hierarchical beta process: centre PPF, discrepancy,
// sensitivity c, dyadic refinement depth, and solver clamps.
struct HbParams {
    EmpiricalPpf q_star;
    DiscrepancyFn delta_emd;
    double c = 0.5;
    int depth = 8;
    HbClamps clamps{};

    void validate() const;
};

// One sampled monotone PPF: values at the dyadic points k*2^-N, k = 0..2^N.
struct PpfRealization {
    int depth = 0;
    std::vector<double> dyadic_values;  // size 2^depth + 1, non-decreasing
};

// Raised when the damped Newton + bisection fallback cannot satisfy both
// residuals; carries the offending (r, v) and the last residuals.
struct SolverFailure : std::runtime_error {
    SolverFailure(double r, double v, double res_r, double res_v);
    double r, v, residual_r, residual_v;
};

// Raised when endpoint rejection sampling exhausts its retry budget.
struct DegenerateEndpoints : std::runtime_error {
    explicit DegenerateEndpoints(double c);
};

// Solves  psi(alpha) - psi(beta) = ln r,  ln(psi_1(alpha) + psi_1(beta)) = ln v
// for the beta parameters of one refinement.  Deterministic; both residuals of
// the returned pair are below 1e-10.  Caller applies clamps first.
BetaParams solve_alpha_beta(double r, double v);

// Splits [q_lo, q_hi] at x1 ~ Beta(alpha, beta) with (alpha, beta) solved from
// the clamped (r, v); returns the midpoint value q_lo + x1*(q_hi - q_lo).
double refine_increment(double q_lo, double q_hi, double r, double v, RngStream& rng,
                        const HbClamps& clamps = HbClamps{});

// Sampler for one parameter set.  Construction precomputes the per-node
// (alpha, beta) table (the (r, v) of a dyadic node depend only on q_star,
// delta_emd and c, not on the realization), so sampling many realizations
// amortizes the solver cost.
class HbProcess {
  public:
    explicit HbProcess(HbParams params);

    // Pure function of (params, seed).  Each dyadic node's draw is keyed by
    // (seed, level, index): continuing a realization to a deeper level leaves
    // all shallower dyadic values bit-identical, and realizations can be
    // evaluated in parallel in any order.
    PpfRealization sample(std::uint64_t seed) const;

    const HbParams& params() const noexcept { return params_; }

  private:
    HbParams params_;
    std::vector<BetaParams> node_beta_;  // heap order: level n, odd multiples of 2^-n
    double q0_mean_ = 0.0, q1_mean_ = 0.0;
    double q0_std_ = 0.0, q1_std_ = 0.0;
};

// Convenience one-shot wrapper around HbProcess.
PpfRealization sample_realization(const HbParams& params, std::uint64_t seed);

}  // namespace emdsel
