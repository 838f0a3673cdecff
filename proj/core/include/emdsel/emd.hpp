#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emdsel/hb_process.hpp"
#include "emdsel/ppf.hpp"

namespace emdsel {

// A finite multiset of risk values for one model, with provenance.
struct RDistribution {
    std::vector<double> risks;
    double c = 0.0;
    std::uint64_t seed = 0;
    std::size_t sample_count = 0;  // == risks.size()
    bool tolerance_met = true;     // false when M_max was reached first
    double rel_se = 0.0;           // achieved relative standard error of the mean

    void validate() const;
};

struct RDistOptions {
    double rel_se_target = 0.03125;  // 2^-5
    std::size_t m_min = 16;
    std::size_t m_max = 4096;
    std::size_t batch_size = 64;
    int n_threads = 1;  // results are independent of this
};

// Pointwise |q_synth - q_mixed|; requires identical grids.
DiscrepancyFn delta_emd(const EmpiricalPpf& q_mixed, const EmpiricalPpf& q_synth);

// Samples realizations in batches, integrating each with risk(), until the
// relative standard error of the mean risk drops below the target (or M_max is
// reached, which flags the result instead of failing).  Bit-reproducible for a
// given seed, for any thread count.
RDistribution sample_r_distribution(const HbParams& params, std::uint64_t seed,
                                    const RDistOptions& options = RDistOptions{});

// Tail probability P(R_a < R_b) as the pairwise double sum, ties counted 1/2,
// evaluated by sort-merge in O(M log M).  Guarantees
// bemd(a,b) + bemd(b,a) == 1 exactly.
double bemd(const RDistribution& a, const RDistribution& b);
double bemd(std::vector<double> a_risks, std::vector<double> b_risks);

// Case-resampling bootstrap of the empirical risk: n_resamples means of
// resampled-with-replacement losses.
RDistribution bootstrap_risk(const LossSamples& losses, std::size_t n_resamples, std::uint64_t seed);
constexpr std::size_t kDefaultBootstrapResamples = 1200;

// JSON round-trip for R-distributions: {"model_id", "c", "seed", "risks", ...}.
std::string rdistribution_to_json(const RDistribution& r, const std::string& model_id);
RDistribution rdistribution_from_json(const std::string& text, std::string* model_id = nullptr);

}  // namespace emdsel
