#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emdsel/blackbody.hpp"
#include "emdsel/emd.hpp"

namespace emdsel {

// Everything one simulated experiment contributes: candidate losses on the
// replicate dataset, candidate losses on their own synthetic data, and
// oracle risks evaluated on a fresh large dataset from the same draw.
struct CalibrationExperiment {
    std::vector<double> mixed_losses_a, mixed_losses_b;
    std::vector<double> synth_losses_a, synth_losses_b;
    double oracle_risk_a = 0.0, oracle_risk_b = 0.0;
};

// Contract: deterministic given the per-experiment seed; successive seeds
// yield independent draws of the data-generating process and dataset.
class EpistemicDistribution {
  public:
    virtual ~EpistemicDistribution() = default;
    virtual CalibrationExperiment run(std::uint64_t experiment_seed,
                                      std::size_t dataset_size) const = 0;
};

struct CalibrationRecord {
    double bemd_value = 0.0;
    int indicator = 0;  // [R_a < R_b], from oracle risks only
    std::uint64_t experiment_seed = 0;
};

struct CalibrationFailure {
    std::size_t experiment_index = 0;
    std::uint64_t experiment_seed = 0;
    std::string message;
};

struct CalibrationResult {
    std::vector<CalibrationRecord> records;  // ordered by experiment index
    std::vector<CalibrationFailure> failures;
};

struct CalibrationOptions {
    std::size_t ppf_resolution = 1024;
    int hb_depth = 8;
    RDistOptions rdist{};
    int n_threads = 1;                  // worker pool; output independent of it
    double max_failure_fraction = 0.1;  // run-level error above this
};

// Runs n_experiments independent simulated replications at sensitivity c.
// Per-experiment seed = hash(master_seed, index); experiments may execute in
// parallel and individual failures are recorded, not fatal, unless more than
// max_failure_fraction of the run fails.
CalibrationResult run_calibration(const EpistemicDistribution& omega, double c,
                                  std::size_t n_experiments, std::size_t dataset_size,
                                  std::uint64_t master_seed,
                                  const CalibrationOptions& options = CalibrationOptions{});

struct CalibrationBin {
    double mean_bemd = 0.0;
    double mean_indicator = 0.0;  // the confusion-rate estimate for this bin
    std::size_t count = 0;
};

struct CalibrationCurve {
    std::vector<CalibrationBin> bins;
};

// Sorts records by bemd, splits into n_bins contiguous groups whose sizes
// differ by at most one, and averages each group.
CalibrationCurve bin_records(std::vector<CalibrationRecord> records, std::size_t n_bins);

struct OverconfidenceReport {
    std::vector<std::size_t> violations;  // indices of flagged bins
    std::size_t bin_count = 0;
    double tolerance = 0.0;
};

// Flags bins whose bemd mean sits farther from 0.5 than the indicator mean by
// more than the tolerance.
OverconfidenceReport overconfidence_report(const CalibrationCurve& curve, double tolerance);

// Monte-Carlo estimate of P(Q_a < Q_b + eta), eta ~ N(0, c_q^2), over n_pairs
// uniformly resampled paired indices; ties count 1/2.
double bq_criterion(const LossSamples& losses_a, const LossSamples& losses_b, double c_q,
                    std::uint64_t seed, std::size_t n_pairs);

// The paper-protocol epistemic distribution for the radiance example: physical
// model uniform over {Planck, Rayleigh-Jeans}, bias uniform in [-1e-4, 1e-4],
// fixed gain/temperature/window; candidates refit only their noise scale.
class BlackbodyOmega : public EpistemicDistribution {
  public:
    struct Config {
        double s = 1e5;
        double temperature = 4000.0;
        double bias_min = -1e-4;
        double bias_max = 1e-4;
        double lambda_min = 15.0;
        double lambda_max = 30.0;
        std::size_t oracle_sample_count = 4096;  // 2^12
    };

    BlackbodyOmega();
    explicit BlackbodyOmega(const Config& config) : config_(config) {}

    CalibrationExperiment run(std::uint64_t experiment_seed,
                              std::size_t dataset_size) const override;

    const Config& config() const noexcept { return config_; }

  private:
    Config config_;
};

// CSV with header "mean_bemd,mean_bconf,count".
std::string curve_to_csv(const CalibrationCurve& curve);
CalibrationCurve curve_from_csv(const std::string& text);

// CSV with header "experiment_seed,bemd,indicator", rows in experiment order.
std::string records_to_csv(const std::vector<CalibrationRecord>& records);

}  // namespace emdsel
