#include "emdsel/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emdsel/csv.hpp"

namespace emdsel {

namespace {

HbParams hb_params_from_losses(const std::vector<double>& mixed, const std::vector<double>& synth,
                               double c, const CalibrationOptions& options) {
    const EmpiricalPpf q_mixed = build_empirical_ppf(LossSamples(mixed), options.ppf_resolution);
    const EmpiricalPpf q_synth = build_empirical_ppf(LossSamples(synth), options.ppf_resolution);
    DiscrepancyFn delta = delta_emd(q_mixed, q_synth);
    return HbParams{q_mixed, std::move(delta), c, options.hb_depth};
}

}  // namespace

CalibrationResult run_calibration(const EpistemicDistribution& omega, double c,
                                  std::size_t n_experiments, std::size_t dataset_size,
                                  std::uint64_t master_seed, const CalibrationOptions& options) {
    if (n_experiments < 1) throw std::invalid_argument("need at least one experiment");
    if (!(c >= 0.0)) throw std::invalid_argument("sensitivity c must be >= 0");

    struct Slot {
        bool failed = false;
        CalibrationRecord record{};
        std::string message;
    };
    std::vector<Slot> slots(n_experiments);

    const auto run_one = [&](std::size_t index) {
        const std::uint64_t seed = key_hash({master_seed, index});
        Slot& slot = slots[index];
        slot.record.experiment_seed = seed;
        try {
            const CalibrationExperiment exp = omega.run(seed, dataset_size);
            HbParams params_a = hb_params_from_losses(exp.mixed_losses_a, exp.synth_losses_a, c, options);
            HbParams params_b = hb_params_from_losses(exp.mixed_losses_b, exp.synth_losses_b, c, options);
            RDistOptions ropts = options.rdist;
            ropts.n_threads = 1;  // parallelism lives at the experiment level
            const RDistribution ra = sample_r_distribution(params_a, key_hash({seed, 0xaull}), ropts);
            const RDistribution rb = sample_r_distribution(params_b, key_hash({seed, 0xbull}), ropts);
            slot.record.bemd_value = bemd(ra, rb);
            slot.record.indicator = exp.oracle_risk_a < exp.oracle_risk_b ? 1 : 0;
        } catch (const std::exception& e) {
            slot.failed = true;
            slot.message = e.what();
        }
    };

    const int workers = std::max(1, options.n_threads);
    if (workers == 1) {
        for (std::size_t i = 0; i < n_experiments; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_experiments) return;
                    run_one(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    CalibrationResult result;
    for (std::size_t i = 0; i < n_experiments; ++i) {
        if (slots[i].failed) {
            result.failures.push_back({i, slots[i].record.experiment_seed, slots[i].message});
        } else {
            result.records.push_back(slots[i].record);
        }
    }
    const double failure_fraction =
        static_cast<double>(result.failures.size()) / static_cast<double>(n_experiments);
    if (failure_fraction > options.max_failure_fraction) {
        throw std::runtime_error("calibration run failed: " + std::to_string(result.failures.size()) +
                                 "/" + std::to_string(n_experiments) + " experiments failed (first: " +
                                 result.failures.front().message + ")");
    }
    return result;
}

CalibrationCurve bin_records(std::vector<CalibrationRecord> records, std::size_t n_bins) {
    if (n_bins < 1) throw std::invalid_argument("need at least one bin");
    if (records.size() < n_bins) {
        throw std::invalid_argument("insufficient experiments: " + std::to_string(records.size()) +
                                    " records for " + std::to_string(n_bins) + " bins");
    }
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        if (a.bemd_value != b.bemd_value) return a.bemd_value < b.bemd_value;
        return a.experiment_seed < b.experiment_seed;  // deterministic tie-break
    });

    CalibrationCurve curve;
    const std::size_t base = records.size() / n_bins;
    const std::size_t remainder = records.size() % n_bins;
    std::size_t pos = 0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t count = base + (b < remainder ? 1 : 0);
        double sum_bemd = 0.0, sum_ind = 0.0;
        for (std::size_t k = 0; k < count; ++k, ++pos) {
            sum_bemd += records[pos].bemd_value;
            sum_ind += records[pos].indicator;
        }
        curve.bins.push_back({sum_bemd / static_cast<double>(count),
                              sum_ind / static_cast<double>(count), count});
    }
    return curve;
}

OverconfidenceReport overconfidence_report(const CalibrationCurve& curve, double tolerance) {
    OverconfidenceReport report;
    report.bin_count = curve.bins.size();
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < curve.bins.size(); ++i) {
        const auto& bin = curve.bins[i];
        if (std::fabs(bin.mean_bemd - 0.5) > std::fabs(bin.mean_indicator - 0.5) + tolerance) {
            report.violations.push_back(i);
        }
    }
    return report;
}

double bq_criterion(const LossSamples& losses_a, const LossSamples& losses_b, double c_q,
                    std::uint64_t seed, std::size_t n_pairs) {
    if (losses_a.count() != losses_b.count()) {
        throw std::invalid_argument("bq_criterion needs paired losses of equal length");
    }
    if (!(c_q >= 0.0)) throw std::invalid_argument("c_q must be >= 0");
    if (n_pairs < 1) throw std::invalid_argument("need at least one pair");
    RngStream rng(key_hash({seed, 0x6271ull}));
    const std::size_t n = losses_a.count();
    double halves = 0.0;
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % n);
        const double qa = losses_a.values()[idx];
        const double qb = losses_b.values()[idx] + (c_q > 0.0 ? rng.normal(0.0, c_q) : 0.0);
        if (qa < qb) {
            halves += 2.0;
        } else if (qa == qb) {
            halves += 1.0;
        }
    }
    return halves / (2.0 * static_cast<double>(n_pairs));
}

BlackbodyOmega::BlackbodyOmega() : config_(Config{}) {}

CalibrationExperiment BlackbodyOmega::run(std::uint64_t experiment_seed,
                                          std::size_t dataset_size) const {
    using namespace blackbody;
    RngStream omega_rng(key_hash({experiment_seed, 0x6f6d656761ull}));
    const Family physical =
        (omega_rng.next_u64() & 1ull) ? Family::kRayleighJeans : Family::kPlanck;
    const double bias = omega_rng.uniform(config_.bias_min, config_.bias_max);

    TrueProcessParams truth;
    truth.s = config_.s;
    truth.temperature = config_.temperature;
    truth.bias = bias;
    truth.lambda_min = config_.lambda_min;
    truth.lambda_max = config_.lambda_max;
    truth.sample_count = dataset_size;
    truth.physical_model = physical;

    const Dataset replicate = generate_dataset(truth, key_hash({experiment_seed, 1}));

    // The calibration protocol refits only the candidates' noise scale.
    const CandidateModel cand_a = fit_sigma_given_t(replicate, Family::kPlanck, config_.temperature);
    const CandidateModel cand_b =
        fit_sigma_given_t(replicate, Family::kRayleighJeans, config_.temperature);

    const Dataset synth_a = generate_candidate_dataset(cand_a, replicate, key_hash({experiment_seed, 2}));
    const Dataset synth_b = generate_candidate_dataset(cand_b, replicate, key_hash({experiment_seed, 3}));

    TrueProcessParams oracle_truth = truth;
    oracle_truth.sample_count = config_.oracle_sample_count;
    const Dataset oracle = generate_dataset(oracle_truth, key_hash({experiment_seed, 4}));

    CalibrationExperiment exp;
    exp.mixed_losses_a = losses_on(replicate, cand_a);
    exp.mixed_losses_b = losses_on(replicate, cand_b);
    exp.synth_losses_a = losses_on(synth_a, cand_a);
    exp.synth_losses_b = losses_on(synth_b, cand_b);
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    exp.oracle_risk_a = mean(losses_on(oracle, cand_a));
    exp.oracle_risk_b = mean(losses_on(oracle, cand_b));
    return exp;
}

std::string curve_to_csv(const CalibrationCurve& curve) {
    std::ostringstream os;
    os << "mean_bemd,mean_bconf,count\n";
    for (const auto& bin : curve.bins) {
        os << format_double17(bin.mean_bemd) << "," << format_double17(bin.mean_indicator) << ","
           << bin.count << "\n";
    }
    return os.str();
}

CalibrationCurve curve_from_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    CalibrationCurve curve;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && !rows[i].empty() && rows[i][0] == "mean_bemd") continue;
        if (rows[i].size() != 3) throw std::invalid_argument("calibration curve CSV needs 3 columns");
        curve.bins.push_back({std::stod(rows[i][0]), std::stod(rows[i][1]),
                              static_cast<std::size_t>(std::stoull(rows[i][2]))});
    }
    return curve;
}

std::string records_to_csv(const std::vector<CalibrationRecord>& records) {
    std::ostringstream os;
    os << "experiment_seed,bemd,indicator\n";
    for (const auto& r : records) {
        os << r.experiment_seed << "," << format_double17(r.bemd_value) << "," << r.indicator << "\n";
    }
    return os.str();
}

}  // namespace emdsel
