#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emdsel/calibration.hpp"
#include "emdsel/csv.hpp"
#include "emdsel/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace emdsel;

namespace {

struct CommonConfig {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;
    double c = 0.5;
    double epsilon = 0.95;
    double rel_se = 0.03125;  // 2^-5
    std::size_t resolution = 1024;
    int depth = 8;
    std::size_t column = 0;
};

ordered_json constants_json() {
    return {{"planck_constant", blackbody::kPlanckConstant},
            {"speed_of_light", blackbody::kSpeedOfLight},
            {"boltzmann_constant", blackbody::kBoltzmannConstant}};
}

// Optional JSON config file; values apply only to flags the user did not pass.
void apply_config_file(CLI::App& app, const std::string& path) {
    const ordered_json cfg = ordered_json::parse(read_file(path));
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr) throw std::runtime_error(path + ": unknown config key '" + key + "'");
        if (opt->count() > 0) continue;  // explicit flags win
        if (value.is_array()) {
            for (const auto& item : value) opt->add_result(item.dump());
        } else if (value.is_string()) {
            opt->add_result(value.get<std::string>());
        } else {
            opt->add_result(value.dump());
        }
        opt->run_callback();
    }
}

void write_artifact(const fs::path& dir, const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    write_file((dir / name).string(), content);
}

pipeline::CompareOptions compare_options(const CommonConfig& common) {
    pipeline::CompareOptions opts;
    opts.ppf_resolution = common.resolution;
    opts.hb_depth = common.depth;
    opts.rdist.rel_se_target = common.rel_se;
    opts.n_threads = common.threads;
    return opts;
}

ordered_json resolved_common(const CommonConfig& c, const std::string& command) {
    ordered_json j;
    j["command"] = command;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["c"] = c.c;
    j["epsilon"] = c.epsilon;
    j["rel_se_target"] = c.rel_se;
    j["ppf_resolution"] = c.resolution;
    j["hb_depth"] = c.depth;
    j["out_dir"] = c.out_dir;
    j["constants"] = constants_json();
    return j;
}

void emit_compare_artifacts(const pipeline::CompareResult& result, const CommonConfig& common,
                            ordered_json manifest) {
    const fs::path out(common.out_dir);
    const RejectionOutcome outcome = reject(result.matrix, common.epsilon);
    write_artifact(out, "comparison_matrix.csv", comparison_matrix_to_csv(result.matrix));
    write_artifact(out, "rejection.json", rejection_outcome_to_json(outcome));
    for (std::size_t i = 0; i < result.matrix.model_ids.size(); ++i) {
        write_artifact(out, "rdist_" + result.matrix.model_ids[i] + ".json",
                       rdistribution_to_json(result.rdists[i], result.matrix.model_ids[i]));
    }
    ordered_json risks;
    for (std::size_t i = 0; i < result.matrix.model_ids.size(); ++i) {
        risks[result.matrix.model_ids[i]] = result.matrix.empirical_risks[i];
    }
    manifest["empirical_risks"] = risks;
    manifest["rejected"] = outcome.rejected;
    write_artifact(out, "manifest.json", manifest.dump(2) + "\n");
}

blackbody::TrueProcessParams scenario_from_flags(double s, double temperature, double bias,
                                                 double lambda_min, double lambda_max,
                                                 std::size_t samples, const std::string& physical) {
    blackbody::TrueProcessParams p;
    p.s = s;
    p.temperature = temperature;
    p.bias = bias;
    p.lambda_min = lambda_min;
    p.lambda_max = lambda_max;
    p.sample_count = samples;
    p.physical_model = blackbody::family_from_name(physical);
    return p;
}

ordered_json scenario_json(const blackbody::TrueProcessParams& p) {
    return {{"s", p.s},
            {"temperature", p.temperature},
            {"bias", p.bias},
            {"lambda_min", p.lambda_min},
            {"lambda_max", p.lambda_max},
            {"samples", p.sample_count},
            {"physical_model", blackbody::family_name(p.physical_model)}};
}

int run_compare(const CommonConfig& common, const std::vector<std::string>& model_specs) {
    // each spec: id=mixed.csv,synth.csv
    std::vector<pipeline::ModelLosses> models;
    for (const auto& spec : model_specs) {
        const auto eq = spec.find('=');
        const auto comma = spec.find(',', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || comma == std::string::npos) {
            throw std::runtime_error("--model expects id=mixed.csv,synth.csv, got '" + spec + "'");
        }
        pipeline::ModelLosses m;
        m.id = spec.substr(0, eq);
        m.mixed = load_losses_csv(spec.substr(eq + 1, comma - eq - 1), common.column);
        m.synth = load_losses_csv(spec.substr(comma + 1), common.column);
        models.push_back(std::move(m));
    }
    const pipeline::CompareResult result =
        pipeline::compare_models(models, common.c, common.seed, compare_options(common));
    ordered_json manifest = resolved_common(common, "compare");
    ordered_json inputs = ordered_json::array();
    for (const auto& spec : model_specs) inputs.push_back(spec);
    manifest["models"] = inputs;
    emit_compare_artifacts(result, common, std::move(manifest));
    return 0;
}

int run_compare_blackbody(const CommonConfig& common, const blackbody::TrueProcessParams& scenario,
                          const std::string& command) {
    const pipeline::BlackbodyComparison prep =
        pipeline::prepare_blackbody_comparison(scenario, common.seed);
    const pipeline::CompareResult result =
        pipeline::compare_models(prep.losses, common.c, key_hash({common.seed, 0x636d70ull}),
                                 compare_options(common));
    write_artifact(common.out_dir, "dataset.csv", blackbody::dataset_to_csv(prep.dataset));
    ordered_json manifest = resolved_common(common, command);
    manifest["scenario"] = scenario_json(scenario);
    manifest["fits"] = {{"planck",
                         {{"temperature", prep.planck.temperature}, {"sigma", prep.planck.sigma}}},
                        {"rayleigh_jeans",
                         {{"temperature", prep.rayleigh_jeans.temperature},
                          {"sigma", prep.rayleigh_jeans.sigma}}}};
    emit_compare_artifacts(result, common, std::move(manifest));
    return 0;
}

int run_rdist(const CommonConfig& common, const std::string& mixed_path,
              const std::string& synth_path, std::size_t m_min, std::size_t m_max) {
    const std::vector<double> mixed = load_losses_csv(mixed_path, common.column);
    const std::vector<double> synth = load_losses_csv(synth_path, common.column);
    const EmpiricalPpf q_mixed = build_empirical_ppf(LossSamples(mixed), common.resolution);
    const EmpiricalPpf q_synth = build_empirical_ppf(LossSamples(synth), common.resolution);
    DiscrepancyFn delta = delta_emd(q_mixed, q_synth);
    double delta_mass = 0.0;
    for (double v : delta.values()) delta_mass += v;
    const bool degenerate = delta_mass == 0.0;
    HbParams params{q_mixed, std::move(delta), common.c, common.depth};

    RDistOptions opts;
    opts.rel_se_target = common.rel_se;
    opts.m_min = m_min;
    opts.m_max = m_max;
    opts.n_threads = common.threads;
    const RDistribution rdist = sample_r_distribution(params, common.seed, opts);

    double mean = 0.0;
    for (double r : rdist.risks) mean += r;
    mean /= static_cast<double>(rdist.risks.size());

    const fs::path out(common.out_dir);
    write_artifact(out, "rdist.json", rdistribution_to_json(rdist, "model"));
    ordered_json manifest = resolved_common(common, "rdist");
    manifest["mixed"] = mixed_path;
    manifest["synth"] = synth_path;
    manifest["summary"] = {{"mean", mean},
                           {"rel_se", rdist.rel_se},
                           {"rel_se_target", common.rel_se},
                           {"sample_count", rdist.sample_count},
                           {"tolerance_met", rdist.tolerance_met},
                           {"degenerate", degenerate}};
    write_artifact(out, "manifest.json", manifest.dump(2) + "\n");
    std::cerr << "rdist: M=" << rdist.sample_count << " rel_se=" << rdist.rel_se
              << (degenerate ? " (degenerate discrepancy)" : "") << "\n";
    return 0;
}

int run_calibrate(const CommonConfig& common, std::vector<double> c_list,
                  std::size_t n_experiments, std::size_t bins, std::size_t dataset_size,
                  const BlackbodyOmega::Config& omega_cfg, double tolerance) {
    if (n_experiments < bins) {
        throw std::runtime_error("calibrate: experiments (" + std::to_string(n_experiments) +
                                 ") must be >= bins (" + std::to_string(bins) + ")");
    }
    const BlackbodyOmega omega(omega_cfg);
    CalibrationOptions opts;
    opts.ppf_resolution = common.resolution;
    opts.hb_depth = common.depth;
    opts.rdist.rel_se_target = common.rel_se;
    opts.n_threads = common.threads;

    const fs::path out(common.out_dir);
    ordered_json manifest = resolved_common(common, "calibrate");
    manifest["c_list"] = c_list;
    manifest["n_experiments"] = n_experiments;
    manifest["bins"] = bins;
    manifest["dataset_size"] = dataset_size;
    manifest["overconfidence_tolerance"] = tolerance;
    manifest["omega"] = {{"s", omega_cfg.s},
                         {"temperature", omega_cfg.temperature},
                         {"bias_min", omega_cfg.bias_min},
                         {"bias_max", omega_cfg.bias_max},
                         {"lambda_min", omega_cfg.lambda_min},
                         {"lambda_max", omega_cfg.lambda_max},
                         {"oracle_samples", omega_cfg.oracle_sample_count}};
    ordered_json failures = ordered_json::array();
    ordered_json reports = ordered_json::array();

    for (double c : c_list) {
        std::cerr << "calibrating c=" << c << " (" << n_experiments << " experiments)\n";
        const CalibrationResult result =
            run_calibration(omega, c, n_experiments, dataset_size, common.seed, opts);
        const std::string tag = format_double17(c);
        write_artifact(out, "records_c=" + tag + ".csv", records_to_csv(result.records));
        const CalibrationCurve curve = bin_records(result.records, bins);
        write_artifact(out, "curve_c=" + tag + ".csv", curve_to_csv(curve));
        const OverconfidenceReport report = overconfidence_report(curve, tolerance);
        reports.push_back({{"c", c},
                           {"records", result.records.size()},
                           {"violations", report.violations},
                           {"bin_count", report.bin_count},
                           {"tolerance", tolerance}});
        for (const auto& f : result.failures) {
            failures.push_back({{"c", c},
                                {"experiment_index", f.experiment_index},
                                {"experiment_seed", f.experiment_seed},
                                {"message", f.message}});
        }
    }
    manifest["overconfidence_reports"] = reports;
    manifest["failures"] = failures;
    write_artifact(out, "manifest.json", manifest.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-distribution model rejection toolkit"};
    app.require_subcommand(1);

    CommonConfig common;

    const auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "JSON config file; explicit flags override");
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--seed", common.seed, "master seed; all randomness derives from it");
        cmd->add_option("--threads", common.threads, "worker pool size (outputs independent of it)");
        cmd->add_option("--c", common.c, "sensitivity constant");
        cmd->add_option("--epsilon", common.epsilon, "rejection threshold in (0.5, 1]");
        cmd->add_option("--rel-se", common.rel_se, "relative standard error stopping target");
        cmd->add_option("--resolution", common.resolution, "PPF grid resolution K");
        cmd->add_option("--depth", common.depth, "dyadic refinement depth N");
        cmd->add_option("--column", common.column, "CSV column holding the losses");
    };

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "pairwise model comparison and rejection");
    std::vector<std::string> model_specs;
    cmd_compare->add_option("--model", model_specs, "model losses as id=mixed.csv,synth.csv");
    double s = 1e5, temperature = 4000.0, bias = 0.0, lambda_min = 15.0, lambda_max = 30.0;
    std::size_t samples = 4096;
    std::string physical = "planck";
    bool blackbody_scenario = false;
    cmd_compare->add_flag("--blackbody", blackbody_scenario,
                          "compare Planck vs Rayleigh-Jeans on generated data");
    cmd_compare->add_option("--s", s, "sensor gain");
    cmd_compare->add_option("--temperature", temperature, "black-body temperature [K]");
    cmd_compare->add_option("--bias", bias, "additive sensor bias");
    cmd_compare->add_option("--lambda-min", lambda_min, "window lower edge [um]");
    cmd_compare->add_option("--lambda-max", lambda_max, "window upper edge [um]");
    cmd_compare->add_option("--samples", samples, "dataset size L");
    cmd_compare->add_option("--physical", physical, "true process family (planck|rayleigh_jeans)");
    add_common(cmd_compare);

    // rdist
    auto* cmd_rdist = app.add_subcommand("rdist", "sample one R-distribution from loss files");
    std::string mixed_path, synth_path;
    std::size_t m_min = 16, m_max = 4096;
    cmd_rdist->add_option("--mixed", mixed_path, "CSV of losses on observed data")->required();
    cmd_rdist->add_option("--synth", synth_path, "CSV of losses on model-generated data")->required();
    cmd_rdist->add_option("--m-min", m_min, "minimum number of realizations");
    cmd_rdist->add_option("--m-max", m_max, "maximum number of realizations");
    add_common(cmd_rdist);

    // calibrate
    auto* cmd_calibrate = app.add_subcommand("calibrate", "simulated-replication calibration sweep");
    std::vector<double> c_list;
    std::size_t n_experiments = 512, bins = 32, dataset_size = 4096;
    double tolerance = 0.05;
    BlackbodyOmega::Config omega_cfg;
    cmd_calibrate->add_option("--c-list", c_list, "sensitivity values to calibrate");
    cmd_calibrate->add_option("--experiments", n_experiments, "number of simulated experiments");
    cmd_calibrate->add_option("--bins", bins, "equal-count bins for the curve");
    cmd_calibrate->add_option("--dataset-size", dataset_size, "replicate dataset size");
    cmd_calibrate->add_option("--tolerance", tolerance, "overconfidence tolerance");
    cmd_calibrate->add_option("--omega-s", omega_cfg.s, "omega: sensor gain");
    cmd_calibrate->add_option("--omega-temperature", omega_cfg.temperature, "omega: temperature [K]");
    cmd_calibrate->add_option("--omega-bias-min", omega_cfg.bias_min, "omega: bias lower bound");
    cmd_calibrate->add_option("--omega-bias-max", omega_cfg.bias_max, "omega: bias upper bound");
    cmd_calibrate->add_option("--omega-lambda-min", omega_cfg.lambda_min,
                              "omega: window lower edge [um]");
    cmd_calibrate->add_option("--omega-lambda-max", omega_cfg.lambda_max,
                              "omega: window upper edge [um]");
    cmd_calibrate->add_option("--oracle-samples", omega_cfg.oracle_sample_count,
                              "oracle dataset size per experiment");
    add_common(cmd_calibrate);

    // demo-blackbody
    auto* cmd_demo = app.add_subcommand("demo-blackbody", "end-to-end radiance demo with artifacts");
    double d_s = 1048576.0, d_temperature = 4000.0, d_bias = 0.0, d_lmin = 0.4, d_lmax = 0.8;
    std::size_t d_samples = 4096;
    cmd_demo->add_option("--s", d_s, "sensor gain");
    cmd_demo->add_option("--temperature", d_temperature, "black-body temperature [K]");
    cmd_demo->add_option("--bias", d_bias, "additive sensor bias");
    cmd_demo->add_option("--lambda-min", d_lmin, "window lower edge [um]");
    cmd_demo->add_option("--lambda-max", d_lmax, "window upper edge [um]");
    cmd_demo->add_option("--samples", d_samples, "dataset size L");
    add_common(cmd_demo);

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        if (!common.config_path.empty()) apply_config_file(*sub, common.config_path);
        if (sub == cmd_compare) {
            if (blackbody_scenario) {
                return run_compare_blackbody(
                    common,
                    scenario_from_flags(s, temperature, bias, lambda_min, lambda_max, samples,
                                        physical),
                    "compare");
            }
            if (model_specs.size() < 2) {
                throw std::runtime_error("compare needs --blackbody or at least two --model specs");
            }
            return run_compare(common, model_specs);
        }
        if (sub == cmd_rdist) return run_rdist(common, mixed_path, synth_path, m_min, m_max);
        if (sub == cmd_calibrate) {
            if (c_list.empty()) {
                for (int e = -6; e <= 3; ++e) c_list.push_back(std::exp2(e));
            }
            return run_calibrate(common, c_list, n_experiments, bins, dataset_size, omega_cfg,
                                 tolerance);
        }
        if (sub == cmd_demo) {
            return run_compare_blackbody(
                common, scenario_from_flags(d_s, d_temperature, d_bias, d_lmin, d_lmax, d_samples,
                                            "planck"),
                "demo-blackbody");
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
