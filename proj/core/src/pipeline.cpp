#include "emdsel/pipeline.hpp"

#include <bit>
#include <stdexcept>

namespace emdsel::pipeline {

namespace {

// Content fingerprint of a model's loss data.  Seeding each R-distribution by
// (seed, fingerprint) makes models with identical inputs produce identical
// risk multisets (so their bemd is exactly 1/2) while distinct models still
// draw from independent streams.
std::uint64_t loss_fingerprint(const ModelLosses& m) {
    std::uint64_t h = key_hash({m.mixed.size(), m.synth.size()});
    for (double v : m.mixed) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
    for (double v : m.synth) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
    return h;
}

}  // namespace

CompareResult compare_models(const std::vector<ModelLosses>& models, double c,
                             std::uint64_t seed, const CompareOptions& options) {
    if (models.size() < 2) throw std::invalid_argument("compare needs at least two models");

    CompareResult result;
    for (const auto& m : models) result.matrix.model_ids.push_back(m.id);

    for (std::size_t i = 0; i < models.size(); ++i) {
        const LossSamples mixed(models[i].mixed);
        const LossSamples synth(models[i].synth);
        const EmpiricalPpf q_mixed = build_empirical_ppf(mixed, options.ppf_resolution);
        const EmpiricalPpf q_synth = build_empirical_ppf(synth, options.ppf_resolution);
        DiscrepancyFn delta = delta_emd(q_mixed, q_synth);
        HbParams params{q_mixed, std::move(delta), c, options.hb_depth};

        RDistOptions ropts = options.rdist;
        ropts.n_threads = options.n_threads;
        result.rdists.push_back(
            sample_r_distribution(params, key_hash({seed, loss_fingerprint(models[i])}), ropts));

        double sum = 0.0;
        for (double q : models[i].mixed) sum += q;
        result.matrix.empirical_risks.push_back(sum / static_cast<double>(models[i].mixed.size()));
    }

    const std::size_t n = models.size();
    result.matrix.bemd.assign(n, std::vector<double>(n, 0.5));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p = bemd(result.rdists[i], result.rdists[j]);
            result.matrix.bemd[i][j] = p;
            result.matrix.bemd[j][i] = bemd(result.rdists[j], result.rdists[i]);
        }
    }
    result.matrix.validate();
    return result;
}

BlackbodyComparison prepare_blackbody_comparison(const blackbody::TrueProcessParams& truth,
                                                 std::uint64_t seed) {
    using namespace blackbody;
    BlackbodyComparison out;
    out.dataset = generate_dataset(truth, key_hash({seed, 0x64617461ull}));
    out.planck = fit_mle(out.dataset, Family::kPlanck);
    out.rayleigh_jeans = fit_mle(out.dataset, Family::kRayleighJeans);

    const Dataset synth_p =
        generate_candidate_dataset(out.planck, out.dataset, key_hash({seed, 0x70ull}));
    const Dataset synth_rj =
        generate_candidate_dataset(out.rayleigh_jeans, out.dataset, key_hash({seed, 0x726aull}));

    out.losses.push_back({family_name(Family::kPlanck), losses_on(out.dataset, out.planck),
                          losses_on(synth_p, out.planck)});
    out.losses.push_back({family_name(Family::kRayleighJeans),
                          losses_on(out.dataset, out.rayleigh_jeans),
                          losses_on(synth_rj, out.rayleigh_jeans)});
    return out;
}

BlackbodyCriteriaResult blackbody_criteria(const blackbody::TrueProcessParams& truth, double c,
                                           std::uint64_t seed, const CompareOptions& options) {
    using namespace blackbody;
    // Fit on a training split, compare on an independent test split.
    const Dataset train = generate_dataset(truth, key_hash({seed, 0x747261696eull}));
    const Dataset test = generate_dataset(truth, key_hash({seed, 0x74657374ull}));

    BlackbodyCriteriaResult out;
    out.planck = fit_mle(train, Family::kPlanck);
    out.rayleigh_jeans = fit_mle(train, Family::kRayleighJeans);

    const Dataset synth_p =
        generate_candidate_dataset(out.planck, test, key_hash({seed, 0x70ull}));
    const Dataset synth_rj =
        generate_candidate_dataset(out.rayleigh_jeans, test, key_hash({seed, 0x726aull}));

    std::vector<ModelLosses> models;
    models.push_back({family_name(Family::kPlanck), losses_on(test, out.planck),
                      losses_on(synth_p, out.planck)});
    models.push_back({family_name(Family::kRayleighJeans), losses_on(test, out.rayleigh_jeans),
                      losses_on(synth_rj, out.rayleigh_jeans)});

    const CompareResult cmp = compare_models(models, c, key_hash({seed, 0x636d70ull}), options);
    out.bemd_ab = cmp.matrix.bemd[0][1];
    out.criteria = classical_criteria(models[0].mixed, models[1].mixed, out.bemd_ab);
    return out;
}

}  // namespace emdsel::pipeline
