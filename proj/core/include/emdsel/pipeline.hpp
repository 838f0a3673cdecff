#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emdsel/blackbody.hpp"
#include "emdsel/emd.hpp"
#include "emdsel/selection.hpp"

namespace emdsel::pipeline {

struct ModelLosses {
    std::string id;
    std::vector<double> mixed;  // losses on the observed data
    std::vector<double> synth;  // losses on the model's own synthetic data
};

struct CompareOptions {
    std::size_t ppf_resolution = 1024;
    int hb_depth = 8;
    RDistOptions rdist{};
    int n_threads = 1;
};

struct CompareResult {
    ComparisonMatrix matrix;
    std::vector<RDistribution> rdists;  // one per model, same order as matrix
};

// Builds PPFs and discrepancies per model, samples R-distributions (seeds
// derived per model id position) and fills the pairwise bemd matrix.
// Empirical risks are the mixed-loss means.
CompareResult compare_models(const std::vector<ModelLosses>& models, double c,
                             std::uint64_t seed, const CompareOptions& options = CompareOptions{});

// One generated radiance dataset plus Planck and Rayleigh-Jeans candidates
// fitted to it by full MLE; loss sets arranged for compare_models.
struct BlackbodyComparison {
    blackbody::Dataset dataset;
    blackbody::CandidateModel planck;
    blackbody::CandidateModel rayleigh_jeans;
    std::vector<ModelLosses> losses;  // [planck, rayleigh_jeans]
};

BlackbodyComparison prepare_blackbody_comparison(const blackbody::TrueProcessParams& truth,
                                                 std::uint64_t seed);

struct BlackbodyCriteriaResult {
    ClassicalCriteria criteria;
    double bemd_ab = 0.0;
    blackbody::CandidateModel planck;
    blackbody::CandidateModel rayleigh_jeans;
};

// Classical criteria for the radiance example: models are fitted by MLE on a
// training split and scored on an independent test split generated from the
// same process; the bemd entering the logit uses the same test data.
BlackbodyCriteriaResult blackbody_criteria(const blackbody::TrueProcessParams& truth, double c,
                                           std::uint64_t seed,
                                           const CompareOptions& options = CompareOptions{});

}  // namespace emdsel::pipeline
