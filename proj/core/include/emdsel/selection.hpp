#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace emdsel {

// Pairwise tail probabilities plus per-model empirical risks.
// Invariants: square, bemd[i][j] + bemd[j][i] == 1, diagonal 0.5.
struct ComparisonMatrix {
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> bemd;
    std::vector<double> empirical_risks;

    void validate() const;
};

struct RejectionOutcome {
    std::vector<std::string> rejected;
    double epsilon = 0.0;
    // Ordered pairs whose comparison was already implied by two legs above
    // sqrt(epsilon) through a third model.
    std::vector<std::pair<std::string, std::string>> skipped_pairs;
    // Number of pairwise tests performed; reported (not corrected for) so the
    // multiple-comparison exposure is visible.
    std::size_t pairwise_tests = 0;
};

// Rejects model j if a surviving model i has bemd[i][j] > epsilon and a
// strictly lower empirical risk; equivocal pairs reject neither.  Models are
// processed in increasing risk order, so the minimal-risk model always
// survives.  Requires 0.5 < epsilon <= 1.
RejectionOutcome reject(const ComparisonMatrix& matrix, double epsilon);

// Lower bound on bemd_ac implied by two comparisons against a middle model:
// if both legs exceed sqrt(epsilon), returns bemd_ab * bemd_bc (> epsilon),
// else nothing.  Requires epsilon above the transitivity domain phi^-2.
std::optional<double> transitive_shortcut(double bemd_ab, double bemd_bc, double epsilon);

// Base-10 logit and its inverse; +/-inf at the endpoints.
double log10_logit(double p) noexcept;
double log10_logistic(double y) noexcept;

struct ClassicalCriteria {
    double log10_bl = 0.0;       // relative likelihood
    double delta_aic = 0.0;      // equals 2*ln(10)*log10_bl for equal parameter counts
    double log10_br_bar = 0.0;   // risk difference in decimal logs
    double log10_bemd_bar = 0.0; // base-10 logit of bemd
};

// Scalar core over per-sample losses of two fitted models on the same test
// split, plus their bemd.  Losses are negative log likelihoods.
ClassicalCriteria classical_criteria(const std::vector<double>& losses_a,
                                     const std::vector<double>& losses_b, double bemd_ab);

// +/-inf aware formatting used by the CSV/JSON writers ("+inf" / "-inf").
std::string format_criterion_value(double v);

// Table-layout CSV: header row of model ids, one row per model.
std::string comparison_matrix_to_csv(const ComparisonMatrix& matrix);
ComparisonMatrix comparison_matrix_from_csv(const std::string& text);

std::string rejection_outcome_to_json(const RejectionOutcome& outcome);

}  // namespace emdsel
