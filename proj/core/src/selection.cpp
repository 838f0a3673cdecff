#include "emdsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "emdsel/csv.hpp"
#include "json.hpp"

namespace emdsel {

namespace {
const double kGoldenRatio = 0.5 * (1.0 + std::sqrt(5.0));
}

void ComparisonMatrix::validate() const {
    const std::size_t n = model_ids.size();
    if (bemd.size() != n || empirical_risks.size() != n) {
        throw std::invalid_argument("comparison matrix: inconsistent sizes");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (bemd[i].size() != n) throw std::invalid_argument("comparison matrix must be square");
        if (std::fabs(bemd[i][i] - 0.5) > 1e-12) {
            throw std::invalid_argument("comparison matrix diagonal must be 0.5");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (std::fabs(bemd[i][j] + bemd[j][i] - 1.0) > 1e-9) {
                throw std::invalid_argument("comparison matrix must satisfy bemd[i][j]+bemd[j][i]=1");
            }
        }
    }
}

RejectionOutcome reject(const ComparisonMatrix& matrix, double epsilon) {
    if (!(epsilon > 0.5) || !(epsilon <= 1.0)) {
        throw std::invalid_argument("threshold must exceed 0.5 (and be <= 1)");
    }
    matrix.validate();
    const std::size_t n = matrix.model_ids.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return matrix.empirical_risks[a] < matrix.empirical_risks[b];
    });

    // A model can only be beaten by one of strictly lower risk, so walking in
    // increasing risk order settles survivorship in a single pass.
    std::vector<bool> rejected(n, false);
    for (std::size_t oj = 0; oj < n; ++oj) {
        const std::size_t j = order[oj];
        for (std::size_t oi = 0; oi < oj && !rejected[j]; ++oi) {
            const std::size_t i = order[oi];
            if (rejected[i]) continue;
            if (matrix.bemd[i][j] > epsilon &&
                matrix.empirical_risks[i] < matrix.empirical_risks[j]) {
                rejected[j] = true;
            }
        }
    }

    RejectionOutcome out;
    out.epsilon = epsilon;
    out.pairwise_tests = n * (n - 1) / 2;
    for (std::size_t j = 0; j < n; ++j) {
        if (rejected[j]) out.rejected.push_back(matrix.model_ids[j]);
    }

    const double sqrt_eps = std::sqrt(epsilon);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (matrix.bemd[i][k] > sqrt_eps && matrix.bemd[k][j] > sqrt_eps) {
                    out.skipped_pairs.emplace_back(matrix.model_ids[i], matrix.model_ids[j]);
                    break;
                }
            }
        }
    }
    return out;
}

std::optional<double> transitive_shortcut(double bemd_ab, double bemd_bc, double epsilon) {
    const double phi_sq_inv = 1.0 / (kGoldenRatio * kGoldenRatio);
    if (!(epsilon > phi_sq_inv)) {
        throw std::invalid_argument("threshold below transitivity domain (needs epsilon > phi^-2)");
    }
    const double sqrt_eps = std::sqrt(epsilon);
    if (bemd_ab > sqrt_eps && bemd_bc > sqrt_eps) return bemd_ab * bemd_bc;
    return std::nullopt;
}

double log10_logit(double p) noexcept { return std::log10(p) - std::log10(1.0 - p); }

double log10_logistic(double y) noexcept {
    if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::pow(10.0, -y));
}

ClassicalCriteria classical_criteria(const std::vector<double>& losses_a,
                                     const std::vector<double>& losses_b, double bemd_ab) {
    if (losses_a.empty() || losses_b.empty()) {
        throw std::invalid_argument("classical criteria need non-empty loss vectors");
    }
    if (!(bemd_ab >= 0.0 && bemd_ab <= 1.0)) {
        throw std::invalid_argument("bemd must be a probability");
    }
    const auto total = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) {
            if (!std::isfinite(x)) throw std::invalid_argument("singular likelihood: non-finite loss");
            s += x;
        }
        return s;
    };
    const double sum_a = total(losses_a);
    const double sum_b = total(losses_b);
    const double loglik_a = -sum_a;
    const double loglik_b = -sum_b;
    const double risk_a = sum_a / static_cast<double>(losses_a.size());
    const double risk_b = sum_b / static_cast<double>(losses_b.size());

    ClassicalCriteria c;
    c.log10_bl = (loglik_a - loglik_b) / std::numbers::ln10;
    c.delta_aic = 2.0 * (loglik_a - loglik_b);
    c.log10_br_bar = (-risk_a + risk_b) / std::numbers::ln10;
    c.log10_bemd_bar = log10_logit(bemd_ab);
    return c;
}

std::string format_criterion_value(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return format_double17(v);
}

std::string comparison_matrix_to_csv(const ComparisonMatrix& matrix) {
    std::ostringstream os;
    os << "model";
    for (const auto& id : matrix.model_ids) os << "," << id;
    os << "\n";
    for (std::size_t i = 0; i < matrix.model_ids.size(); ++i) {
        os << matrix.model_ids[i];
        for (std::size_t j = 0; j < matrix.model_ids.size(); ++j) {
            os << "," << format_double17(matrix.bemd[i][j]);
        }
        os << "\n";
    }
    return os.str();
}

ComparisonMatrix comparison_matrix_from_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.size() < 2) throw std::invalid_argument("comparison matrix CSV too short");
    ComparisonMatrix m;
    for (std::size_t j = 1; j < rows[0].size(); ++j) m.model_ids.push_back(rows[0][j]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> row;
        for (std::size_t j = 1; j < rows[i].size(); ++j) row.push_back(std::stod(rows[i][j]));
        m.bemd.push_back(std::move(row));
    }
    m.empirical_risks.assign(m.model_ids.size(), 0.0);
    return m;
}

std::string rejection_outcome_to_json(const RejectionOutcome& outcome) {
    nlohmann::ordered_json j;
    j["rejected"] = outcome.rejected;
    j["epsilon"] = outcome.epsilon;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& [a, b] : outcome.skipped_pairs) pairs.push_back({a, b});
    j["skipped_pairs"] = pairs;
    j["pairwise_tests"] = outcome.pairwise_tests;
    return j.dump(2) + "\n";
}

}  // namespace emdsel
