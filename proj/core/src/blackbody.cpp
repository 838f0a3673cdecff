#include "emdsel/blackbody.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "emdsel/csv.hpp"

namespace emdsel::blackbody {

namespace {

constexpr double kMicron = 1e-6;

// Minimal Brent minimizer on [a, b]; tol is relative on x.
double brent_minimize(const auto& f, double a, double b, double rel_tol, int max_iter = 200) {
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol = rel_tol * std::fabs(x) + 1e-300;
        if (std::fabs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::fabs(e) > tol) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            if (std::fabs(p) < std::fabs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x)) {
                e = d;
                d = p / q;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::fabs(d) >= tol) ? x + d : x + (d > 0 ? tol : -tol);
        const double fu = f(u);
        if (fu <= fx) {
            (u < x ? b : a) = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            (u < x ? a : b) = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

double sum_squared_residuals(const Dataset& data, Family family, double temperature) {
    double ssr = 0.0;
    for (const auto& p : data) {
        const double r = p.radiance - radiance(family, p.lambda_um, temperature);
        ssr += r * r;
    }
    return ssr;
}

}  // namespace

std::string family_name(Family f) {
    return f == Family::kPlanck ? "planck" : "rayleigh_jeans";
}

Family family_from_name(const std::string& name) {
    if (name == "planck") return Family::kPlanck;
    if (name == "rayleigh_jeans" || name == "rj") return Family::kRayleighJeans;
    throw std::invalid_argument("unknown model family: " + name);
}

double planck_radiance(double lambda_um, double temperature_k) {
    if (!(lambda_um > 0.0) || !(temperature_k > 0.0)) {
        throw std::invalid_argument("planck_radiance: lambda and T must be > 0");
    }
    const double lambda = lambda_um * kMicron;
    const double x = kPlanckConstant * kSpeedOfLight / (lambda * kBoltzmannConstant * temperature_k);
    const double lambda5 = lambda * lambda * lambda * lambda * lambda;
    const double prefactor = 2.0 * kPlanckConstant * kSpeedOfLight * kSpeedOfLight / lambda5;
    if (x > 700.0) {
        // e^x overflows; in log space B = prefactor * e^-x / (1 - e^-x), and
        // e^-x underflow rounds the result to 0.
        const double log_b = std::log(prefactor) - x + std::log(kRadianceSiToKwM2NmSr);
        return std::exp(log_b);
    }
    return prefactor / std::expm1(x) * kRadianceSiToKwM2NmSr;
}

double rj_radiance(double lambda_um, double temperature_k) {
    if (!(lambda_um > 0.0) || !(temperature_k > 0.0)) {
        throw std::invalid_argument("rj_radiance: lambda and T must be > 0");
    }
    const double lambda = lambda_um * kMicron;
    const double lambda4 = lambda * lambda * lambda * lambda;
    return 2.0 * kSpeedOfLight * kBoltzmannConstant * temperature_k / lambda4 *
           kRadianceSiToKwM2NmSr;
}

double radiance(Family f, double lambda_um, double temperature_k) {
    return f == Family::kPlanck ? planck_radiance(lambda_um, temperature_k)
                                : rj_radiance(lambda_um, temperature_k);
}

void TrueProcessParams::validate() const {
    if (!(s > 0.0)) throw std::invalid_argument("sensor gain s must be > 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
    if (!(lambda_min > 0.0) || !(lambda_min < lambda_max)) {
        throw std::invalid_argument("need 0 < lambda_min < lambda_max");
    }
    if (sample_count < 2) throw std::invalid_argument("insufficient samples: need L >= 2");
}

Dataset generate_dataset(const TrueProcessParams& params, std::uint64_t seed) {
    params.validate();
    const std::size_t n = params.sample_count;
    Dataset data(n);
    const double step = (params.lambda_max - params.lambda_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = params.lambda_min + step * static_cast<double>(i);
        const double mean_counts = params.s * radiance(params.physical_model, lambda, params.temperature);
        RngStream rng(key_hash({seed, i, 0x706f6973ull}));  // per-point stream
        const double counts = draw_poisson(rng, mean_counts);
        data[i] = {lambda, counts / params.s + params.bias};
    }
    return data;
}

double gaussian_loss(const DataPoint& point, const CandidateModel& model) {
    if (!(model.sigma > 0.0)) throw std::invalid_argument("candidate sigma must be > 0");
    const double residual = point.radiance - model.predict(point.lambda_um);
    return std::log(std::sqrt(2.0 * std::numbers::pi) * model.sigma) +
           residual * residual / (2.0 * model.sigma * model.sigma);
}

std::vector<double> losses_on(const Dataset& data, const CandidateModel& model) {
    std::vector<double> q(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) q[i] = gaussian_loss(data[i], model);
    return q;
}

Dataset generate_candidate_dataset(const CandidateModel& model, const Dataset& reference,
                                   std::uint64_t seed) {
    Dataset out(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        RngStream rng(key_hash({seed, i, 0x73796e74ull}));
        const double lambda = reference[i].lambda_um;
        out[i] = {lambda, model.predict(lambda) + rng.normal(0.0, model.sigma)};
    }
    return out;
}

namespace {

void check_radiance_spread(const Dataset& data) {
    for (const auto& p : data) {
        if (p.radiance != data.front().radiance) return;
    }
    throw std::runtime_error("singular likelihood: all radiance values identical");
}

}  // namespace

CandidateModel fit_mle(const Dataset& data, Family family) {
    if (data.size() < 3) throw std::invalid_argument("fit_mle needs at least 3 points");
    check_radiance_spread(data);
    // Profile likelihood in T: given T, sigma^2 = SSR/L, so minimizing the
    // negative log likelihood reduces to minimizing SSR(T).
    const auto objective = [&](double log2_t) {
        return sum_squared_residuals(data, family, std::exp2(log2_t));
    };
    const double log2_t_hat =
        brent_minimize(objective, std::log2(kFitTemperatureMin), std::log2(kFitTemperatureMax), 1e-6);
    const double t_hat = std::exp2(log2_t_hat);
    const double ssr = sum_squared_residuals(data, family, t_hat);
    if (!(ssr > 0.0)) throw std::runtime_error("singular likelihood: zero residual variance");
    return {family, t_hat, std::sqrt(ssr / static_cast<double>(data.size()))};
}

CandidateModel fit_sigma_given_t(const Dataset& data, Family family, double temperature) {
    if (data.size() < 2) throw std::invalid_argument("insufficient samples");
    check_radiance_spread(data);
    const double ssr = sum_squared_residuals(data, family, temperature);
    if (!(ssr > 0.0)) throw std::runtime_error("singular likelihood: zero residual variance");
    return {family, temperature, std::sqrt(ssr / static_cast<double>(data.size()))};
}

std::string dataset_to_csv(const Dataset& data) {
    std::ostringstream os;
    os << "lambda_um,radiance\n";
    for (const auto& p : data) {
        os << format_double17(p.lambda_um) << "," << format_double17(p.radiance) << "\n";
    }
    return os.str();
}

Dataset dataset_from_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    Dataset data;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && !rows[i].empty() && rows[i][0] == "lambda_um") continue;
        if (rows[i].size() < 2) throw std::invalid_argument("dataset CSV row needs two columns");
        data.push_back({std::stod(rows[i][0]), std::stod(rows[i][1])});
    }
    return data;
}

}  // namespace emdsel::blackbody
