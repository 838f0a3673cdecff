#include "emdsel/hb_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emdsel/special_functions.hpp"

namespace emdsel {

namespace {

constexpr int kEndpointRetryBudget = 10000;
constexpr int kNewtonMaxIter = 100;
constexpr double kResidualTarget = 1e-12;
constexpr double kResidualContract = 1e-10;

double interp_uniform(const std::vector<double>& v, std::size_t k, double phi) noexcept {
    if (phi <= 0.0) return v.front();
    if (phi >= 1.0) return v.back();
    const double u = phi * static_cast<double>(k);
    const auto j = static_cast<std::size_t>(u);
    if (j >= k) return v.back();
    return v[j] + (u - static_cast<double>(j)) * (v[j + 1] - v[j]);
}

struct Residuals {
    double f_r, f_v;
    double norm() const noexcept { return std::max(std::fabs(f_r), std::fabs(f_v)); }
};

Residuals residuals_at(double alpha, double beta, double ln_r, double ln_v) {
    const double s = trigamma(alpha) + trigamma(beta);
    return {digamma(alpha) - digamma(beta) - ln_r, std::log(s) - ln_v};
}

// Damped Newton directly in (alpha, beta).  Near the solution this resolves
// one-ulp steps that the ln parameterization cannot represent, which matters
// when alpha, beta are tiny (large v) and the r-residual is ulp-quantized.
Residuals polish_direct(double& alpha, double& beta, double ln_r, double ln_v) {
    Residuals res = residuals_at(alpha, beta, ln_r, ln_v);
    for (int it = 0; it < 40 && res.norm() > 0.0; ++it) {
        const double t_a = trigamma(alpha), t_b = trigamma(beta);
        const double s = t_a + t_b;
        const double j11 = t_a;
        const double j12 = -t_b;
        const double j21 = tetragamma(alpha) / s;
        const double j22 = tetragamma(beta) / s;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double da = (-res.f_r * j22 + res.f_v * j12) / det;
        const double db = (-res.f_v * j11 + res.f_r * j21) / det;
        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h < 20; ++h, lambda *= 0.5) {
            const double na = alpha + lambda * da;
            const double nb = beta + lambda * db;
            if (!(na > 0.0) || !(nb > 0.0)) continue;
            const Residuals trial = residuals_at(na, nb, ln_r, ln_v);
            if (trial.norm() < res.norm()) {
                alpha = na;
                beta = nb;
                res = trial;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return res;
}

// Bisection in ln(alpha) on the nested problem: given alpha, beta is pinned by
// the v-equation, and psi(alpha)-psi(beta)-ln r is strictly increasing.
bool solve_by_bisection(double ln_r, double v, double& alpha, double& beta) {
    const auto g = [&](double a) {
        const double rem = v - trigamma(a);
        if (!(rem > 0.0)) return std::numeric_limits<double>::infinity();
        return digamma(a) - digamma(trigamma_inverse(rem)) - ln_r;
    };
    const double sym = trigamma_inverse(0.5 * v);
    double lo = std::log(sym), hi = std::log(sym);
    const double g_sym = -ln_r;
    if (g_sym < 0.0) {
        double step = 1.0;
        while (g(std::exp(hi + step)) < 0.0) {
            hi += step;
            step *= 2.0;
            if (hi > 710.0) return false;
        }
        hi += step;
    } else {
        const double a_min = std::log(trigamma_inverse(v));  // beta finite requires alpha > this
        double step = 1.0;
        for (;;) {
            double cand = std::max(lo - step, a_min + 1e-12);
            if (g(std::exp(cand)) <= 0.0 || cand <= a_min + 1e-12) {
                lo = cand;
                break;
            }
            step *= 2.0;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval collapsed to adjacent doubles
        (g(std::exp(mid)) < 0.0 ? lo : hi) = mid;
    }
    alpha = std::exp(0.5 * (lo + hi));
    const double rem = v - trigamma(alpha);
    if (!(rem > 0.0)) return false;
    beta = trigamma_inverse(rem);
    return true;
}

}  // namespace

DiscrepancyFn::DiscrepancyFn(std::size_t resolution, std::vector<double> values)
    : resolution_(resolution), values_(std::move(values)) {
    if (values_.size() != resolution_ + 1) {
        throw std::invalid_argument("discrepancy needs resolution+1 grid values");
    }
    for (double v : values_) {
        if (!(v >= 0.0)) throw std::invalid_argument("discrepancy values must be >= 0");
    }
}

double DiscrepancyFn::operator()(double phi) const noexcept {
    return interp_uniform(values_, resolution_, phi);
}

void HbParams::validate() const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("sensitivity c must be >= 0");
    if (depth < 1 || depth > 24) throw std::invalid_argument("refinement depth must be in [1, 24]");
    if (q_star.resolution() != delta_emd.resolution()) {
        throw std::invalid_argument("incompatible PPFs: q_star and delta_emd grids differ");
    }
    if (!(clamps.r_min > 0.0) || !(clamps.r_max >= clamps.r_min) || !(clamps.v_min > 0.0)) {
        throw std::invalid_argument("invalid clamps");
    }
}

SolverFailure::SolverFailure(double r_, double v_, double res_r, double res_v)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "solver failure: r=" << r_ << ", v=" << v_ << ", residuals (" << res_r << ", "
             << res_v << ")";
          return os.str();
      }()),
      r(r_),
      v(v_),
      residual_r(res_r),
      residual_v(res_v) {}

DegenerateEndpoints::DegenerateEndpoints(double c)
    : std::runtime_error("degenerate endpoints: no increasing (q(0), q(1)) pair within " +
                         std::to_string(kEndpointRetryBudget) + " draws at c=" + std::to_string(c)) {}

BetaParams solve_alpha_beta(double r, double v) {
    if (!(r > 0.0) || !std::isfinite(r) || !(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("solve_alpha_beta: r and v must be finite and positive");
    }
    const double ln_r = std::log(r);
    const double ln_v = std::log(v);

    const double sym = trigamma_inverse(0.5 * v);
    double a = std::clamp(std::log(sym) + 0.5 * ln_r, -690.0, 690.0);
    double b = std::clamp(std::log(sym) - 0.5 * ln_r, -690.0, 690.0);

    Residuals res = residuals_at(std::exp(a), std::exp(b), ln_r, ln_v);
    for (int it = 0; it < kNewtonMaxIter && res.norm() > kResidualTarget; ++it) {
        const double alpha = std::exp(a), beta = std::exp(b);
        const double t_a = trigamma(alpha), t_b = trigamma(beta);
        const double s = t_a + t_b;
        // Jacobian wrt (ln alpha, ln beta)
        const double j11 = alpha * t_a;
        const double j12 = -beta * t_b;
        const double j21 = alpha * tetragamma(alpha) / s;
        const double j22 = beta * tetragamma(beta) / s;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double da = (-res.f_r * j22 + res.f_v * j12) / det;
        double db = (-res.f_v * j11 + res.f_r * j21) / det;
        const double scale = std::max(1.0, std::max(std::fabs(da), std::fabs(db)) / 10.0);
        da /= scale;
        db /= scale;

        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            const double na = std::clamp(a + lambda * da, -690.0, 690.0);
            const double nb = std::clamp(b + lambda * db, -690.0, 690.0);
            const Residuals trial = residuals_at(std::exp(na), std::exp(nb), ln_r, ln_v);
            if (trial.norm() < res.norm()) {
                a = na;
                b = nb;
                res = trial;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }

    double alpha = std::exp(a), beta = std::exp(b);
    res = polish_direct(alpha, beta, ln_r, ln_v);
    if (res.norm() < kResidualContract) return {alpha, beta};

    // Fallback: bisection on the r-equation with beta eliminated through v.
    if (solve_by_bisection(ln_r, v, alpha, beta)) {
        const Residuals check = polish_direct(alpha, beta, ln_r, ln_v);
        if (check.norm() < kResidualContract) return {alpha, beta};
        res = check;
    }
    throw SolverFailure(r, v, res.f_r, res.f_v);
}

double refine_increment(double q_lo, double q_hi, double r, double v, RngStream& rng,
                        const HbClamps& clamps) {
    if (!(q_hi >= q_lo)) throw std::invalid_argument("refine_increment: requires q_hi >= q_lo");
    const double rc = std::clamp(r, clamps.r_min, clamps.r_max);
    const double vc = std::max(v, clamps.v_min);
    const BetaParams p = solve_alpha_beta(rc, vc);
    const double x1 = draw_beta(rng, p.alpha, p.beta);
    const double mid = q_lo + x1 * (q_hi - q_lo);
    return std::clamp(mid, q_lo, q_hi);
}

HbProcess::HbProcess(HbParams params) : params_(std::move(params)) {
    params_.validate();
    const auto& qs = params_.q_star;
    const auto& de = params_.delta_emd;
    const HbClamps& cl = params_.clamps;
    const double sqrt_c = std::sqrt(params_.c);

    q0_mean_ = qs(0.0);
    q1_mean_ = qs(1.0);
    q0_std_ = sqrt_c * de(0.0);
    q1_std_ = sqrt_c * de(1.0);

    const int n_levels = params_.depth;
    node_beta_.resize((std::size_t{1} << n_levels) - 1);
    std::size_t node = 0;
    for (int n = 1; n <= n_levels; ++n) {
        const double width = std::ldexp(1.0, -n);  // 2^-n, independent of total depth
        const std::size_t count = std::size_t{1} << (n - 1);
        for (std::size_t k = 0; k < count; ++k, ++node) {
            const double phi_mid = static_cast<double>(2 * k + 1) * width;
            const double phi_lo = static_cast<double>(2 * k) * width;
            const double phi_hi = static_cast<double>(2 * k + 2) * width;
            const double num = qs(phi_mid) - qs(phi_lo);
            const double den = qs(phi_hi) - qs(phi_mid);
            double r;
            if (num <= 0.0 && den <= 0.0) {
                r = 1.0;  // flat centre segment: split evenly
            } else if (den <= 0.0) {
                r = cl.r_max;
            } else {
                r = std::clamp(num / den, cl.r_min, cl.r_max);
            }
            const double d = de(phi_mid);
            const double v = std::max(2.0 * params_.c * d * d, cl.v_min);
            node_beta_[node] = solve_alpha_beta(r, v);
        }
    }
}

PpfRealization HbProcess::sample(std::uint64_t seed) const {
    const int n_levels = params_.depth;
    const std::size_t n_pts = (std::size_t{1} << n_levels) + 1;

    RngStream endpoint_rng(key_hash({seed, 0, 0}));
    double q0 = 0.0, q1 = 0.0;
    bool ok = false;
    for (int tries = 0; tries < kEndpointRetryBudget; ++tries) {
        q0 = endpoint_rng.normal(q0_mean_, q0_std_);
        q1 = endpoint_rng.normal(q1_mean_, q1_std_);
        if (q0 < q1) {
            ok = true;
            break;
        }
    }
    if (!ok) throw DegenerateEndpoints(params_.c);

    PpfRealization out;
    out.depth = n_levels;
    out.dyadic_values.assign(n_pts, 0.0);
    out.dyadic_values.front() = q0;
    out.dyadic_values.back() = q1;

    std::size_t node = 0;
    for (int n = 1; n <= n_levels; ++n) {
        const std::size_t step = std::size_t{1} << (n_levels - n);
        const std::size_t count = std::size_t{1} << (n - 1);
        for (std::size_t k = 0; k < count; ++k, ++node) {
            const std::size_t lo = 2 * k * step;
            const std::size_t hi = lo + 2 * step;
            const double q_lo = out.dyadic_values[lo];
            const double q_hi = out.dyadic_values[hi];
            RngStream node_rng(key_hash({seed, static_cast<std::uint64_t>(n), k}));
            const BetaParams& p = node_beta_[node];
            const double x1 = draw_beta(node_rng, p.alpha, p.beta);
            out.dyadic_values[lo + step] = std::clamp(q_lo + x1 * (q_hi - q_lo), q_lo, q_hi);
        }
    }
    return out;
}

PpfRealization sample_realization(const HbParams& params, std::uint64_t seed) {
    return HbProcess(params).sample(seed);
}

}  // namespace emdsel
