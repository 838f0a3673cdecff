#include "emdsel/emd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace emdsel {

namespace {

// Sum of per-pair scores in half units: 2*#(a<b) + #(a==b), exact in uint64.
std::uint64_t pair_score_halves(const std::vector<double>& a_sorted,
                                const std::vector<double>& b_sorted) {
    std::uint64_t halves = 0;
    for (double b : b_sorted) {
        const auto lo = std::lower_bound(a_sorted.begin(), a_sorted.end(), b);
        const auto hi = std::upper_bound(lo, a_sorted.end(), b);
        halves += 2 * static_cast<std::uint64_t>(lo - a_sorted.begin());
        halves += static_cast<std::uint64_t>(hi - lo);
    }
    return halves;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

void RDistribution::validate() const {
    if (risks.size() < 2 || risks.size() != sample_count) {
        throw std::invalid_argument("R-distribution needs at least 2 risk samples");
    }
    for (double r : risks) {
        if (!std::isfinite(r)) throw std::invalid_argument("R-distribution has non-finite risk");
    }
}

DiscrepancyFn delta_emd(const EmpiricalPpf& q_mixed, const EmpiricalPpf& q_synth) {
    if (q_mixed.resolution() != q_synth.resolution()) {
        throw std::invalid_argument("incompatible PPFs: grid resolutions differ");
    }
    std::vector<double> d(q_mixed.q_values().size());
    for (std::size_t j = 0; j < d.size(); ++j) {
        d[j] = std::fabs(q_synth.q_values()[j] - q_mixed.q_values()[j]);
    }
    return DiscrepancyFn(q_mixed.resolution(), std::move(d));
}

RDistribution sample_r_distribution(const HbParams& params, std::uint64_t seed,
                                    const RDistOptions& options) {
    if (!(options.rel_se_target > 0.0) || !(options.rel_se_target < 1.0)) {
        throw std::invalid_argument("rel_se_target must be in (0, 1)");
    }
    const HbProcess process(params);

    RDistribution out;
    out.c = params.c;
    out.seed = seed;
    out.tolerance_met = false;

    const auto eval_range = [&](std::size_t begin, std::size_t end, std::vector<double>& dst) {
        for (std::size_t i = begin; i < end; ++i) {
            const PpfRealization q = process.sample(key_hash({seed, i}));
            dst[i] = risk(std::span<const double>(q.dyadic_values));
        }
    };

    while (out.risks.size() < options.m_max) {
        const std::size_t begin = out.risks.size();
        const std::size_t end = std::min(begin + options.batch_size, options.m_max);
        out.risks.resize(end);
        const int workers = std::max(1, options.n_threads);
        if (workers == 1 || end - begin < 2) {
            eval_range(begin, end, out.risks);
        } else {
            // Realization i is a pure function of (params, seed, i): any split
            // over indices yields identical results.
            std::vector<std::thread> pool;
            const std::size_t chunk = (end - begin + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::size_t b = begin + chunk * static_cast<std::size_t>(w);
                const std::size_t e = std::min(b + chunk, end);
                if (b >= e) break;
                pool.emplace_back([&, b, e] { eval_range(b, e, out.risks); });
            }
            for (auto& t : pool) t.join();
        }

        const double mean = mean_of(out.risks);
        const double se = sample_std(out.risks, mean) / std::sqrt(static_cast<double>(out.risks.size()));
        out.rel_se = (std::fabs(mean) < 1e-300) ? se : se / std::fabs(mean);
        if (out.risks.size() >= options.m_min && out.rel_se < options.rel_se_target) {
            out.tolerance_met = true;
            break;
        }
    }
    out.sample_count = out.risks.size();
    return out;
}

double bemd(std::vector<double> a_risks, std::vector<double> b_risks) {
    if (a_risks.size() < 2 || b_risks.size() < 2) {
        throw std::invalid_argument("bemd requires at least 2 risks per distribution");
    }
    std::sort(a_risks.begin(), a_risks.end());
    std::sort(b_risks.begin(), b_risks.end());
    const std::uint64_t halves = pair_score_halves(a_risks, b_risks);
    const std::uint64_t total = 2 * static_cast<std::uint64_t>(a_risks.size()) *
                                static_cast<std::uint64_t>(b_risks.size());
    // p = halves/total, computed as 0.5 +/- t with t snapped to the 2^-53 grid
    // so that bemd(a,b) + bemd(b,a) == 1 holds exactly in IEEE754.
    const double t = (static_cast<double>(halves) - 0.5 * static_cast<double>(total)) /
                     static_cast<double>(total);
    const double snapped = (0.5 + std::fabs(t)) - 0.5;
    return t < 0.0 ? 0.5 - snapped : 0.5 + snapped;
}

double bemd(const RDistribution& a, const RDistribution& b) {
    return bemd(a.risks, b.risks);
}

RDistribution bootstrap_risk(const LossSamples& losses, std::size_t n_resamples, std::uint64_t seed) {
    if (n_resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");
    const auto& v = losses.values();
    const std::size_t n = v.size();
    RDistribution out;
    out.c = 0.0;
    out.seed = seed;
    out.risks.resize(n_resamples);
    for (std::size_t b = 0; b < n_resamples; ++b) {
        RngStream rng(key_hash({seed, b}));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % n);
            sum += v[idx];
        }
        out.risks[b] = sum / static_cast<double>(n);
    }
    out.sample_count = n_resamples;
    out.tolerance_met = true;
    return out;
}

std::string rdistribution_to_json(const RDistribution& r, const std::string& model_id) {
    nlohmann::ordered_json j;
    j["model_id"] = model_id;
    j["c"] = r.c;
    j["seed"] = r.seed;
    j["sample_count"] = r.sample_count;
    j["tolerance_met"] = r.tolerance_met;
    j["rel_se"] = r.rel_se;
    j["risks"] = r.risks;
    return j.dump(2) + "\n";
}

RDistribution rdistribution_from_json(const std::string& text, std::string* model_id) {
    const auto j = nlohmann::ordered_json::parse(text);
    RDistribution r;
    if (model_id != nullptr) *model_id = j.at("model_id").get<std::string>();
    r.c = j.at("c").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.sample_count = j.at("sample_count").get<std::size_t>();
    r.tolerance_met = j.at("tolerance_met").get<bool>();
    r.rel_se = j.at("rel_se").get<double>();
    r.risks = j.at("risks").get<std::vector<double>>();
    return r;
}

}  // namespace emdsel
