#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emdsel/rng.hpp"

namespace emdsel::blackbody {

// CODATA 2018 (exact by definition since the 2019 SI).
inline constexpr double kPlanckConstant = 6.62607015e-34;   // J s
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kBoltzmannConstant = 1.380649e-23;  // J/K

// Units: wavelengths in micrometers, spectral radiance in kW/m^2/nm/sr.
// (SI W/m^2/m/sr -> kW/m^2/nm/sr is a factor 1e-12; kept in one place here.)
inline constexpr double kRadianceSiToKwM2NmSr = 1e-12;

enum class Family { kPlanck, kRayleighJeans };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Planck spectral radiance.  Evaluated with expm1 for long-wavelength
// accuracy; at tiny lambda*T the exponential is handled in log space and the
// result underflows to 0.
double planck_radiance(double lambda_um, double temperature_k);

// Rayleigh-Jeans spectral radiance 2*c*k_B*T/lambda^4.
double rj_radiance(double lambda_um, double temperature_k);

double radiance(Family f, double lambda_um, double temperature_k);

// True data-generating process: Poisson counting observation of a Planck (or
// chosen) radiator, plus a constant bias the candidates do not model.
struct TrueProcessParams {
    double s = 1e5;           // sensor gain, m^2 nm photons sr / kW
    double temperature = 4000.0;  // K
    double bias = 0.0;        // kW/m^2/nm/sr
    double lambda_min = 20.0;  // um
    double lambda_max = 1000.0;
    std::size_t sample_count = 4096;
    Family physical_model = Family::kPlanck;

    void validate() const;
};

struct DataPoint {
    double lambda_um;
    double radiance;
};
using Dataset = std::vector<DataPoint>;

// lambda on a uniform sample_count-point grid over [lambda_min, lambda_max];
// B = Poisson(s * B_phys(lambda, T))/s + bias.  Deterministic given seed; each
// point draws from its own keyed stream.
Dataset generate_dataset(const TrueProcessParams& params, std::uint64_t seed);

// Candidate observation model: family radiance plus additive Gaussian noise.
struct CandidateModel {
    Family family = Family::kPlanck;
    double temperature = 4000.0;  // K
    double sigma = 1.0;           // noise std, kW/m^2/nm/sr

    double predict(double lambda_um) const { return radiance(family, lambda_um, temperature); }
};

// Negative log likelihood of one point under the candidate's Gaussian model.
double gaussian_loss(const DataPoint& point, const CandidateModel& model);

std::vector<double> losses_on(const Dataset& data, const CandidateModel& model);

// Synthetic replica of `data`'s wavelength grid drawn from the candidate's own
// observation model.
Dataset generate_candidate_dataset(const CandidateModel& model, const Dataset& reference,
                                   std::uint64_t seed);

inline constexpr double kFitTemperatureMin = 1000.0;  // K, search bracket
inline constexpr double kFitTemperatureMax = 5000.0;

// Full MLE: sigma has the closed form RMS residual given T; T minimizes the
// profile negative log likelihood over the bracket, searched in log space to
// 1e-6 relative.  Throws "singular likelihood" when residuals vanish.
CandidateModel fit_mle(const Dataset& data, Family family);

// Calibration-style fit: T is fixed, only the noise scale is estimated.
CandidateModel fit_sigma_given_t(const Dataset& data, Family family, double temperature);

// CSV with header "lambda_um,radiance".
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

}  // namespace emdsel::blackbody
