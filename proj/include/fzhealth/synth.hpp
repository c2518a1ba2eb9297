#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fzhealth/ingest.hpp"

namespace fzh {

enum class WindModel {
    uniform,  // iid uniform over [wind_lo, wind_hi]
    ar1,      // first-order autoregressive, reflected at the bounds
};

/// Cubic ramp between cut-in and rated wind, flat at rated power above it.
struct PowerCurve {
    double cut_in = 3.0;        // m/s
    double rated_wind = 10.0;   // m/s
    double rated_power = 333333.0;

    double operator()(double wind) const noexcept;
};

/// Power drop (in power units) applied to every sample at or after
/// `at_fraction` of the series. Zero disables it.
struct StepChange {
    double at_fraction = 0.5;
    double amount = 0.0;
};

struct SynthConfig {
    std::size_t samples = 50000;
    std::chrono::seconds sampling_period{600};
    Timestamp start = std::chrono::sys_days{std::chrono::year{2016} / 1 / 1};
    std::string turbine_id = "SYN01";

    WindModel wind_model = WindModel::ar1;
    double wind_lo = 3.0;
    double wind_hi = 12.0;
    double ar_coefficient = 0.9;  // lag-1 correlation of the AR(1) model
    double ar_sigma = 0.8;        // innovation standard deviation, m/s

    std::vector<double> temp_centers{15.0, 18.0, 22.0, 27.0};
    double temp_spread = 1.0;  // standard deviation around the chosen center

    PowerCurve curve{};
    double degradation = 0.0;  // relative loss per sample, applied as (1 - d)^t
    double noise = 0.0;        // relative standard deviation of multiplicative noise
    StepChange step{};
    std::uint64_t seed = 1;
};

/// Throws ConfigError when a field is out of range.
void validate(const SynthConfig& config);

/// power_t = curve(wind_t) * (1 - degradation)^t * (1 + noise * N(0,1)) - step,
/// floored at zero. Deterministic for a given seed.
SeriesSet generate_scada(const SynthConfig& config);

}  // namespace fzh
