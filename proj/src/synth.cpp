#include "fzhealth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fzhealth/errors.hpp"

namespace fzh {

double PowerCurve::operator()(double wind) const noexcept {
    if (wind <= cut_in) return 0.0;
    if (wind >= rated_wind) return rated_power;
    const double lo = cut_in * cut_in * cut_in;
    const double hi = rated_wind * rated_wind * rated_wind;
    return rated_power * (wind * wind * wind - lo) / (hi - lo);
}

void validate(const SynthConfig& c) {
    if (c.samples == 0) throw ConfigError("synth: samples must be > 0");
    if (c.sampling_period.count() <= 0) throw ConfigError("synth: sampling period must be positive");
    if (!(c.wind_lo >= 0.0 && c.wind_lo < c.wind_hi)) throw ConfigError("synth: requires 0 <= wind_lo < wind_hi");
    if (!(c.ar_coefficient >= 0.0 && c.ar_coefficient < 1.0)) throw ConfigError("synth: AR coefficient must be in [0, 1)");
    if (!(c.ar_sigma >= 0.0)) throw ConfigError("synth: AR sigma must be >= 0");
    if (c.temp_centers.empty()) throw ConfigError("synth: at least one temperature center is required");
    if (!(c.temp_spread >= 0.0)) throw ConfigError("synth: temperature spread must be >= 0");
    if (!(c.curve.cut_in >= 0.0 && c.curve.cut_in < c.curve.rated_wind && c.curve.rated_power > 0.0))
        throw ConfigError("synth: power curve needs 0 <= cut_in < rated_wind and rated_power > 0");
    if (!(c.degradation >= 0.0 && c.degradation < 1.0)) throw ConfigError("synth: degradation must be in [0, 1)");
    if (!(c.noise >= 0.0)) throw ConfigError("synth: noise must be >= 0");
    if (!(c.step.at_fraction >= 0.0 && c.step.at_fraction <= 1.0)) throw ConfigError("synth: step position must be in [0, 1]");
    if (!std::isfinite(c.step.amount)) throw ConfigError("synth: step amount must be finite");
}

SeriesSet generate_scada(const SynthConfig& c) {
    validate(c);
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(c.wind_lo, c.wind_hi);
    std::uniform_int_distribution<std::size_t> center(0, c.temp_centers.size() - 1);

    const double mean = 0.5 * (c.wind_lo + c.wind_hi);
    const auto reflect = [&](double w) {
        const double span = c.wind_hi - c.wind_lo;
        // fold into [lo, hi] with period 2 * span
        double x = std::fmod(w - c.wind_lo, 2.0 * span);
        if (x < 0.0) x += 2.0 * span;
        if (x > span) x = 2.0 * span - x;
        return c.wind_lo + x;
    };
    const auto step_at = static_cast<std::size_t>(std::floor(c.step.at_fraction * static_cast<double>(c.samples)));
    const double log_keep = std::log1p(-c.degradation);

    SeriesSet set;
    set.sampling_period = c.sampling_period;
    auto& recs = set.turbines[c.turbine_id];
    recs.reserve(c.samples);
    double wind = c.wind_model == WindModel::ar1 ? mean : uniform(rng);
    for (std::size_t t = 0; t < c.samples; ++t) {
        if (c.wind_model == WindModel::uniform) {
            wind = uniform(rng);
        } else {
            wind = reflect(mean + c.ar_coefficient * (wind - mean) + c.ar_sigma * gauss(rng));
        }
        const double temp = c.temp_centers[center(rng)] + c.temp_spread * gauss(rng);
        const double eps = gauss(rng);

        double power = c.curve(wind) * std::exp(static_cast<double>(t) * log_keep) * (1.0 + c.noise * eps);
        if (c.step.amount != 0.0 && t >= step_at) power -= c.step.amount;

        SampleRecord r;
        r.timestamp = c.start + c.sampling_period * static_cast<std::int64_t>(t);
        r.turbine_id = c.turbine_id;
        r.wind_speed = wind;
        r.temperature = temp;
        r.power = std::max(power, 0.0);
        recs.push_back(std::move(r));
    }
    return set;
}

}  // namespace fzh
