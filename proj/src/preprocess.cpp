#include "fzhealth/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fzh {

double power_wind_ratio(double power, double wind) {
    if (!(wind > 0.0) || !std::isfinite(wind) || !std::isfinite(power))
        throw std::domain_error("power_wind_ratio: wind speed must be positive and finite");
    return power / wind;
}

double quantile_linear(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile_linear: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile_linear: p outside [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

CleanSeries filter_wind_range(std::span<const SampleRecord> records, double w_min, double w_max) {
    if (!(w_min < w_max)) throw std::invalid_argument("filter_wind_range: requires w_min < w_max");
    CleanSeries out;
    out.records.reserve(records.size());
    for (const auto& r : records) {
        if (r.wind_speed >= w_min && r.wind_speed < w_max) out.records.push_back(r);
    }
    out.removed_by_wind_range = records.size() - out.records.size();
    return out;
}

CleanSeries iqr_ratio_filter(CleanSeries series) {
    if (series.size() < 4) throw std::invalid_argument("iqr_ratio_filter: at least 4 records are required");
    std::vector<double> ratios;
    ratios.reserve(series.size());
    for (const auto& r : series.records) ratios.push_back(power_wind_ratio(r.power, r.wind_speed));

    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile_linear(sorted, 0.25);
    const double q3 = quantile_linear(sorted, 0.75);

    CleanSeries out;
    out.removed_by_wind_range = series.removed_by_wind_range;
    out.ratio_q1 = q1;
    out.ratio_q3 = q3;
    out.records.reserve(series.size() / 2 + 1);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (ratios[i] >= q1 && ratios[i] <= q3) out.records.push_back(std::move(series.records[i]));
    }
    out.removed_by_iqr = series.removed_by_iqr + (series.size() - out.records.size());
    return out;
}

CleanSeries preprocess(std::span<const SampleRecord> records, const PreprocessConfig& config) {
    auto cut = filter_wind_range(records, config.wind_min, config.wind_max);
    if (cut.size() < 4) return cut;
    return iqr_ratio_filter(std::move(cut));
}

}  // namespace fzh
