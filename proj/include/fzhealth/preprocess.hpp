#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fzhealth/ingest.hpp"

namespace fzh {

/// Records surviving the wind-range cut and the interquartile ratio filter,
/// in their original order, plus how many each stage removed.
struct CleanSeries {
    std::vector<SampleRecord> records;
    std::size_t removed_by_wind_range = 0;
    std::size_t removed_by_iqr = 0;
    // Ratio thresholds of the last IQR pass (zero until one ran).
    double ratio_q1 = 0.0;
    double ratio_q3 = 0.0;

    bool empty() const noexcept { return records.empty(); }
    std::size_t size() const noexcept { return records.size(); }
};

struct PreprocessConfig {
    double wind_min = 4.5;
    double wind_max = 9.0;
};

/// p / w. Throws std::domain_error for w <= 0 or non-finite input.
double power_wind_ratio(double power, double wind);

/// Sample quantile by linear interpolation between order statistics
/// (h = (n-1)p, the "type 7" rule). `sorted` must be ascending and non-empty.
double quantile_linear(std::span<const double> sorted, double p);

/// Keeps records with w_min <= wind < w_max. An empty result is allowed;
/// callers check CleanSeries::empty(). Throws std::invalid_argument unless w_min < w_max.
CleanSeries filter_wind_range(std::span<const SampleRecord> records, double w_min, double w_max);

/// Keeps records whose power/wind ratio lies in [Q1, Q3] (closed) of the
/// ratio distribution of `series`. Stable. Throws std::invalid_argument for
/// fewer than 4 records.
CleanSeries iqr_ratio_filter(CleanSeries series);

/// Wind-range cut followed by the IQR filter.
CleanSeries preprocess(std::span<const SampleRecord> records, const PreprocessConfig& config);

}  // namespace fzh
