#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fzhealth/concepts.hpp"
#include "fzhealth/table.hpp"

namespace fzh {

/// Memberships to one concept rank, concatenated over windows in time order.
struct MembershipSequence {
    std::size_t rank = 0;
    std::vector<double> values;
};

/// Least-squares line mu_i = slope * i + intercept over x = 1..n.
struct RegressionIndex {
    std::size_t rank = 0;
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n = 0;
};

/// Concatenates the membership column of `rank` (1 = high, C = low).
/// Throws std::invalid_argument for empty input or a rank outside 1..C.
MembershipSequence concat_memberships(std::span<const WindowConcepts> windows, std::size_t rank);

/// Closed-form OLS against x = 1..n. Reversing the input negates the slope
/// bit-exactly. Throws std::invalid_argument for n < 2.
RegressionIndex ols_slope(std::span<const double> values);
RegressionIndex ols_slope(const MembershipSequence& seq);

/// Default reporting multiplier.
inline constexpr double kSlopeScale = 1e5;

/// Rows = temperature clusters, columns = wind bins, cells = slope * scale,
/// with a "sum" row. Skipped sub-bins stay empty.
HealthTable regression_table(std::span<const SubBinValue> slopes, std::vector<std::string> temp_labels,
                             std::vector<std::string> wind_labels, double scale = kSlopeScale,
                             std::string title = "regression slope");

}  // namespace fzh
