#include "fzhealth/health_regression.hpp"

#include <stdexcept>

namespace fzh {

MembershipSequence concat_memberships(std::span<const WindowConcepts> windows, std::size_t rank) {
    if (windows.empty()) throw std::invalid_argument("concat_memberships: no windows");
    MembershipSequence seq;
    seq.rank = rank;
    for (const auto& w : windows) {
        const auto& u = w.memberships;
        if (rank == 0 || rank > u.cols()) throw std::invalid_argument("concat_memberships: rank out of range");
        for (std::size_t i = 0; i < u.rows(); ++i) seq.values.push_back(u(i, rank - 1));
    }
    return seq;
}

RegressionIndex ols_slope(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("ols_slope: need at least 2 values");
    const double nd = static_cast<double>(n);
    const double x_mean = (nd + 1.0) / 2.0;
    const double sxx = nd * (nd * nd - 1.0) / 12.0;

    // sum (x_i - x_mean) * y_i paired from both ends: (x_i - x_mean) = -(x_{n+1-i} - x_mean)
    double sxy = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double dx = static_cast<double>(i + 1) - x_mean;
        sxy += dx * (y[i] - y[n - 1 - i]);
    }
    double y_sum = 0.0;
    for (double v : y) y_sum += v;

    RegressionIndex r;
    r.n = n;
    r.slope = sxy / sxx;
    r.intercept = y_sum / nd - r.slope * x_mean;
    return r;
}

RegressionIndex ols_slope(const MembershipSequence& seq) {
    auto r = ols_slope(std::span<const double>(seq.values));
    r.rank = seq.rank;
    return r;
}

HealthTable regression_table(std::span<const SubBinValue> slopes, std::vector<std::string> temp_labels,
                             std::vector<std::string> wind_labels, double scale, std::string title) {
    return make_table(std::move(title), std::move(temp_labels), std::move(wind_labels), slopes, scale, false);
}

}  // namespace fzh
