#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They follow textbook formulas directly and share no code with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

// Membership of x to each centroid: 1 / sum_k (|x-v_j| / |x-v_k|)^(2/(m-1)),
// crisp when x sits on a centroid (shared equally among coincident ones).
inline std::vector<double> membership(const std::vector<double>& x, const Points& v, double m) {
    const std::size_t c = v.size();
    std::vector<double> d(c), u(c, 0.0);
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < c; ++j) {
        d[j] = std::sqrt(sqdist(x, v[j]));
        if (d[j] == 0.0) ++zeros;
    }
    if (zeros > 0) {
        for (std::size_t j = 0; j < c; ++j) u[j] = d[j] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
        return u;
    }
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < c; ++k) s += std::pow(d[j] / d[k], 2.0 / (m - 1.0));
        u[j] = 1.0 / s;
    }
    return u;
}

inline Points centroids(const Points& x, const Points& u, double m) {
    const std::size_t c = u.front().size();
    const std::size_t dim = x.front().size();
    Points v(c, std::vector<double>(dim, 0.0));
    for (std::size_t j = 0; j < c; ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double um = std::pow(u[i][j], m);
            w += um;
            for (std::size_t d = 0; d < dim; ++d) v[j][d] += um * x[i][d];
        }
        for (std::size_t d = 0; d < dim; ++d) v[j][d] /= w;
    }
    return v;
}

inline double objective(const Points& x, const Points& v, const Points& u, double m) {
    double j = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) {
            double s = 0.0;
            for (std::size_t d = 0; d < x[i].size(); ++d) s += (x[i][d] - v[k][d]) * (x[i][d] - v[k][d]);
            j += std::pow(u[i][k], m) * s;
        }
    return j;
}

struct Line {
    double slope;
    double intercept;
};

// Least squares through the 2x2 normal equations for y = a x + b, x = 1..N,
// accumulated in long double.
inline Line normal_equations(const std::vector<double>& y) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const long double x = static_cast<long double>(i + 1);
        n += 1;
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const long double det = n * sxx - sx * sx;
    const long double a = (n * sxy - sx * sy) / det;
    const long double b = (sxx * sy - sx * sxy) / det;
    return {static_cast<double>(a), static_cast<double>(b)};
}

}  // namespace oracle
