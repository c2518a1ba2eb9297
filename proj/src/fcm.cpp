#include "fzhealth/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fzhealth/errors.hpp"

namespace fzh {

namespace {

void check_fuzzifier(double m) {
    if (!(m > 1.0) || !std::isfinite(m)) throw std::invalid_argument("fcm: fuzzifier must be finite and > 1");
}

// mu^m without calling pow for the common m = 2
double weight(double mu, double m) { return m == 2.0 ? mu * mu : std::pow(mu, m); }

}  // namespace

Matrix random_partition(std::size_t n, std::size_t clusters, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix U(n, clusters);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = U.row(i);
        double s = 0.0;
        for (auto& v : row) {
            v = u(rng) + 1e-12;
            s += v;
        }
        for (auto& v : row) v /= s;
    }
    return U;
}

std::vector<double> fcm_membership(std::span<const double> point, const Matrix& centroids, double fuzzifier) {
    check_fuzzifier(fuzzifier);
    if (centroids.rows() == 0) throw std::invalid_argument("fcm_membership: no centroids");
    if (centroids.cols() != point.size()) throw std::invalid_argument("fcm_membership: dimension mismatch");
    const std::size_t c = centroids.rows();
    std::vector<double> d2(c);
    for (std::size_t j = 0; j < c; ++j) d2[j] = squared_distance(point, centroids.row(j));
    if (std::any_of(d2.begin(), d2.end(), [](double v) { return !std::isfinite(v); }))
        throw NumericalError("fcm_membership: non-finite distance");

    std::vector<double> mu(c, 0.0);
    const auto zeros = static_cast<std::size_t>(std::count(d2.begin(), d2.end(), 0.0));
    if (zeros > 0) {
        for (std::size_t j = 0; j < c; ++j) mu[j] = d2[j] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
        return mu;
    }
    // (d_j / d_k)^(2/(m-1)) == (d2_j / d2_k)^(1/(m-1)); scaled by the nearest distance to stay in (0, 1]
    const double expo = 1.0 / (fuzzifier - 1.0);
    const double dmin = *std::min_element(d2.begin(), d2.end());
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
        const double ratio = dmin / d2[j];
        mu[j] = expo == 1.0 ? ratio : std::pow(ratio, expo);
        total += mu[j];
    }
    for (auto& v : mu) v /= total;
    return mu;
}

Matrix fcm_memberships(const Matrix& points, const Matrix& centroids, double fuzzifier) {
    Matrix U(points.rows(), centroids.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto mu = fcm_membership(points.row(i), centroids, fuzzifier);
        std::copy(mu.begin(), mu.end(), U.row(i).begin());
    }
    return U;
}

Matrix fcm_centroids(const Matrix& points, const Matrix& memberships, double fuzzifier, const Matrix* previous) {
    if (memberships.rows() != points.rows()) throw std::invalid_argument("fcm_centroids: shape mismatch");
    const std::size_t c = memberships.cols();
    const std::size_t dim = points.cols();
    Matrix V(c, dim);
    std::vector<double> denom(c, 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto z = points.row(i);
        for (std::size_t j = 0; j < c; ++j) {
            const double w = weight(memberships(i, j), fuzzifier);
            denom[j] += w;
            auto v = V.row(j);
            for (std::size_t d = 0; d < dim; ++d) v[d] += w * z[d];
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        if (denom[j] > 0.0) {
            for (auto& v : V.row(j)) v /= denom[j];
        } else if (previous != nullptr) {
            std::copy(previous->row(j).begin(), previous->row(j).end(), V.row(j).begin());
        } else {
            throw NumericalError("fcm_centroids: cluster with zero total membership");
        }
    }
    return V;
}

double fcm_objective(const Matrix& points, const Matrix& centroids, const Matrix& memberships, double fuzzifier) {
    if (memberships.rows() != points.rows() || memberships.cols() != centroids.rows() ||
        centroids.cols() != points.cols())
        throw std::invalid_argument("fcm_objective: shape mismatch");
    double j_m = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t j = 0; j < centroids.rows(); ++j) {
            j_m += weight(memberships(i, j), fuzzifier) * squared_distance(points.row(i), centroids.row(j));
        }
    }
    return j_m;
}

FcmResult fcm_fit(const Matrix& points, const FcmParams& params) {
    if (params.clusters == 0) throw std::invalid_argument("fcm_fit: need at least one cluster");
    if (points.rows() < params.clusters) throw std::invalid_argument("fcm_fit: fewer points than clusters");
    check_fuzzifier(params.fuzzifier);
    if (!(params.eps > 0.0)) throw std::invalid_argument("fcm_fit: eps must be > 0");
    if (!all_finite(points)) throw NumericalError("fcm_fit: non-finite input point");

    FcmResult res;
    res.memberships = random_partition(points.rows(), params.clusters, params.seed);
    for (std::size_t it = 0; it < params.max_iter; ++it) {
        res.centroids = fcm_centroids(points, res.memberships, params.fuzzifier, it == 0 ? nullptr : &res.centroids);
        Matrix next = fcm_memberships(points, res.centroids, params.fuzzifier);
        const double change = max_abs_diff(next, res.memberships);
        res.memberships = std::move(next);
        res.objective_history.push_back(fcm_objective(points, res.centroids, res.memberships, params.fuzzifier));
        res.iterations = it + 1;
        if (change < params.eps) {
            res.converged = true;
            break;
        }
    }
    if (res.iterations == 0) {
        res.centroids = fcm_centroids(points, res.memberships, params.fuzzifier);
    }
    if (!all_finite(res.centroids) || !all_finite(res.memberships)) throw NumericalError("fcm_fit: diverged");
    return res;
}

}  // namespace fzh
