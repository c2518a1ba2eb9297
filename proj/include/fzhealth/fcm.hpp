#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fzhealth/matrix.hpp"

namespace fzh {

struct FcmParams {
    std::size_t clusters = 3;
    double fuzzifier = 2.0;  // m, must be > 1
    double eps = 1e-6;       // stop once max |U_new - U| < eps
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

struct FcmResult {
    Matrix centroids;    // C x dim
    Matrix memberships;  // n x C, rows sum to 1
    std::vector<double> objective_history;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Fuzzy c-means by alternating centroid and membership updates, starting
/// from a random row-stochastic U drawn from `params.seed`.
///
/// Each iteration computes the centroids from U, then U from the centroids,
/// and records J_m for the new pair; the loop ends when the largest change
/// in U drops below eps or after max_iter iterations. The returned
/// memberships are exactly those of the returned centroids.
///
/// Throws std::invalid_argument for fewer points than clusters, C == 0,
/// m <= 1 or eps <= 0, and NumericalError for non-finite input.
FcmResult fcm_fit(const Matrix& points, const FcmParams& params);

/// Membership of one point to every centroid. A point that coincides with
/// one or more centroids belongs to them crisply (shared equally).
std::vector<double> fcm_membership(std::span<const double> point, const Matrix& centroids, double fuzzifier);

Matrix fcm_memberships(const Matrix& points, const Matrix& centroids, double fuzzifier);

/// Weighted means with weights mu^m. A cluster with zero total weight keeps
/// its entry from `previous` when given.
Matrix fcm_centroids(const Matrix& points, const Matrix& memberships, double fuzzifier,
                     const Matrix* previous = nullptr);

/// J_m = sum_i sum_j mu_ij^m * ||z_i - v_j||^2.
double fcm_objective(const Matrix& points, const Matrix& centroids, const Matrix& memberships, double fuzzifier);

/// Random row-stochastic n x C matrix.
Matrix random_partition(std::size_t n, std::size_t clusters, std::uint64_t seed);

}  // namespace fzh
