#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fzhealth/ingest.hpp"
#include "fzhealth/matrix.hpp"
#include "fzhealth/preprocess.hpp"

namespace fzh {

/// Half-open wind interval [lower, upper).
struct WindBin {
    double lower = 0.0;
    double upper = 0.0;
    bool partial = false;  // trailing bin narrower than the configured width

    bool contains(double w) const noexcept { return w >= lower && w < upper; }
    std::string label() const;  // "[5.0, 5.5)"
};

/// Temperature interval (lower, upper] around a k-means centroid.
/// The outermost bounds are -inf / +inf.
struct TempCluster {
    double centroid = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double t) const noexcept { return t > lower && t <= upper; }
};

/// Contiguous bins [start, start+width), ... up to `end`. A trailing partial
/// bin appears only when the range is not a multiple of width.
/// Throws std::invalid_argument unless start < end and width > 0.
std::vector<WindBin> make_wind_bins(double start, double end, double width);

/// Index of the bin containing w, if any.
std::optional<std::size_t> find_wind_bin(std::span<const WindBin> bins, double w) noexcept;

struct KMeansResult {
    Matrix centroids;                     // k x dim
    std::vector<std::size_t> assignment;  // nearest centroid per point (ties -> lower index)
    std::vector<double> objective_history;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Lloyd's k-means with D^2-weighted seeding. An empty cluster is re-seeded
/// with the point farthest from its current centroid. Deterministic for a
/// given seed. Throws std::invalid_argument when k == 0 or there are fewer
/// points than k.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter = 300,
                    double tol = 0.0);

/// Intervals whose bounds are midpoints between consecutive centroids.
/// Throws std::invalid_argument if centroids are empty, unsorted or repeated.
std::vector<TempCluster> temperature_boundaries(std::span<const double> sorted_centroids);

/// Index of the interval containing t. Equivalent to nearest centroid with
/// ties going to the lower centroid.
std::size_t find_temp_cluster(std::span<const TempCluster> clusters, double t) noexcept;

/// Fits k-means to the temperatures and returns the sorted interval list.
std::vector<TempCluster> fit_temperature_clusters(std::span<const double> temperatures, std::size_t k,
                                                  std::uint64_t seed);

/// One wind-bin x temperature-cluster cell and its time-ordered samples.
struct SubBin {
    std::size_t id = 0;  // wind_index * n_temp + temp_index
    std::size_t wind_index = 0;
    std::size_t temp_index = 0;
    WindBin wind_bin;
    TempCluster temp_cluster;
    std::vector<SampleRecord> samples;
    std::vector<std::size_t> source_index;  // position of each sample in the clean series

    bool empty() const noexcept { return samples.empty(); }
};

struct SubBinPartition {
    std::vector<SubBin> subbins;  // ordered by id; empty cells are kept
    std::size_t discarded = 0;    // wind outside every bin
    std::vector<std::optional<std::size_t>> record_subbin;  // sub-bin id per clean record
};

SubBinPartition assign_subbins(const CleanSeries& series, std::span<const WindBin> wind_bins,
                               std::span<const TempCluster> temp_clusters);

}  // namespace fzh
