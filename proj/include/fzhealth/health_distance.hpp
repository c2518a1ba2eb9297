#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fzhealth/concepts.hpp"
#include "fzhealth/fcm.hpp"
#include "fzhealth/table.hpp"

namespace fzh {

/// Centroids of one rank across windows, in window order.
struct RankCentroidSeries {
    std::size_t rank = 0;
    std::vector<DeltaPoint> centroids;
};

RankCentroidSeries rank_centroid_series(std::span<const WindowConcepts> windows, std::size_t rank);

/// Two-cluster summary of one rank; `low.z <= high.z`.
struct CentroidPair {
    std::size_t rank = 0;
    DeltaPoint low;
    DeltaPoint high;
};

/// Runs FCM with two clusters over the series and orders the result by z
/// (ties: dz ascending). The input is put in canonical (z, dz) order first, so
/// any permutation of the same centroids gives the same pair.
/// Throws std::invalid_argument when fewer than 2 centroids are given.
CentroidPair secondary_clustering(const RankCentroidSeries& series, FcmParams params);

/// Per-dimension min/max for x' = (x - min) / (max - min).
struct NormBounds {
    double z_min = 40000.0;
    double z_max = 100000.0;
    double dz_min = -20000.0;
    double dz_max = 20000.0;
};

/// Affine min-max map per coordinate; no clamping. Throws std::invalid_argument
/// unless max > min in both dimensions.
DeltaPoint normalize_coords(const DeltaPoint& v, const NormBounds& bounds);
bool within_unit_box(const DeltaPoint& v) noexcept;

enum class DistanceMetric { euclidean, manhattan };

double distance(const DeltaPoint& a, const DeltaPoint& b, DistanceMetric metric) noexcept;

struct DistanceIndex {
    double value = 0.0;
    std::vector<double> components;  // index r-1 for rank r
};

/// Sum over ranks of d(low, high). Pairs must cover ranks 1..n exactly once;
/// throws std::invalid_argument otherwise.
DistanceIndex distance_index(std::span<const CentroidPair> pairs, DistanceMetric metric = DistanceMetric::euclidean);

enum class DiNormalization {
    coordinates,  // normalize centroid coordinates, then measure distances
    scalar,       // measure raw distances, then divide by the power range
};

struct DistanceConfig {
    FcmParams fcm{};  // clusters is forced to 2; seed is the base seed
    NormBounds bounds{};
    DistanceMetric metric = DistanceMetric::euclidean;
    DiNormalization normalization = DiNormalization::coordinates;
};

struct SubBinDistance {
    std::vector<CentroidPair> raw_pairs;
    std::vector<CentroidPair> normalized_pairs;
    DistanceIndex index;
    bool outside_bounds = false;  // some normalized coordinate left [0, 1]
};

/// Secondary clustering of every rank followed by the distance index.
/// Needs at least two windows.
SubBinDistance subbin_distance(std::span<const WindowConcepts> windows, const DistanceConfig& config,
                               std::uint64_t subbin_id = 0);

/// Temperature rows x wind columns with row sums, column sums and grand total.
HealthTable di_table(std::span<const SubBinValue> values, std::vector<std::string> temp_labels,
                     std::vector<std::string> wind_labels, std::string title = "distance index");

/// Labels the centers of an n x n grid over [0,1]^2 by the nearest of all
/// low/high concepts. Rows "ix,iy,z,dz,label,rank"; ties go to L.
void emit_region_map(std::span<const CentroidPair> pairs, std::size_t grid, std::ostream& out);
void emit_region_map(std::span<const CentroidPair> pairs, std::size_t grid, const std::filesystem::path& path);

}  // namespace fzh
