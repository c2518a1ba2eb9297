#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fzhealth/binning.hpp"
#include "fzhealth/concepts.hpp"
#include "fzhealth/health_distance.hpp"
#include "fzhealth/health_regression.hpp"
#include "fzhealth/ingest.hpp"
#include "fzhealth/preprocess.hpp"
#include "fzhealth/table.hpp"

namespace fzh {

/// Every setting of an analysis run. Defaults follow the case-study setup:
/// C = 3, m = 2, four temperature clusters, wind bins [5, 7.5) by 0.5, R = 20.
struct RunConfig {
    std::vector<std::string> inputs;
    ColumnMap columns{};
    CsvOptions csv{};
    std::vector<std::string> turbines;  // empty = all

    double wind_min = 4.5;
    double wind_max = 9.0;

    double wind_bin_start = 5.0;
    double wind_bin_end = 7.5;
    double wind_bin_width = 0.5;
    std::size_t temp_clusters = 4;
    bool share_temp_centroids = false;

    std::size_t windows = 20;
    std::optional<std::size_t> window_length;
    std::size_t concepts = 3;
    std::size_t min_delta_points = 8;
    double fuzzifier = 2.0;
    double fcm_eps = 1e-6;
    std::size_t fcm_max_iter = 300;
    std::uint64_t seed = 1;

    NormBounds bounds{};
    DistanceMetric di_metric = DistanceMetric::euclidean;
    DiNormalization di_normalization = DiNormalization::coordinates;
    std::size_t region_grid = 100;

    double slope_scale = kSlopeScale;
    bool include_moderate = false;

    std::string output_dir = "fzhealth-out";
};

/// Throws ConfigError for out-of-range settings.
void validate(const RunConfig& config);

ConceptConfig concept_config(const RunConfig& config);
DistanceConfig distance_config(const RunConfig& config);

struct SubBinResult {
    std::size_t id = 0;
    std::size_t wind_index = 0;
    std::size_t temp_index = 0;
    WindBin wind_bin;
    TempCluster temp_cluster;
    std::size_t samples = 0;

    bool skipped = false;
    std::string skip_reason;

    std::vector<WindowConcepts> windows;
    RegressionIndex high;
    RegressionIndex low;
    std::optional<RegressionIndex> moderate;
    std::optional<SubBinDistance> distance;  // absent when only one window
};

struct TurbineAnalysis {
    std::string turbine_id;
    std::size_t records = 0;
    std::size_t removed_by_wind_range = 0;
    std::size_t removed_by_iqr = 0;
    std::size_t clean_records = 0;
    double ratio_q1 = 0.0;
    double ratio_q3 = 0.0;
    std::vector<TempCluster> temp_clusters;
    std::vector<WindBin> wind_bins;
    std::size_t discarded_outside_bins = 0;
    std::vector<std::optional<std::size_t>> record_subbin;  // sub-bin of each clean record
    std::vector<Timestamp> clean_timestamps;
    std::vector<SubBinResult> subbins;

    HealthTable high_table;
    HealthTable low_table;
    std::optional<HealthTable> moderate_table;
    HealthTable di_table;

    std::vector<std::string> temp_labels() const;
    std::vector<std::string> wind_labels() const;
};

struct AnalysisResult {
    IngestStats ingest;
    std::vector<TurbineAnalysis> turbines;
};

/// Runs one sub-bin: concepts, both regression indexes and the distance
/// index. Too little data (or a failed window) marks the result skipped.
SubBinResult analyze_subbin(const SubBin& subbin, const RunConfig& config);

/// Preprocess, bin and analyze every selected turbine. Errors carry the
/// stage and turbine in their message and keep their category.
AnalysisResult analyze(const SeriesSet& series, const RunConfig& config, const IngestStats& ingest = {});

/// Loads every input file and merges the series.
LoadResult load_inputs(const RunConfig& config);

}  // namespace fzh
