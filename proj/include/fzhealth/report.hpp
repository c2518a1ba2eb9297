#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fzhealth/pipeline.hpp"

namespace fzh {

using Json = nlohmann::ordered_json;

/// Effective configuration as JSON. The output directory is left out so
/// runs that differ only in where they write produce identical reports.
Json config_to_json(const RunConfig& config);

/// Overlays keys present in `j` onto `config`. Unknown keys are a ConfigError.
void apply_config_json(const Json& j, RunConfig& config);

Json analysis_to_json(const AnalysisResult& result, const RunConfig& config);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

std::string sha256_file(const std::filesystem::path& path);

/// Writes every table, scatter, region map and audit file, then report.json
/// whose "manifest" lists each other file with its content hash.
std::vector<ManifestEntry> write_outputs(const AnalysisResult& result, const RunConfig& config,
                                         const std::filesystem::path& out_dir);

/// Equal-width histogram rows "lower,upper,count".
void emit_histogram(std::span<const double> values, std::size_t bins, std::ostream& out);

/// Files for external plotting: power-vs-wind at each cleaning stage and a
/// temperature histogram, per turbine. Returns the written paths.
std::vector<std::filesystem::path> write_plot_data(const SeriesSet& series, const RunConfig& config,
                                                   const std::filesystem::path& out_dir, std::size_t hist_bins = 30);

struct RankedTurbine {
    std::string turbine_id;
    std::string source;  // report path
    double di_total = 0.0;
    double high_slope_sum = 0.0;
    double low_slope_sum = 0.0;
};

struct Comparison {
    std::vector<RankedTurbine> by_distance;  // DI grand total ascending
    std::vector<RankedTurbine> by_slope;     // summed high-rank slopes descending
};

/// Ranks turbines from reports produced with the same settings. Ties keep
/// turbine-id order. Throws ConfigError on a settings mismatch or when the
/// reports hold fewer than two turbines in total.
Comparison compare_reports(std::span<const Json> reports, std::span<const std::string> sources);
Comparison compare_report_files(std::span<const std::filesystem::path> paths);
void print_comparison(const Comparison& cmp, std::ostream& out);

}  // namespace fzh
