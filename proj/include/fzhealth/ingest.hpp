#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fzh {

using Timestamp = std::chrono::sys_seconds;

/// One timestamped SCADA observation of a single turbine.
struct SampleRecord {
    Timestamp timestamp{};
    std::string turbine_id;
    double wind_speed = 0.0;   // m/s
    double temperature = 0.0;  // degrees C (or any substitute channel, e.g. air pressure)
    double power = 0.0;        // opaque power units

    bool operator==(const SampleRecord&) const = default;
};

/// Per-turbine, timestamp-sorted series.
struct SeriesSet {
    std::map<std::string, std::vector<SampleRecord>> turbines;
    std::chrono::seconds sampling_period{600};

    std::size_t total_records() const noexcept;
    bool operator==(const SeriesSet&) const = default;
};

/// Logical field -> CSV column name. When `constant_turbine_id` is set the
/// turbine column is not read and every row gets that id.
struct ColumnMap {
    std::string timestamp = "timestamp";
    std::string turbine_id = "turbine_id";
    std::string wind = "wind_speed";
    std::string temperature = "temperature";
    std::string power = "power";
    std::optional<std::string> constant_turbine_id;
};

struct CsvOptions {
    char delimiter = ',';
    // Empty means ISO-8601. Otherwise a std::get_time format string, interpreted as UTC.
    std::string timestamp_format;
};

struct IngestStats {
    std::size_t rows_read = 0;
    std::size_t dropped_invalid = 0;    // missing or unparsable mandatory field
    std::size_t dropped_duplicate = 0;  // repeated (turbine, timestamp); first occurrence kept

    std::size_t dropped() const noexcept { return dropped_invalid + dropped_duplicate; }
};

struct LoadResult {
    SeriesSet series;
    IngestStats stats;
};

/// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]" with optional "Z" or
/// "+HH:MM" offset (a space may replace the 'T'). Offsets are converted to UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);
std::optional<Timestamp> parse_timestamp(std::string_view text, const std::string& format);
std::string format_iso8601(Timestamp t);

/// Loads a header-row CSV. Throws DataError on a missing file, a missing
/// mapped column, or when no valid row remains.
LoadResult load_scada(const std::filesystem::path& path, const ColumnMap& columns = {},
                      const CsvOptions& options = {});
LoadResult load_scada(std::istream& in, const ColumnMap& columns = {}, const CsvOptions& options = {});

/// Writes the canonical schema (timestamp,turbine_id,wind_speed,temperature,power)
/// with round-trip precision for every numeric field.
void write_scada_csv(const SeriesSet& series, std::ostream& out);
void write_scada_csv(const SeriesSet& series, const std::filesystem::path& path);

/// Plain-text dropped-row report.
void write_ingest_report(const IngestStats& stats, std::ostream& out);

struct FieldRange {
    double min = 0.0;
    double max = 0.0;
};

struct TurbineSummary {
    std::string turbine_id;
    std::size_t count = 0;
    Timestamp first{};
    Timestamp last{};
    std::chrono::seconds span{0};
    FieldRange wind;
    FieldRange temperature;
    FieldRange power;
};

std::vector<TurbineSummary> summarize(const SeriesSet& series);

}  // namespace fzh
