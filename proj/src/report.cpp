#include "fzhealth/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "fzhealth/errors.hpp"
#include "fzhealth/text.hpp"

namespace fzh {

namespace fs = std::filesystem;

namespace {

const char* to_string(DistanceMetric m) { return m == DistanceMetric::manhattan ? "manhattan" : "euclidean"; }
const char* to_string(DiNormalization n) { return n == DiNormalization::scalar ? "scalar" : "coordinates"; }

DistanceMetric metric_from(const std::string& s) {
    if (s == "euclidean") return DistanceMetric::euclidean;
    if (s == "manhattan") return DistanceMetric::manhattan;
    throw ConfigError("unknown distance metric: " + s);
}

DiNormalization normalization_from(const std::string& s) {
    if (s == "coordinates") return DiNormalization::coordinates;
    if (s == "scalar") return DiNormalization::scalar;
    throw ConfigError("unknown DI normalization: " + s);
}

Json bound_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json regression_json(const RegressionIndex& r) {
    return {{"slope", r.slope}, {"intercept", r.intercept}, {"n", r.n}};
}

Json point_json(const DeltaPoint& p) { return Json::array({p.z, p.dz}); }

Json table_json(const HealthTable& t) {
    Json cells = Json::array();
    for (const auto& row : t.cells) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(c ? Json(*c) : Json(nullptr));
        cells.push_back(std::move(r));
    }
    Json j = {{"title", t.title}, {"rows", t.row_labels}, {"columns", t.col_labels}, {"cells", std::move(cells)},
              {"column_sums", t.column_sums}};
    if (t.with_row_sums) j["row_sums"] = t.row_sums;
    j["total"] = t.total;
    return j;
}

// Directory-safe turbine id.
std::string safe_name(const std::string& id) {
    std::string out;
    for (char c : id) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    return out.empty() ? "turbine" : out;
}

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    return out;
}

void write_secondary(const SubBinDistance& d, std::size_t concepts, std::ostream& out) {
    out << "rank_label,cluster,z,dz,z_normalized,dz_normalized\n";
    for (std::size_t i = 0; i < d.raw_pairs.size(); ++i) {
        const auto& raw = d.raw_pairs[i];
        const auto& nrm = d.normalized_pairs[i];
        const auto label = rank_label(raw.rank, concepts);
        out << label << ",L," << format_exact(raw.low.z) << ',' << format_exact(raw.low.dz) << ','
            << format_exact(nrm.low.z) << ',' << format_exact(nrm.low.dz) << '\n';
        out << label << ",H," << format_exact(raw.high.z) << ',' << format_exact(raw.high.dz) << ','
            << format_exact(nrm.high.z) << ',' << format_exact(nrm.high.dz) << '\n';
    }
}

}  // namespace

Json config_to_json(const RunConfig& c) {
    Json j;
    j["inputs"] = c.inputs;
    Json cols = {{"timestamp", c.columns.timestamp},
                 {"turbine_id", c.columns.turbine_id},
                 {"wind", c.columns.wind},
                 {"temperature", c.columns.temperature},
                 {"power", c.columns.power}};
    cols["constant_turbine_id"] = c.columns.constant_turbine_id ? Json(*c.columns.constant_turbine_id) : Json(nullptr);
    j["columns"] = std::move(cols);
    j["csv"] = {{"delimiter", std::string(1, c.csv.delimiter)}, {"timestamp_format", c.csv.timestamp_format}};
    j["turbines"] = c.turbines;
    j["wind_min"] = c.wind_min;
    j["wind_max"] = c.wind_max;
    j["wind_bin_start"] = c.wind_bin_start;
    j["wind_bin_end"] = c.wind_bin_end;
    j["wind_bin_width"] = c.wind_bin_width;
    j["temp_clusters"] = c.temp_clusters;
    j["share_temp_centroids"] = c.share_temp_centroids;
    j["windows"] = c.windows;
    j["window_length"] = c.window_length ? Json(*c.window_length) : Json(nullptr);
    j["concepts"] = c.concepts;
    j["min_delta_points"] = c.min_delta_points;
    j["fuzzifier"] = c.fuzzifier;
    j["fcm_eps"] = c.fcm_eps;
    j["fcm_max_iter"] = c.fcm_max_iter;
    j["seed"] = c.seed;
    j["norm_power_min"] = c.bounds.z_min;
    j["norm_power_max"] = c.bounds.z_max;
    j["norm_dpower_min"] = c.bounds.dz_min;
    j["norm_dpower_max"] = c.bounds.dz_max;
    j["di_metric"] = to_string(c.di_metric);
    j["di_normalization"] = to_string(c.di_normalization);
    j["region_grid"] = c.region_grid;
    j["slope_scale"] = c.slope_scale;
    j["include_moderate"] = c.include_moderate;
    return j;
}

void apply_config_json(const Json& j, RunConfig& c) {
    if (!j.is_object()) throw ConfigError("config file must contain a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "inputs") c.inputs = v.get<std::vector<std::string>>();
            else if (key == "columns") {
                for (const auto& [ck, cv] : v.items()) {
                    if (ck == "timestamp") c.columns.timestamp = cv.get<std::string>();
                    else if (ck == "turbine_id") c.columns.turbine_id = cv.get<std::string>();
                    else if (ck == "wind") c.columns.wind = cv.get<std::string>();
                    else if (ck == "temperature") c.columns.temperature = cv.get<std::string>();
                    else if (ck == "power") c.columns.power = cv.get<std::string>();
                    else if (ck == "constant_turbine_id")
                        c.columns.constant_turbine_id =
                            cv.is_null() ? std::nullopt : std::optional<std::string>(cv.get<std::string>());
                    else throw ConfigError("unknown key in config.columns: " + ck);
                }
            } else if (key == "csv") {
                for (const auto& [ck, cv] : v.items()) {
                    if (ck == "delimiter") {
                        const auto d = cv.get<std::string>();
                        if (d.size() != 1) throw ConfigError("csv.delimiter must be a single character");
                        c.csv.delimiter = d[0];
                    } else if (ck == "timestamp_format") c.csv.timestamp_format = cv.get<std::string>();
                    else throw ConfigError("unknown key in config.csv: " + ck);
                }
            }
            else if (key == "turbines") c.turbines = v.get<std::vector<std::string>>();
            else if (key == "wind_min") c.wind_min = v.get<double>();
            else if (key == "wind_max") c.wind_max = v.get<double>();
            else if (key == "wind_bin_start") c.wind_bin_start = v.get<double>();
            else if (key == "wind_bin_end") c.wind_bin_end = v.get<double>();
            else if (key == "wind_bin_width") c.wind_bin_width = v.get<double>();
            else if (key == "temp_clusters") c.temp_clusters = v.get<std::size_t>();
            else if (key == "share_temp_centroids") c.share_temp_centroids = v.get<bool>();
            else if (key == "windows") c.windows = v.get<std::size_t>();
            else if (key == "window_length")
                c.window_length = v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>());
            else if (key == "concepts") c.concepts = v.get<std::size_t>();
            else if (key == "min_delta_points") c.min_delta_points = v.get<std::size_t>();
            else if (key == "fuzzifier") c.fuzzifier = v.get<double>();
            else if (key == "fcm_eps") c.fcm_eps = v.get<double>();
            else if (key == "fcm_max_iter") c.fcm_max_iter = v.get<std::size_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "norm_power_min") c.bounds.z_min = v.get<double>();
            else if (key == "norm_power_max") c.bounds.z_max = v.get<double>();
            else if (key == "norm_dpower_min") c.bounds.dz_min = v.get<double>();
            else if (key == "norm_dpower_max") c.bounds.dz_max = v.get<double>();
            else if (key == "di_metric") c.di_metric = metric_from(v.get<std::string>());
            else if (key == "di_normalization") c.di_normalization = normalization_from(v.get<std::string>());
            else if (key == "region_grid") c.region_grid = v.get<std::size_t>();
            else if (key == "slope_scale") c.slope_scale = v.get<double>();
            else if (key == "include_moderate") c.include_moderate = v.get<bool>();
            else if (key == "output_dir") c.output_dir = v.get<std::string>();
            else throw ConfigError("unknown config key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }
}

Json analysis_to_json(const AnalysisResult& result, const RunConfig& config) {
    Json j;
    j["tool"] = "fzhealth";
    j["format_version"] = 1;
    j["config"] = config_to_json(config);
    j["ingest"] = {{"rows_read", result.ingest.rows_read},
                   {"dropped_invalid", result.ingest.dropped_invalid},
                   {"dropped_duplicate", result.ingest.dropped_duplicate}};
    Json turbines = Json::array();
    Json skipped = Json::array();
    for (const auto& t : result.turbines) {
        Json tj;
        tj["turbine_id"] = t.turbine_id;
        tj["records"] = t.records;
        tj["cleaning"] = {{"removed_by_wind_range", t.removed_by_wind_range},
                          {"removed_by_iqr", t.removed_by_iqr},
                          {"clean_records", t.clean_records},
                          {"ratio_q1", t.ratio_q1},
                          {"ratio_q3", t.ratio_q3}};
        Json temps = Json::array();
        for (const auto& c : t.temp_clusters)
            temps.push_back({{"centroid", c.centroid}, {"lower", bound_or_null(c.lower)}, {"upper", bound_or_null(c.upper)}});
        tj["temperature_clusters"] = std::move(temps);
        Json bins = Json::array();
        for (const auto& b : t.wind_bins)
            bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"partial", b.partial}});
        tj["wind_bins"] = std::move(bins);
        tj["discarded_outside_bins"] = t.discarded_outside_bins;

        Json subs = Json::array();
        for (const auto& s : t.subbins) {
            Json sj;
            sj["id"] = s.id;
            sj["wind_index"] = s.wind_index;
            sj["temp_index"] = s.temp_index;
            sj["wind_bin"] = s.wind_bin.label();
            sj["temperature_centroid"] = s.temp_cluster.centroid;
            sj["samples"] = s.samples;
            sj["status"] = s.skipped ? "skipped" : "ok";
            if (s.skipped) {
                sj["reason"] = s.skip_reason;
                skipped.push_back({{"turbine_id", t.turbine_id},
                                   {"subbin", s.id},
                                   {"wind_bin", s.wind_bin.label()},
                                   {"temperature_centroid", s.temp_cluster.centroid},
                                   {"reason", s.skip_reason}});
            }
            if (!s.windows.empty()) {
                sj["windows"] = s.windows.size();
                std::size_t converged = 0;
                for (const auto& w : s.windows) converged += w.converged ? 1 : 0;
                sj["fcm_converged_windows"] = converged;
            }
            if (s.high.n > 0) {
                Json reg = {{"high", regression_json(s.high)}, {"low", regression_json(s.low)}};
                if (s.moderate) reg["moderate"] = regression_json(*s.moderate);
                sj["regression"] = std::move(reg);
            }
            if (s.distance) {
                const auto& d = *s.distance;
                Json pairs = Json::array();
                for (std::size_t i = 0; i < d.raw_pairs.size(); ++i) {
                    pairs.push_back({{"rank", d.raw_pairs[i].rank},
                                     {"low", point_json(d.raw_pairs[i].low)},
                                     {"high", point_json(d.raw_pairs[i].high)},
                                     {"low_normalized", point_json(d.normalized_pairs[i].low)},
                                     {"high_normalized", point_json(d.normalized_pairs[i].high)}});
                }
                sj["distance"] = {{"di", d.index.value},
                                  {"components", d.index.components},
                                  {"outside_bounds", d.outside_bounds},
                                  {"pairs", std::move(pairs)}};
            }
            subs.push_back(std::move(sj));
        }
        tj["subbins"] = std::move(subs);

        Json tables;
        tables["regression_high"] = table_json(t.high_table);
        tables["regression_low"] = table_json(t.low_table);
        if (t.moderate_table) tables["regression_moderate"] = table_json(*t.moderate_table);
        tables["distance_index"] = table_json(t.di_table);
        tj["tables"] = std::move(tables);
        tj["totals"] = {{"di_total", t.di_table.total},
                        {"high_slope_sum", t.high_table.total},
                        {"low_slope_sum", t.low_table.total}};
        turbines.push_back(std::move(tj));
    }
    j["turbines"] = std::move(turbines);
    j["skipped"] = std::move(skipped);
    return j;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file for hashing: " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw NumericalError("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

std::vector<ManifestEntry> write_outputs(const AnalysisResult& result, const RunConfig& config, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto track = [&](const fs::path& rel) { written.push_back(rel.generic_string()); };

    {
        const fs::path rel = "dropped_rows.txt";
        auto out = open_out(out_dir / rel);
        write_ingest_report(result.ingest, out);
        for (const auto& t : result.turbines) {
            out << "turbine " << t.turbine_id << ": removed by wind range " << t.removed_by_wind_range
                << ", removed by IQR filter " << t.removed_by_iqr << ", outside wind bins " << t.discarded_outside_bins
                << '\n';
        }
        track(rel);
    }

    for (const auto& t : result.turbines) {
        const fs::path base = safe_name(t.turbine_id);
        auto table = [&](const HealthTable& tab, const char* name) {
            const fs::path rel = base / name;
            auto out = open_out(out_dir / rel);
            write_table_csv(tab, out);
            track(rel);
        };
        table(t.high_table, "regression_high.csv");
        table(t.low_table, "regression_low.csv");
        if (t.moderate_table) table(*t.moderate_table, "regression_moderate.csv");
        table(t.di_table, "distance_index.csv");

        {
            const fs::path rel = base / "subbins.csv";
            auto out = open_out(out_dir / rel);
            out << "record_index,timestamp,wind_bin,temp_cluster,subbin\n";
            const std::size_t nt = t.temp_clusters.size();
            for (std::size_t i = 0; i < t.record_subbin.size(); ++i) {
                out << i << ',' << format_iso8601(t.clean_timestamps[i]) << ',';
                if (const auto& sb = t.record_subbin[i]) {
                    out << csv_field(t.wind_bins[*sb / nt].label()) << ',' << format_fixed(t.temp_clusters[*sb % nt].centroid, 2)
                        << ',' << *sb << '\n';
                } else {
                    out << ",,\n";
                }
            }
            track(rel);
        }

        for (const auto& s : t.subbins) {
            if (s.windows.empty()) continue;
            const std::string stem = "subbin_" + std::to_string(s.id) + ".csv";
            {
                const fs::path rel = base / "concepts" / stem;
                auto out = open_out(out_dir / rel);
                emit_concept_scatter(s.windows, out);
                track(rel);
            }
            if (s.distance) {
                {
                    const fs::path rel = base / "secondary" / stem;
                    auto out = open_out(out_dir / rel);
                    write_secondary(*s.distance, config.concepts, out);
                    track(rel);
                }
                if (config.region_grid > 0) {
                    const fs::path rel = base / "regions" / stem;
                    auto out = open_out(out_dir / rel);
                    emit_region_map(s.distance->normalized_pairs, config.region_grid, out);
                    track(rel);
                }
            }
        }
    }

    std::vector<ManifestEntry> manifest;
    for (const auto& rel : written) {
        const auto full = out_dir / rel;
        manifest.push_back({rel, sha256_file(full), static_cast<std::size_t>(fs::file_size(full))});
    }

    Json report = analysis_to_json(result, config);
    Json m = Json::array();
    for (const auto& e : manifest) m.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    report["manifest"] = std::move(m);
    auto out = open_out(out_dir / "report.json");
    out << report.dump(2) << '\n';
    return manifest;
}

void emit_histogram(std::span<const double> values, std::size_t bins, std::ostream& out) {
    if (bins == 0) throw std::invalid_argument("emit_histogram: bins must be >= 1");
    out << "lower,upper,count\n";
    if (values.empty()) return;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double width = (*mx > lo) ? (*mx - lo) / static_cast<double>(bins) : 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto k = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(k, bins - 1)]++;
    }
    for (std::size_t k = 0; k < bins; ++k) {
        out << format_exact(lo + static_cast<double>(k) * width) << ',' << format_exact(lo + static_cast<double>(k + 1) * width)
            << ',' << counts[k] << '\n';
    }
}

std::vector<fs::path> write_plot_data(const SeriesSet& series, const RunConfig& config, const fs::path& out_dir,
                                      std::size_t hist_bins) {
    std::vector<fs::path> written;
    auto scatter = [&](const fs::path& path, std::span<const SampleRecord> recs) {
        auto out = open_out(path);
        out << "timestamp,wind_speed,power\n";
        for (const auto& r : recs)
            out << format_iso8601(r.timestamp) << ',' << format_exact(r.wind_speed) << ',' << format_exact(r.power) << '\n';
        written.push_back(path);
    };
    for (const auto& [id, recs] : series.turbines) {
        if (!config.turbines.empty() && std::find(config.turbines.begin(), config.turbines.end(), id) == config.turbines.end())
            continue;
        const fs::path base = out_dir / safe_name(id);
        scatter(base / "power_curve_raw.csv", recs);
        const auto cut = filter_wind_range(recs, config.wind_min, config.wind_max);
        scatter(base / "power_curve_wind_range.csv", cut.records);
        if (cut.size() >= 4) scatter(base / "power_curve_clean.csv", iqr_ratio_filter(cut).records);

        std::vector<double> temps;
        for (const auto& r : recs) temps.push_back(r.temperature);
        const fs::path hist = base / "temperature_histogram.csv";
        auto out = open_out(hist);
        emit_histogram(temps, hist_bins, out);
        written.push_back(hist);
    }
    return written;
}

Comparison compare_reports(std::span<const Json> reports, std::span<const std::string> sources) {
    if (reports.empty()) throw ConfigError("compare: no reports given");
    auto settings = [](const Json& r) {
        Json c = r.at("config");
        for (const char* k : {"inputs", "turbines", "columns", "csv"}) c.erase(k);
        return c;
    };
    Comparison cmp;
    const Json reference = settings(reports.front());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (settings(reports[i]) != reference)
            throw ConfigError("compare: report '" + sources[i] + "' was produced with different settings");
        for (const auto& t : reports[i].at("turbines")) {
            const auto& tot = t.at("totals");
            cmp.by_distance.push_back({t.at("turbine_id").get<std::string>(), sources[i], tot.at("di_total").get<double>(),
                                       tot.at("high_slope_sum").get<double>(), tot.at("low_slope_sum").get<double>()});
        }
    }
    if (cmp.by_distance.size() < 2) throw ConfigError("compare: need at least two turbines across the reports");
    cmp.by_slope = cmp.by_distance;
    auto by_id = [](const RankedTurbine& a, const RankedTurbine& b) { return a.turbine_id < b.turbine_id; };
    std::stable_sort(cmp.by_distance.begin(), cmp.by_distance.end(), by_id);
    std::stable_sort(cmp.by_slope.begin(), cmp.by_slope.end(), by_id);
    std::stable_sort(cmp.by_distance.begin(), cmp.by_distance.end(),
                     [](const RankedTurbine& a, const RankedTurbine& b) { return a.di_total < b.di_total; });
    std::stable_sort(cmp.by_slope.begin(), cmp.by_slope.end(),
                     [](const RankedTurbine& a, const RankedTurbine& b) { return a.high_slope_sum > b.high_slope_sum; });
    return cmp;
}

Comparison compare_report_files(std::span<const fs::path> paths) {
    std::vector<Json> reports;
    std::vector<std::string> sources;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw DataError("cannot open report: " + p.string());
        try {
            reports.push_back(Json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("invalid report JSON in " + p.string() + ": " + e.what());
        }
        sources.push_back(p.string());
    }
    try {
        return compare_reports(reports, sources);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report is missing fields: ") + e.what());
    }
}

void print_comparison(const Comparison& cmp, std::ostream& out) {
    out << "ranking by distance index total (ascending, healthiest first)\n";
    for (std::size_t i = 0; i < cmp.by_distance.size(); ++i) {
        const auto& t = cmp.by_distance[i];
        out << "  " << i + 1 << ". " << t.turbine_id << "  DI total " << format_fixed(t.di_total, 4) << "  (" << t.source
            << ")\n";
    }
    out << "ranking by summed high-power slope (descending, healthiest first)\n";
    for (std::size_t i = 0; i < cmp.by_slope.size(); ++i) {
        const auto& t = cmp.by_slope[i];
        out << "  " << i + 1 << ". " << t.turbine_id << "  high slope sum " << format_fixed(t.high_slope_sum, 4)
            << "  low slope sum " << format_fixed(t.low_slope_sum, 4) << "  (" << t.source << ")\n";
    }
}

}  // namespace fzh
