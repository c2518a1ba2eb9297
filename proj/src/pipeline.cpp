#include "fzhealth/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fzhealth/errors.hpp"
#include "fzhealth/text.hpp"

namespace fzh {

namespace {

// Re-throws the active exception with `context` prepended, keeping its category.
[[noreturn]] void rethrow_with(const std::string& context) {
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(context + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const std::domain_error& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(context + ": " + e.what());
    }
}

constexpr std::uint64_t kTempSeedSalt = 0x7e3b'0c1aULL;

}  // namespace

void validate(const RunConfig& c) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(c.wind_min >= 0.0 && c.wind_min < c.wind_max, "wind range requires 0 <= wind-min < wind-max");
    require(c.wind_bin_start < c.wind_bin_end, "wind bins require start < end");
    require(c.wind_bin_width > 0.0, "wind bin width must be > 0");
    require(c.temp_clusters >= 1, "temperature cluster count must be >= 1");
    require(c.window_length ? *c.window_length >= 2 : c.windows >= 1, "window count must be >= 1 (length >= 2)");
    require(c.concepts >= 1, "concept count must be >= 1");
    require(c.min_delta_points >= c.concepts, "min delta points must be >= concept count");
    require(c.fuzzifier > 1.0 && std::isfinite(c.fuzzifier), "fuzzifier must be > 1");
    require(c.fcm_eps > 0.0, "fcm eps must be > 0");
    require(c.fcm_max_iter >= 1, "fcm max iterations must be >= 1");
    require(c.bounds.z_max > c.bounds.z_min, "normalization requires power max > min");
    require(c.bounds.dz_max > c.bounds.dz_min, "normalization requires change max > min");
    require(c.slope_scale > 0.0, "slope scale must be > 0");
}

ConceptConfig concept_config(const RunConfig& c) {
    ConceptConfig cc;
    cc.windows = c.windows;
    cc.window_length = c.window_length;
    cc.min_delta_points = c.min_delta_points;
    cc.fcm.clusters = c.concepts;
    cc.fcm.fuzzifier = c.fuzzifier;
    cc.fcm.eps = c.fcm_eps;
    cc.fcm.max_iter = c.fcm_max_iter;
    cc.fcm.seed = c.seed;
    return cc;
}

DistanceConfig distance_config(const RunConfig& c) {
    DistanceConfig dc;
    dc.fcm.clusters = 2;
    dc.fcm.fuzzifier = c.fuzzifier;
    dc.fcm.eps = c.fcm_eps;
    dc.fcm.max_iter = c.fcm_max_iter;
    dc.fcm.seed = c.seed;
    dc.bounds = c.bounds;
    dc.metric = c.di_metric;
    dc.normalization = c.di_normalization;
    return dc;
}

std::vector<std::string> TurbineAnalysis::temp_labels() const {
    std::vector<std::string> out;
    for (const auto& t : temp_clusters) out.push_back(format_fixed(t.centroid, 2));
    return out;
}

std::vector<std::string> TurbineAnalysis::wind_labels() const {
    std::vector<std::string> out;
    for (const auto& w : wind_bins) out.push_back(w.label());
    return out;
}

SubBinResult analyze_subbin(const SubBin& subbin, const RunConfig& config) {
    SubBinResult r;
    r.id = subbin.id;
    r.wind_index = subbin.wind_index;
    r.temp_index = subbin.temp_index;
    r.wind_bin = subbin.wind_bin;
    r.temp_cluster = subbin.temp_cluster;
    r.samples = subbin.samples.size();

    std::vector<double> power;
    power.reserve(subbin.samples.size());
    for (const auto& s : subbin.samples) power.push_back(s.power);

    try {
        r.windows = extract_concepts(power, concept_config(config), subbin.id);
    } catch (const InsufficientData& e) {
        r.skipped = true;
        r.skip_reason = std::string("insufficient data: ") + e.what();
        return r;
    } catch (const NumericalError& e) {
        r.skipped = true;
        r.skip_reason = std::string("concept extraction failed: ") + e.what();
        return r;
    }

    const std::size_t c = config.concepts;
    const auto high = concat_memberships(r.windows, 1);
    const auto low = concat_memberships(r.windows, c);
    if (high.values.size() < 2) {
        r.skipped = true;
        r.skip_reason = "insufficient data: fewer than 2 membership values";
        return r;
    }
    r.high = ols_slope(high);
    r.low = ols_slope(low);
    if (config.include_moderate && c >= 3) r.moderate = ols_slope(concat_memberships(r.windows, 2));

    if (r.windows.size() >= 2) {
        try {
            r.distance = subbin_distance(r.windows, distance_config(config), subbin.id);
        } catch (const NumericalError& e) {
            r.skipped = true;
            r.skip_reason = std::string("secondary clustering failed: ") + e.what();
        }
    } else {
        r.skipped = true;
        r.skip_reason = "insufficient data: distance index needs at least 2 windows";
    }
    return r;
}

LoadResult load_inputs(const RunConfig& config) {
    if (config.inputs.empty()) throw ConfigError("no input files given");
    LoadResult merged;
    bool first = true;
    for (const auto& path : config.inputs) {
        auto part = load_scada(path, config.columns, config.csv);
        merged.stats.rows_read += part.stats.rows_read;
        merged.stats.dropped_invalid += part.stats.dropped_invalid;
        merged.stats.dropped_duplicate += part.stats.dropped_duplicate;
        if (first) merged.series.sampling_period = part.series.sampling_period;
        first = false;
        for (auto& [id, recs] : part.series.turbines) {
            auto& dst = merged.series.turbines[id];
            dst.insert(dst.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
        }
    }
    if (config.inputs.size() > 1) {
        for (auto& [id, recs] : merged.series.turbines) {
            std::stable_sort(recs.begin(), recs.end(),
                             [](const SampleRecord& a, const SampleRecord& b) { return a.timestamp < b.timestamp; });
            const auto last = std::unique(recs.begin(), recs.end(), [](const SampleRecord& a, const SampleRecord& b) {
                return a.timestamp == b.timestamp;
            });
            merged.stats.dropped_duplicate += static_cast<std::size_t>(recs.end() - last);
            recs.erase(last, recs.end());
        }
    }
    return merged;
}

AnalysisResult analyze(const SeriesSet& series, const RunConfig& config, const IngestStats& ingest) {
    validate(config);
    AnalysisResult result;
    result.ingest = ingest;

    std::vector<std::string> ids;
    if (config.turbines.empty()) {
        for (const auto& [id, recs] : series.turbines) ids.push_back(id);
    } else {
        for (const auto& id : config.turbines) {
            if (!series.turbines.contains(id)) throw DataError("turbine not found in input: " + id);
            ids.push_back(id);
        }
    }
    if (ids.empty()) throw DataError("no turbines to analyze");

    const auto wind_bins = make_wind_bins(config.wind_bin_start, config.wind_bin_end, config.wind_bin_width);

    std::vector<CleanSeries> cleaned;
    for (const auto& id : ids) {
        try {
            const auto& recs = series.turbines.at(id);
            auto cs = preprocess(recs, {config.wind_min, config.wind_max});
            if (cs.size() < 4) throw DataError("fewer than 4 records inside the wind range");
            cleaned.push_back(std::move(cs));
        } catch (...) {
            rethrow_with("stage preprocess (turbine " + id + ")");
        }
    }

    std::vector<TempCluster> shared;
    if (config.share_temp_centroids) {
        try {
            std::vector<double> temps;
            for (const auto& cs : cleaned)
                for (const auto& r : cs.records) temps.push_back(r.temperature);
            shared = fit_temperature_clusters(temps, config.temp_clusters, config.seed ^ kTempSeedSalt);
        } catch (...) {
            rethrow_with("stage binning (shared temperature clusters)");
        }
    }

    for (std::size_t k = 0; k < ids.size(); ++k) {
        const auto& cs = cleaned[k];
        TurbineAnalysis ta;
        ta.turbine_id = ids[k];
        ta.records = series.turbines.at(ids[k]).size();
        ta.removed_by_wind_range = cs.removed_by_wind_range;
        ta.removed_by_iqr = cs.removed_by_iqr;
        ta.clean_records = cs.size();
        ta.ratio_q1 = cs.ratio_q1;
        ta.ratio_q3 = cs.ratio_q3;
        ta.wind_bins = wind_bins;

        SubBinPartition part;
        try {
            if (config.share_temp_centroids) {
                ta.temp_clusters = shared;
            } else {
                std::vector<double> temps;
                temps.reserve(cs.size());
                for (const auto& r : cs.records) temps.push_back(r.temperature);
                ta.temp_clusters = fit_temperature_clusters(temps, config.temp_clusters, config.seed ^ kTempSeedSalt);
            }
            part = assign_subbins(cs, ta.wind_bins, ta.temp_clusters);
        } catch (...) {
            rethrow_with("stage binning (turbine " + ta.turbine_id + ")");
        }
        ta.discarded_outside_bins = part.discarded;
        ta.record_subbin = std::move(part.record_subbin);
        ta.clean_timestamps.reserve(cs.size());
        for (const auto& r : cs.records) ta.clean_timestamps.push_back(r.timestamp);

        for (const auto& sb : part.subbins) {
            try {
                ta.subbins.push_back(analyze_subbin(sb, config));
            } catch (...) {
                rethrow_with("stage concepts (turbine " + ta.turbine_id + ", sub-bin " + sb.wind_bin.label() + " x " +
                             format_fixed(sb.temp_cluster.centroid, 2) + ")");
            }
        }

        std::vector<SubBinValue> hi, lo, mid, di;
        for (const auto& r : ta.subbins) {
            const bool ok = !r.skipped;
            hi.push_back({r.temp_index, r.wind_index, ok ? std::optional{r.high.slope} : std::nullopt});
            lo.push_back({r.temp_index, r.wind_index, ok ? std::optional{r.low.slope} : std::nullopt});
            mid.push_back({r.temp_index, r.wind_index,
                           ok && r.moderate ? std::optional{r.moderate->slope} : std::nullopt});
            di.push_back({r.temp_index, r.wind_index,
                          ok && r.distance ? std::optional{r.distance->index.value} : std::nullopt});
        }
        ta.high_table = regression_table(hi, ta.temp_labels(), ta.wind_labels(), config.slope_scale,
                                         "regression slope x" + format_exact(config.slope_scale) + ", high-power concept (" +
                                             ta.turbine_id + ")");
        ta.low_table = regression_table(lo, ta.temp_labels(), ta.wind_labels(), config.slope_scale,
                                        "regression slope x" + format_exact(config.slope_scale) + ", low-power concept (" +
                                            ta.turbine_id + ")");
        if (config.include_moderate && config.concepts >= 3) {
            ta.moderate_table = regression_table(mid, ta.temp_labels(), ta.wind_labels(), config.slope_scale,
                                                 "regression slope x" + format_exact(config.slope_scale) +
                                                     ", moderate-power concept (" + ta.turbine_id + ")");
        }
        ta.di_table = di_table(di, ta.temp_labels(), ta.wind_labels(), "distance index (" + ta.turbine_id + ")");
        result.turbines.push_back(std::move(ta));
    }
    return result;
}

}  // namespace fzh
