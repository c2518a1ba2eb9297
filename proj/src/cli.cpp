#include "fzhealth/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fzhealth/errors.hpp"
#include "fzhealth/ingest.hpp"
#include "fzhealth/pipeline.hpp"
#include "fzhealth/report.hpp"
#include "fzhealth/synth.hpp"
#include "fzhealth/text.hpp"

namespace fzh {

namespace {

namespace fs = std::filesystem;

template <typename T>
void override(T& dst, const std::optional<T>& src) {
    if (src) dst = *src;
}

// Input file + column mapping flags shared by analyze, summarize and plot-data.
struct InputFlags {
    std::vector<std::string> inputs;
    std::optional<std::string> col_timestamp, col_turbine, col_wind, col_temperature, col_power, turbine_id;
    std::optional<std::string> delimiter, timestamp_format;
    std::vector<std::string> turbines;

    void attach(CLI::App& app) {
        app.add_option("inputs", inputs, "SCADA CSV file(s)");
        app.add_option("--col-timestamp", col_timestamp, "timestamp column name");
        app.add_option("--col-turbine", col_turbine, "turbine id column name");
        app.add_option("--col-wind", col_wind, "wind speed column name");
        app.add_option("--col-temperature", col_temperature, "temperature column name (or any substitute channel)");
        app.add_option("--col-power", col_power, "power column name");
        app.add_option("--turbine-id", turbine_id, "use this id for every row instead of a turbine column");
        app.add_option("--delimiter", delimiter, "CSV field separator (one character)");
        app.add_option("--timestamp-format", timestamp_format, "strptime-style format; ISO-8601 when omitted");
        app.add_option("--turbines", turbines, "only analyze these turbine ids");
    }

    void apply(RunConfig& c) const {
        if (!inputs.empty()) c.inputs = inputs;
        override(c.columns.timestamp, col_timestamp);
        override(c.columns.turbine_id, col_turbine);
        override(c.columns.wind, col_wind);
        override(c.columns.temperature, col_temperature);
        override(c.columns.power, col_power);
        if (turbine_id) c.columns.constant_turbine_id = *turbine_id;
        if (delimiter) {
            if (delimiter->size() != 1) throw ConfigError("--delimiter must be a single character");
            c.csv.delimiter = (*delimiter)[0];
        }
        override(c.csv.timestamp_format, timestamp_format);
        if (!turbines.empty()) c.turbines = turbines;
    }
};

struct AnalyzeFlags {
    std::optional<std::string> config_file, output;
    std::optional<double> wind_min, wind_max, bin_start, bin_end, bin_width;
    std::optional<std::size_t> temp_clusters, windows, window_length, concepts, min_delta, fcm_max_iter, region_grid;
    std::optional<double> fuzzifier, fcm_eps, pmin, pmax, dpmin, dpmax, slope_scale;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> di_metric, di_normalization;
    bool share_temps = false;
    bool include_moderate = false;
    bool quiet = false;

    void attach_wind_range(CLI::App& app) {
        app.add_option("--wind-min", wind_min, "lower wind cut, m/s (default 4.5)");
        app.add_option("--wind-max", wind_max, "upper wind cut, exclusive, m/s (default 9.0)");
    }

    void attach(CLI::App& app) {
        app.add_option("-c,--config", config_file, "JSON config file; flags override its values");
        app.add_option("-o,--output", output, "output directory");
        attach_wind_range(app);
        app.add_option("--wind-bin-start", bin_start, "first wind bin lower edge (default 5.0)");
        app.add_option("--wind-bin-end", bin_end, "last wind bin upper edge (default 7.5)");
        app.add_option("--wind-bin-width", bin_width, "wind bin width (default 0.5)");
        app.add_option("--temp-clusters", temp_clusters, "number of temperature clusters (default 4)");
        app.add_flag("--share-temp-centroids", share_temps, "fit temperature clusters once over all turbines");
        app.add_option("--windows", windows, "number of windows R per sub-bin (default 20)");
        app.add_option("--window-length", window_length, "fixed window length instead of a window count");
        app.add_option("--concepts", concepts, "concepts C per window (default 3)");
        app.add_option("--min-delta-points", min_delta, "minimum delta points per window (default 8)");
        app.add_option("--fuzzifier", fuzzifier, "FCM fuzzifier m (default 2.0)");
        app.add_option("--fcm-eps", fcm_eps, "FCM stop threshold on max membership change (default 1e-6)");
        app.add_option("--fcm-max-iter", fcm_max_iter, "FCM iteration cap (default 300)");
        app.add_option("--seed", seed, "base seed (default 1)");
        app.add_option("--norm-power-min", pmin, "normalization minimum for power (default 40000)");
        app.add_option("--norm-power-max", pmax, "normalization maximum for power (default 100000)");
        app.add_option("--norm-dpower-min", dpmin, "normalization minimum for power change (default -20000)");
        app.add_option("--norm-dpower-max", dpmax, "normalization maximum for power change (default 20000)");
        app.add_option("--di-metric", di_metric, "euclidean | manhattan")->check(CLI::IsMember({"euclidean", "manhattan"}));
        app.add_option("--di-normalization", di_normalization, "coordinates | scalar")
            ->check(CLI::IsMember({"coordinates", "scalar"}));
        app.add_option("--region-grid", region_grid, "region map resolution N (N x N cells, 0 disables)");
        app.add_option("--slope-scale", slope_scale, "multiplier for slopes in tables (default 1e5)");
        app.add_flag("--include-moderate", include_moderate, "also regress the moderate concept");
        app.add_flag("-q,--quiet", quiet, "do not print tables");
    }

    void apply(RunConfig& c) const {
        override(c.wind_min, wind_min);
        override(c.wind_max, wind_max);
        override(c.wind_bin_start, bin_start);
        override(c.wind_bin_end, bin_end);
        override(c.wind_bin_width, bin_width);
        override(c.temp_clusters, temp_clusters);
        if (share_temps) c.share_temp_centroids = true;
        override(c.windows, windows);
        if (window_length) c.window_length = *window_length;
        override(c.concepts, concepts);
        override(c.min_delta_points, min_delta);
        override(c.fuzzifier, fuzzifier);
        override(c.fcm_eps, fcm_eps);
        override(c.fcm_max_iter, fcm_max_iter);
        override(c.seed, seed);
        override(c.bounds.z_min, pmin);
        override(c.bounds.z_max, pmax);
        override(c.bounds.dz_min, dpmin);
        override(c.bounds.dz_max, dpmax);
        if (di_metric) c.di_metric = *di_metric == "manhattan" ? DistanceMetric::manhattan : DistanceMetric::euclidean;
        if (di_normalization)
            c.di_normalization = *di_normalization == "scalar" ? DiNormalization::scalar : DiNormalization::coordinates;
        override(c.region_grid, region_grid);
        override(c.slope_scale, slope_scale);
        if (include_moderate) c.include_moderate = true;
        override(c.output_dir, output);
    }
};

RunConfig build_config(const InputFlags& in, const AnalyzeFlags& an) {
    RunConfig c;
    if (an.config_file) {
        std::ifstream f(*an.config_file);
        if (!f) throw ConfigError("cannot open config file: " + *an.config_file);
        try {
            apply_config_json(Json::parse(f), c);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
    }
    in.apply(c);
    an.apply(c);
    return c;
}

int cmd_analyze(const RunConfig& config, bool quiet) {
    validate(config);
    const auto loaded = load_inputs(config);
    const auto result = analyze(loaded.series, config, loaded.stats);
    const auto manifest = write_outputs(result, config, config.output_dir);
    if (!quiet) {
        for (const auto& t : result.turbines) {
            std::cout << '\n';
            print_table(t.high_table, std::cout);
            std::cout << '\n';
            print_table(t.low_table, std::cout);
            std::cout << '\n';
            print_table(t.di_table, std::cout);
            std::size_t skipped = 0;
            for (const auto& s : t.subbins) skipped += s.skipped ? 1 : 0;
            if (skipped > 0) std::cout << skipped << " sub-bin(s) skipped, see report.json\n";
        }
    }
    std::cout << "wrote " << manifest.size() + 1 << " files to " << config.output_dir << '\n';
    return kExitOk;
}

int cmd_summarize(const RunConfig& config) {
    const auto loaded = load_inputs(config);
    write_ingest_report(loaded.stats, std::cout);
    std::cout << "sampling period: " << loaded.series.sampling_period.count() << " s\n";
    for (const auto& s : summarize(loaded.series)) {
        std::cout << "turbine " << s.turbine_id << ": " << s.count << " records, " << format_iso8601(s.first) << " .. "
                  << format_iso8601(s.last) << " (" << s.span.count() << " s)\n"
                  << "  wind        min " << format_exact(s.wind.min) << "  max " << format_exact(s.wind.max) << '\n'
                  << "  temperature min " << format_exact(s.temperature.min) << "  max "
                  << format_exact(s.temperature.max) << '\n'
                  << "  power       min " << format_exact(s.power.min) << "  max " << format_exact(s.power.max) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Wind-turbine health indexes from fuzzy concepts in SCADA data", "fzhealth"};
    app.require_subcommand(1);

    InputFlags analyze_in;
    AnalyzeFlags analyze_flags;
    auto* analyze_cmd = app.add_subcommand("analyze", "run the full pipeline and write reports");
    analyze_in.attach(*analyze_cmd);
    analyze_flags.attach(*analyze_cmd);

    std::vector<std::string> report_paths;
    auto* compare_cmd = app.add_subcommand("compare", "rank turbines from analyze reports");
    compare_cmd->add_option("reports", report_paths, "report.json files")->required();

    SynthConfig synth;
    std::string synth_out;
    std::string wind_model = "ar1";
    std::int64_t period_s = synth.sampling_period.count();
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic SCADA data with controlled degradation");
    synth_cmd->add_option("-o,--output", synth_out, "output CSV path")->required();
    synth_cmd->add_option("--samples", synth.samples, "number of samples")->capture_default_str();
    synth_cmd->add_option("--period", period_s, "sampling period in seconds")->capture_default_str();
    synth_cmd->add_option("--turbine-id", synth.turbine_id, "turbine id")->capture_default_str();
    synth_cmd->add_option("--wind-model", wind_model, "uniform | ar1")->check(CLI::IsMember({"uniform", "ar1"}))->capture_default_str();
    synth_cmd->add_option("--wind-lo", synth.wind_lo, "lowest wind speed")->capture_default_str();
    synth_cmd->add_option("--wind-hi", synth.wind_hi, "highest wind speed")->capture_default_str();
    synth_cmd->add_option("--ar-coefficient", synth.ar_coefficient, "AR(1) lag-1 coefficient")->capture_default_str();
    synth_cmd->add_option("--ar-sigma", synth.ar_sigma, "AR(1) innovation std, m/s")->capture_default_str();
    synth_cmd->add_option("--temp-centers", synth.temp_centers, "temperature mixture centers")->capture_default_str();
    synth_cmd->add_option("--temp-spread", synth.temp_spread, "temperature std around a center")->capture_default_str();
    synth_cmd->add_option("--cut-in", synth.curve.cut_in, "power curve cut-in wind")->capture_default_str();
    synth_cmd->add_option("--rated-wind", synth.curve.rated_wind, "power curve rated wind")->capture_default_str();
    synth_cmd->add_option("--rated-power", synth.curve.rated_power, "power curve rated power")->capture_default_str();
    synth_cmd->add_option("--degradation", synth.degradation, "relative power loss per sample")->capture_default_str();
    synth_cmd->add_option("--noise", synth.noise, "relative noise std")->capture_default_str();
    synth_cmd->add_option("--step", synth.step.amount, "power drop injected at --step-at")->capture_default_str();
    synth_cmd->add_option("--step-at", synth.step.at_fraction, "fraction of the series where the step starts")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "generator seed")->capture_default_str();

    InputFlags summarize_in;
    auto* summarize_cmd = app.add_subcommand("summarize", "per-turbine counts, time span and field ranges");
    summarize_in.attach(*summarize_cmd);

    InputFlags plot_in;
    AnalyzeFlags plot_flags;
    std::string plot_out = "fzhealth-plot";
    std::size_t hist_bins = 30;
    auto* plot_cmd = app.add_subcommand("plot-data", "write power-curve scatter and temperature histogram data");
    plot_in.attach(*plot_cmd);
    plot_flags.attach_wind_range(*plot_cmd);
    plot_cmd->add_option("-o,--output", plot_out, "output directory")->capture_default_str();
    plot_cmd->add_option("--hist-bins", hist_bins, "temperature histogram bins")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(build_config(analyze_in, analyze_flags), analyze_flags.quiet);
        if (*compare_cmd) {
            std::vector<fs::path> paths(report_paths.begin(), report_paths.end());
            print_comparison(compare_report_files(paths), std::cout);
            return kExitOk;
        }
        if (*synth_cmd) {
            synth.wind_model = wind_model == "uniform" ? WindModel::uniform : WindModel::ar1;
            synth.sampling_period = std::chrono::seconds{period_s};
            const auto series = generate_scada(synth);
            write_scada_csv(series, fs::path(synth_out));
            std::cout << "wrote " << series.total_records() << " records to " << synth_out << '\n';
            return kExitOk;
        }
        if (*summarize_cmd) return cmd_summarize(build_config(summarize_in, {}));
        if (*plot_cmd) {
            auto config = build_config(plot_in, plot_flags);
            validate(config);
            const auto loaded = load_inputs(config);
            const auto files = write_plot_data(loaded.series, config, plot_out, hist_bins);
            std::cout << "wrote " << files.size() << " files to " << plot_out << '\n';
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace fzh
