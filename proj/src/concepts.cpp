#include "fzhealth/concepts.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fzhealth/text.hpp"

namespace fzh {

std::string rank_label(std::size_t rank, std::size_t concepts) {
    if (rank == 1) return "high";
    if (rank == concepts) return "low";
    if (concepts == 3) return "moderate";
    return "moderate" + std::to_string(rank - 1);
}

std::vector<WindowRange> split_windows(std::size_t samples, std::size_t windows, std::size_t min_window) {
    if (windows == 0) throw std::invalid_argument("split_windows: window count must be >= 1");
    const std::size_t base = samples / windows;
    if (base < std::max<std::size_t>(min_window, 1)) {
        throw InsufficientData("need at least " + std::to_string(windows * std::max<std::size_t>(min_window, 1)) +
                               " samples for " + std::to_string(windows) + " windows, have " +
                               std::to_string(samples));
    }
    const std::size_t extra = samples % windows;
    std::vector<WindowRange> out;
    out.reserve(windows);
    std::size_t pos = 0;
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        out.push_back({pos, pos + len});
        pos += len;
    }
    return out;
}

std::vector<WindowRange> split_windows_by_length(std::size_t samples, std::size_t length, std::size_t min_window) {
    if (length == 0) throw std::invalid_argument("split_windows_by_length: length must be >= 1");
    const std::size_t windows = samples / length;
    if (windows == 0) {
        throw InsufficientData("window length " + std::to_string(length) + " exceeds " + std::to_string(samples) +
                               " samples");
    }
    return split_windows(samples, windows, std::max(min_window, length));
}

std::vector<DeltaPoint> delta_transform(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("delta_transform: window needs at least 2 values");
    std::vector<DeltaPoint> out;
    out.reserve(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) out.push_back({values[i], values[i] - values[i - 1]});
    return out;
}

std::uint64_t window_seed(std::uint64_t base, std::uint64_t subbin_id, std::uint64_t window_index) {
    // splitmix64 finalizer applied to each folded component
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(base);
    h = mix(h ^ subbin_id);
    h = mix(h ^ window_index);
    return h;
}

std::vector<std::size_t> rank_order(const Matrix& centroids) {
    std::vector<std::size_t> order(centroids.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (centroids(a, 0) != centroids(b, 0)) return centroids(a, 0) > centroids(b, 0);
        if (centroids.cols() > 1 && centroids(a, 1) != centroids(b, 1)) return centroids(a, 1) > centroids(b, 1);
        return a < b;
    });
    return order;
}

std::vector<WindowConcepts> extract_concepts(std::span<const double> power, const ConceptConfig& config,
                                             std::uint64_t subbin_id) {
    const std::size_t min_window = std::max<std::size_t>(config.min_delta_points + 1, 2);
    const auto ranges = config.window_length ? split_windows_by_length(power.size(), *config.window_length, min_window)
                                             : split_windows(power.size(), config.windows, min_window);
    const std::size_t c = config.fcm.clusters;

    std::vector<WindowConcepts> out;
    out.reserve(ranges.size());
    for (std::size_t w = 0; w < ranges.size(); ++w) {
        const auto deltas = delta_transform(power.subspan(ranges[w].begin, ranges[w].size()));
        Matrix points(deltas.size(), 2);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            points(i, 0) = deltas[i].z;
            points(i, 1) = deltas[i].dz;
        }
        FcmParams params = config.fcm;
        params.seed = window_seed(config.fcm.seed, subbin_id, w + 1);
        const auto fit = fcm_fit(points, params);
        const auto order = rank_order(fit.centroids);

        WindowConcepts wc;
        wc.window_index = w + 1;
        wc.first_sample = ranges[w].begin;
        wc.sample_count = ranges[w].size();
        wc.iterations = fit.iterations;
        wc.converged = fit.converged;
        wc.memberships = Matrix(points.rows(), c);
        for (std::size_t r = 0; r < c; ++r) {
            wc.concepts.push_back({r + 1, w + 1, {fit.centroids(order[r], 0), fit.centroids(order[r], 1)}});
            for (std::size_t i = 0; i < points.rows(); ++i) wc.memberships(i, r) = fit.memberships(i, order[r]);
        }
        out.push_back(std::move(wc));
    }
    return out;
}

void emit_concept_scatter(std::span<const WindowConcepts> windows, std::ostream& out) {
    out << "window_index,rank_label,z,dz\n";
    for (const auto& w : windows) {
        for (const auto& c : w.concepts) {
            out << w.window_index << ',' << rank_label(c.rank, w.concepts.size()) << ',' << format_exact(c.centroid.z)
                << ',' << format_exact(c.centroid.dz) << '\n';
        }
    }
}

void emit_concept_scatter(std::span<const WindowConcepts> windows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    emit_concept_scatter(windows, out);
}

std::vector<ScatterRow> read_concept_scatter(std::istream& in) {
    std::vector<ScatterRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line, ',');
        if (f.size() != 4) throw DataError("concept scatter: expected 4 fields");
        const auto w = parse_double(f[0]);
        const auto z = parse_double(f[2]);
        const auto dz = parse_double(f[3]);
        if (!w || !z || !dz) throw DataError("concept scatter: unparsable row");
        rows.push_back({static_cast<std::size_t>(*w), f[1], {*z, *dz}});
    }
    return rows;
}

}  // namespace fzh
