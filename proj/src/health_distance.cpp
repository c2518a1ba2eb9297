#include "fzhealth/health_distance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fzhealth/text.hpp"

namespace fzh {

RankCentroidSeries rank_centroid_series(std::span<const WindowConcepts> windows, std::size_t rank) {
    RankCentroidSeries s;
    s.rank = rank;
    for (const auto& w : windows) {
        if (rank == 0 || rank > w.concepts.size())
            throw std::invalid_argument("rank_centroid_series: rank out of range");
        s.centroids.push_back(w.concepts[rank - 1].centroid);
    }
    return s;
}

CentroidPair secondary_clustering(const RankCentroidSeries& series, FcmParams params) {
    if (series.centroids.size() < 2) throw std::invalid_argument("secondary_clustering: need at least 2 centroids");
    std::vector<DeltaPoint> canon = series.centroids;
    std::sort(canon.begin(), canon.end(), [](const DeltaPoint& a, const DeltaPoint& b) {
        return a.z != b.z ? a.z < b.z : a.dz < b.dz;
    });
    Matrix points(canon.size(), 2);
    for (std::size_t i = 0; i < canon.size(); ++i) {
        points(i, 0) = canon[i].z;
        points(i, 1) = canon[i].dz;
    }
    params.clusters = 2;
    const auto fit = fcm_fit(points, params);

    DeltaPoint a{fit.centroids(0, 0), fit.centroids(0, 1)};
    DeltaPoint b{fit.centroids(1, 0), fit.centroids(1, 1)};
    if (b.z < a.z || (b.z == a.z && b.dz < a.dz)) std::swap(a, b);
    return {series.rank, a, b};
}

DeltaPoint normalize_coords(const DeltaPoint& v, const NormBounds& b) {
    if (!(b.z_max > b.z_min) || !(b.dz_max > b.dz_min))
        throw std::invalid_argument("normalize_coords: bounds require max > min");
    return {(v.z - b.z_min) / (b.z_max - b.z_min), (v.dz - b.dz_min) / (b.dz_max - b.dz_min)};
}

bool within_unit_box(const DeltaPoint& v) noexcept {
    return v.z >= 0.0 && v.z <= 1.0 && v.dz >= 0.0 && v.dz <= 1.0;
}

double distance(const DeltaPoint& a, const DeltaPoint& b, DistanceMetric metric) noexcept {
    const double dz = a.z - b.z;
    const double ddz = a.dz - b.dz;
    switch (metric) {
        case DistanceMetric::manhattan:
            return std::abs(dz) + std::abs(ddz);
        case DistanceMetric::euclidean:
        default:
            return std::hypot(dz, ddz);
    }
}

DistanceIndex distance_index(std::span<const CentroidPair> pairs, DistanceMetric metric) {
    if (pairs.empty()) throw std::invalid_argument("distance_index: no pairs");
    DistanceIndex di;
    di.components.assign(pairs.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& p : pairs) {
        if (p.rank == 0 || p.rank > pairs.size() || !std::isnan(di.components[p.rank - 1]))
            throw std::invalid_argument("distance_index: pairs must cover each rank exactly once");
        di.components[p.rank - 1] = distance(p.low, p.high, metric);
    }
    for (double c : di.components) di.value += c;
    return di;
}

SubBinDistance subbin_distance(std::span<const WindowConcepts> windows, const DistanceConfig& config,
                               std::uint64_t subbin_id) {
    if (windows.size() < 2) throw std::invalid_argument("subbin_distance: need at least 2 windows");
    const std::size_t c = windows.front().concepts.size();
    SubBinDistance out;
    for (std::size_t r = 1; r <= c; ++r) {
        FcmParams p = config.fcm;
        // window indices start at 1, so index 0 never collides with a primary window seed
        p.seed = window_seed(config.fcm.seed ^ 0x5ec0'da47ULL, subbin_id, r);
        auto pair = secondary_clustering(rank_centroid_series(windows, r), p);
        out.raw_pairs.push_back(pair);
        CentroidPair norm{r, normalize_coords(pair.low, config.bounds), normalize_coords(pair.high, config.bounds)};
        out.outside_bounds = out.outside_bounds || !within_unit_box(norm.low) || !within_unit_box(norm.high);
        out.normalized_pairs.push_back(norm);
    }
    if (config.normalization == DiNormalization::coordinates) {
        out.index = distance_index(out.normalized_pairs, config.metric);
    } else {
        out.index = distance_index(out.raw_pairs, config.metric);
        const double range = config.bounds.z_max - config.bounds.z_min;
        if (!(range > 0.0)) throw std::invalid_argument("subbin_distance: power bounds require max > min");
        for (auto& comp : out.index.components) comp /= range;
        out.index.value = 0.0;
        for (double comp : out.index.components) out.index.value += comp;
    }
    return out;
}

HealthTable di_table(std::span<const SubBinValue> values, std::vector<std::string> temp_labels,
                     std::vector<std::string> wind_labels, std::string title) {
    return make_table(std::move(title), std::move(temp_labels), std::move(wind_labels), values, 1.0, true);
}

void emit_region_map(std::span<const CentroidPair> pairs, std::size_t grid, std::ostream& out) {
    if (pairs.empty()) throw std::invalid_argument("emit_region_map: no pairs");
    if (grid == 0) throw std::invalid_argument("emit_region_map: grid must be >= 1");
    out << "ix,iy,z,dz,label,rank\n";
    const double step = 1.0 / static_cast<double>(grid);
    for (std::size_t ix = 0; ix < grid; ++ix) {
        for (std::size_t iy = 0; iy < grid; ++iy) {
            const DeltaPoint cell{(static_cast<double>(ix) + 0.5) * step, (static_cast<double>(iy) + 0.5) * step};
            double best = std::numeric_limits<double>::infinity();
            char label = 'L';
            std::size_t rank = 0;
            for (const auto& p : pairs) {
                const double dl = distance(cell, p.low, DistanceMetric::euclidean);
                if (dl < best) {
                    best = dl;
                    label = 'L';
                    rank = p.rank;
                }
            }
            for (const auto& p : pairs) {
                const double dh = distance(cell, p.high, DistanceMetric::euclidean);
                if (dh < best) {
                    best = dh;
                    label = 'H';
                    rank = p.rank;
                }
            }
            out << ix << ',' << iy << ',' << format_exact(cell.z) << ',' << format_exact(cell.dz) << ',' << label << ','
                << rank << '\n';
        }
    }
}

void emit_region_map(std::span<const CentroidPair> pairs, std::size_t grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    emit_region_map(pairs, grid, out);
}

}  // namespace fzh
