#include "fzhealth/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fzhealth/text.hpp"

namespace fzh {

std::string WindBin::label() const {
    const auto fmt = [](double v) {
        auto s = format_fixed(v, 2);
        while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
        return s;
    };
    return "[" + fmt(lower) + ", " + fmt(upper) + ")";
}

std::vector<WindBin> make_wind_bins(double start, double end, double width) {
    if (!(start < end)) throw std::invalid_argument("make_wind_bins: requires start < end");
    if (!(width > 0.0)) throw std::invalid_argument("make_wind_bins: requires width > 0");
    const double span = (end - start) / width;
    const double nearest = std::round(span);
    const bool aligned = std::abs(span - nearest) < 1e-9;
    const auto full = static_cast<std::size_t>(aligned ? nearest : std::floor(span));

    std::vector<WindBin> bins;
    bins.reserve(full + 1);
    for (std::size_t i = 0; i < full; ++i) {
        const double lo = start + static_cast<double>(i) * width;
        const double hi = (aligned && i + 1 == full) ? end : start + static_cast<double>(i + 1) * width;
        bins.push_back({lo, hi, false});
    }
    if (!aligned) bins.push_back({start + static_cast<double>(full) * width, end, true});
    return bins;
}

std::optional<std::size_t> find_wind_bin(std::span<const WindBin> bins, double w) noexcept {
    auto it = std::upper_bound(bins.begin(), bins.end(), w, [](double v, const WindBin& b) { return v < b.upper; });
    if (it == bins.end() || !it->contains(w)) return std::nullopt;
    return static_cast<std::size_t>(it - bins.begin());
}

namespace {

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> p, double* dist2 = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.rows(); ++j) {
        const double d = squared_distance(p, centroids.row(j));
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    if (dist2) *dist2 = best_d;
    return best;
}

Matrix seed_centroids(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.rows();
    Matrix c(k, points.cols());
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t first = pick(rng);
    std::copy(points.row(first).begin(), points.row(first).end(), c.row(0).begin());

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (std::size_t j = 1; j < k; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points.row(i), c.row(j - 1)));
            total += d2[i];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= d2[i];
                if (target < 0.0 && d2[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        std::copy(points.row(chosen).begin(), points.row(chosen).end(), c.row(j).begin());
    }
    return c;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter, double tol) {
    if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
    if (points.rows() < k) throw std::invalid_argument("kmeans: fewer points than clusters");
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();

    std::mt19937_64 rng(seed);
    KMeansResult res;
    res.centroids = seed_centroids(points, k, rng);
    res.assignment.assign(n, 0);
    std::vector<double> dist2(n);
    std::vector<std::size_t> previous;

    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) res.assignment[i] = nearest_centroid(res.centroids, points.row(i), &dist2[i]);

        std::vector<std::size_t> counts(k, 0);
        for (auto a : res.assignment) ++counts[a];
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] != 0) continue;
            // re-seed with the farthest point whose cluster can spare it
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[res.assignment[i]] > 1 && dist2[i] > far_d) {
                    far_d = dist2[i];
                    far = i;
                }
            }
            if (far == n) break;
            --counts[res.assignment[far]];
            res.assignment[far] = j;
            dist2[far] = 0.0;
            counts[j] = 1;
        }

        Matrix next(k, dim);
        for (std::size_t i = 0; i < n; ++i) {
            auto dst = next.row(res.assignment[i]);
            auto src = points.row(i);
            for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
        }
        double shift = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) {
                std::copy(res.centroids.row(j).begin(), res.centroids.row(j).end(), next.row(j).begin());
                continue;
            }
            for (auto& v : next.row(j)) v /= static_cast<double>(counts[j]);
            shift = std::max(shift, squared_distance(next.row(j), res.centroids.row(j)));
        }
        res.centroids = std::move(next);

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) objective += squared_distance(points.row(i), res.centroids.row(res.assignment[i]));
        res.objective_history.push_back(objective);
        res.iterations = it + 1;

        if (res.assignment == previous || shift <= tol * tol) {
            res.converged = true;
            break;
        }
        previous = res.assignment;
    }
    // final assignment against the returned centroids, so the result is a fixed point
    for (std::size_t i = 0; i < n; ++i) res.assignment[i] = nearest_centroid(res.centroids, points.row(i));
    return res;
}

std::vector<TempCluster> temperature_boundaries(std::span<const double> sorted_centroids) {
    if (sorted_centroids.empty()) throw std::invalid_argument("temperature_boundaries: no centroids");
    for (std::size_t i = 1; i < sorted_centroids.size(); ++i) {
        if (!(sorted_centroids[i - 1] < sorted_centroids[i]))
            throw std::invalid_argument("temperature_boundaries: centroids must be sorted and distinct");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<TempCluster> out;
    out.reserve(sorted_centroids.size());
    for (std::size_t i = 0; i < sorted_centroids.size(); ++i) {
        TempCluster c;
        c.centroid = sorted_centroids[i];
        c.lower = i == 0 ? -inf : 0.5 * (sorted_centroids[i - 1] + sorted_centroids[i]);
        c.upper = i + 1 == sorted_centroids.size() ? inf : 0.5 * (sorted_centroids[i] + sorted_centroids[i + 1]);
        out.push_back(c);
    }
    return out;
}

std::size_t find_temp_cluster(std::span<const TempCluster> clusters, double t) noexcept {
    auto it = std::lower_bound(clusters.begin(), clusters.end(), t,
                               [](const TempCluster& c, double v) { return c.upper < v; });
    if (it == clusters.end()) return clusters.size() - 1;
    return static_cast<std::size_t>(it - clusters.begin());
}

std::vector<TempCluster> fit_temperature_clusters(std::span<const double> temperatures, std::size_t k,
                                                  std::uint64_t seed) {
    const auto fit = kmeans(Matrix::column(temperatures), k, seed);
    std::vector<double> centroids(fit.centroids.data().begin(), fit.centroids.data().end());
    std::sort(centroids.begin(), centroids.end());
    return temperature_boundaries(centroids);
}

SubBinPartition assign_subbins(const CleanSeries& series, std::span<const WindBin> wind_bins,
                               std::span<const TempCluster> temp_clusters) {
    SubBinPartition part;
    const std::size_t nt = temp_clusters.size();
    part.subbins.resize(wind_bins.size() * nt);
    for (std::size_t w = 0; w < wind_bins.size(); ++w) {
        for (std::size_t t = 0; t < nt; ++t) {
            auto& sb = part.subbins[w * nt + t];
            sb.id = w * nt + t;
            sb.wind_index = w;
            sb.temp_index = t;
            sb.wind_bin = wind_bins[w];
            sb.temp_cluster = temp_clusters[t];
        }
    }
    part.record_subbin.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& r = series.records[i];
        const auto w = find_wind_bin(wind_bins, r.wind_speed);
        if (!w || nt == 0) {
            ++part.discarded;
            continue;
        }
        const std::size_t id = *w * nt + find_temp_cluster(temp_clusters, r.temperature);
        part.subbins[id].samples.push_back(r);
        part.subbins[id].source_index.push_back(i);
        part.record_subbin[i] = id;
    }
    return part;
}

}  // namespace fzh
