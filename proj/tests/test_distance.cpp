#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "fzhealth/health_distance.hpp"

using namespace fzh;

namespace {

FcmParams secondary_params(std::uint64_t seed = 3) {
    FcmParams p;
    p.clusters = 2;
    p.seed = seed;
    return p;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// Windows whose rank centroids are given directly; memberships are irrelevant here.
std::vector<WindowConcepts> windows_from(const std::vector<std::vector<DeltaPoint>>& per_window) {
    std::vector<WindowConcepts> out;
    for (std::size_t w = 0; w < per_window.size(); ++w) {
        WindowConcepts wc;
        wc.window_index = w + 1;
        for (std::size_t r = 0; r < per_window[w].size(); ++r) wc.concepts.push_back({r + 1, w + 1, per_window[w][r]});
        out.push_back(wc);
    }
    return out;
}

}  // namespace

TEST_CASE("secondary clustering on alternating centroids") {
    RankCentroidSeries s{1, {}};
    for (int i = 0; i < 10; ++i) s.centroids.push_back(i % 2 ? DeltaPoint{20, 0} : DeltaPoint{10, 0});
    const auto p = secondary_clustering(s, secondary_params());
    CHECK(std::abs(p.low.z - 10) < 1e-6);
    CHECK(std::abs(p.high.z - 20) < 1e-6);
    CHECK(std::abs(p.low.dz) < 1e-6);
    CHECK(std::abs(p.high.dz) < 1e-6);
}

TEST_CASE("identical centroids give a degenerate pair") {
    RankCentroidSeries s{2, std::vector<DeltaPoint>(6, DeltaPoint{55000, 120})};
    const auto p = secondary_clustering(s, secondary_params());
    CHECK(p.low == p.high);
    CHECK(p.low == DeltaPoint{55000, 120});
    CHECK_THROWS_AS(secondary_clustering(RankCentroidSeries{1, {{1, 1}}}, secondary_params()), std::invalid_argument);
}

TEST_CASE("secondary clustering is permutation invariant and ordered") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        RankCentroidSeries s{1, {}};
        for (int i = 0; i < 20; ++i) s.centroids.push_back({60000 + 3000 * g(rng) + (i < 10 ? 0 : 5000), 500 * g(rng)});
        const auto a = secondary_clustering(s, secondary_params(trial));
        auto shuffled = s;
        std::shuffle(shuffled.centroids.begin(), shuffled.centroids.end(), rng);
        const auto b = secondary_clustering(shuffled, secondary_params(trial));
        CHECK(a.low == b.low);
        CHECK(a.high == b.high);
        CHECK(a.low.z <= a.high.z);
    }
}

TEST_CASE("normalization") {
    const NormBounds b;
    CHECK(normalize_coords({40000, 0}, b).z == 0.0);
    CHECK(normalize_coords({100000, 0}, b).z == 1.0);
    CHECK(normalize_coords({70000, 0}, b).z == 0.5);
    CHECK(normalize_coords({70000, 0}, b).dz == 0.5);
    CHECK(normalize_coords({130000, -40000}, b).z == 1.5);
    CHECK_FALSE(within_unit_box(normalize_coords({130000, 0}, b)));
    NormBounds bad;
    bad.z_max = bad.z_min;
    CHECK_THROWS_AS(normalize_coords({0, 0}, bad), std::invalid_argument);
}

TEST_CASE("distance index arithmetic") {
    std::vector<CentroidPair> same{{1, {0.2, 0.2}, {0.2, 0.2}}, {2, {0.5, 0.5}, {0.5, 0.5}}, {3, {0, 0}, {0, 0}}};
    CHECK(distance_index(same).value == 0.0);
    std::vector<CentroidPair> unit{{1, {0, 0}, {1, 0}}, {2, {0, 0}, {0, 1}}, {3, {0.5, 0.5}, {0.5, 1.5}}};
    const auto di = distance_index(unit);
    CHECK(di.value == 3.0);
    CHECK(di.components == std::vector<double>{1.0, 1.0, 1.0});
    std::vector<CentroidPair> diag{{1, {0, 0}, {3, 4}}};
    CHECK(distance_index(diag).value == 5.0);
    CHECK(distance_index(diag, DistanceMetric::manhattan).value == 7.0);
    std::vector<CentroidPair> missing{{1, {0, 0}, {1, 0}}, {1, {0, 0}, {1, 0}}, {3, {0, 0}, {1, 0}}};
    CHECK_THROWS_AS(distance_index(missing), std::invalid_argument);

    // swapping L and H inside a pair leaves every component unchanged
    std::vector<CentroidPair> swapped = unit;
    for (auto& p : swapped) std::swap(p.low, p.high);
    CHECK(distance_index(swapped).components == di.components);
}

TEST_CASE("drift monotonicity on translated rank-1 centroids") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<DeltaPoint>> base;
    for (int w = 0; w < 20; ++w)
        base.push_back({{85000 + 800 * g(rng), 300 * g(rng)},
                        {65000 + 800 * g(rng), 300 * g(rng)},
                        {45000 + 800 * g(rng), 300 * g(rng)}});
    DistanceConfig cfg;
    cfg.fcm.seed = 1;
    double prev = -1.0;
    for (double t : {0.0, 2000.0, 10000.0}) {
        auto drifted = base;
        for (std::size_t w = 10; w < 20; ++w) drifted[w][0].z -= t;
        const auto d = subbin_distance(windows_from(drifted), cfg, 4);
        CHECK(d.index.value >= prev);
        prev = d.index.value;
        double sum = 0.0;
        for (double c : d.index.components) {
            CHECK(c >= 0.0);
            sum += c;
        }
        CHECK(d.index.value == sum);
    }
}

TEST_CASE("scalar normalization divides raw distances by the power range") {
    const auto w = windows_from({{{90000, 0}, {70000, 0}, {50000, 0}},
                                 {{90000, 0}, {70000, 0}, {50000, 0}},
                                 {{84000, 0}, {70000, 0}, {50000, 0}},
                                 {{84000, 0}, {70000, 0}, {50000, 0}}});
    DistanceConfig cfg;
    cfg.normalization = DiNormalization::scalar;
    const auto d = subbin_distance(w, cfg);
    CHECK(d.index.value == doctest::Approx(0.1).epsilon(1e-6));
    cfg.normalization = DiNormalization::coordinates;
    CHECK(subbin_distance(w, cfg).index.value == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS_AS(subbin_distance(std::span(w).first(1), cfg), std::invalid_argument);
}

TEST_CASE("di table sums") {
    std::vector<SubBinValue> v{{0, 0, 0.5}, {0, 1, 0.25}, {1, 0, 1.0}, {1, 1, std::nullopt}};
    const auto t = di_table(v, {"a", "b"}, {"x", "y"});
    CHECK(t.row_sums == std::vector<double>{0.75, 1.0});
    CHECK(t.column_sums == std::vector<double>{1.5, 0.25});
    CHECK(t.total == 1.75);
    std::vector<SubBinValue> one{{0, 0, 0.52}};
    const auto single = di_table(one, {"a"}, {"x"});
    CHECK(single.total == 0.52);
}

TEST_CASE("region map geometry") {
    std::vector<CentroidPair> pair{{1, {0, 0}, {1, 1}}};
    std::ostringstream out;
    emit_region_map(pair, 100, out);
    const auto l = lines(out.str());
    REQUIRE(l.size() == 10001);
    CHECK(l[0] == "ix,iy,z,dz,label,rank");
    std::size_t h = 0;
    for (std::size_t i = 1; i < l.size(); ++i) {
        std::istringstream row(l[i]);
        std::string ix, iy, z, dz, label;
        std::getline(row, ix, ','), std::getline(row, iy, ','), std::getline(row, z, ','), std::getline(row, dz, ',');
        std::getline(row, label, ',');
        const double s = std::stod(z) + std::stod(dz);
        if (std::abs(s - 1.0) > 1e-9) CHECK((label == "H") == (s > 1.0));
        h += label == "H";
    }
    CHECK(h >= 4950);
    CHECK(h <= 5050);

    std::vector<CentroidPair> coincident{{1, {0.3, 0.3}, {0.3, 0.3}}};
    std::ostringstream out2;
    emit_region_map(coincident, 10, out2);
    CHECK(out2.str().find(",H,") == std::string::npos);
}
