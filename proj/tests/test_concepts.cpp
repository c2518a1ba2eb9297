#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "fzhealth/concepts.hpp"

using namespace fzh;

namespace {

std::vector<double> plateau_series(std::size_t windows, std::size_t per_window, std::uint64_t seed) {
    // Each window cycles through three power levels with small jitter.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 50.0);
    const double levels[3] = {20000.0, 50000.0, 80000.0};
    std::vector<double> out;
    for (std::size_t w = 0; w < windows; ++w)
        for (std::size_t i = 0; i < per_window; ++i) out.push_back(levels[(i / 20) % 3] + jitter(rng));
    return out;
}

ConceptConfig config_with(std::size_t windows) {
    ConceptConfig c;
    c.windows = windows;
    c.fcm.seed = 5;
    return c;
}

}  // namespace

TEST_CASE("split_windows sizes") {
    auto a = split_windows(10, 2);
    REQUIRE(a.size() == 2);
    CHECK(a[0].size() == 5);
    CHECK(a[1].size() == 5);
    auto b = split_windows(11, 2);
    CHECK(b[0].size() == 6);
    CHECK(b[1].size() == 5);
    CHECK(b[1].end == 11);
    CHECK_THROWS_AS(split_windows(30, 30), InsufficientData);
    CHECK(split_windows(30, 1).front().size() == 30);
}

TEST_CASE("split_windows covers the range contiguously with balanced sizes") {
    for (std::size_t n = 2; n < 300; n += 7)
        for (std::size_t r = 1; r <= n / 2; r += 3) {
            const auto w = split_windows(n, r);
            REQUIRE(w.size() == r);
            CHECK(w.front().begin == 0);
            CHECK(w.back().end == n);
            std::size_t mn = n, mx = 0;
            for (std::size_t i = 0; i < r; ++i) {
                if (i > 0) CHECK(w[i].begin == w[i - 1].end);
                if (i > 0) CHECK(w[i].size() <= w[i - 1].size());
                mn = std::min(mn, w[i].size());
                mx = std::max(mx, w[i].size());
            }
            CHECK(mx - mn <= 1);
        }
}

TEST_CASE("split_windows_by_length") {
    const auto w = split_windows_by_length(100, 30);
    CHECK(w.size() == 3);
    CHECK(w[0].size() == 34);
    CHECK_THROWS_AS(split_windows_by_length(20, 30), InsufficientData);
}

TEST_CASE("delta transform") {
    const std::vector<double> a{1, 3, 2};
    CHECK(delta_transform(a) == std::vector<DeltaPoint>{{3, 2}, {2, -1}});
    const std::vector<double> flat{5, 5, 5};
    CHECK(delta_transform(flat) == std::vector<DeltaPoint>{{5, 0}, {5, 0}});
    const std::vector<double> ramp{1, 3.5, 6, 8.5, 11};
    for (const auto& d : delta_transform(ramp)) CHECK(d.dz == 2.5);
    const std::vector<double> one{1};
    CHECK_THROWS_AS(delta_transform(one), std::invalid_argument);
}

TEST_CASE("rank labels and order") {
    CHECK(rank_label(1, 3) == "high");
    CHECK(rank_label(2, 3) == "moderate");
    CHECK(rank_label(3, 3) == "low");
    CHECK(rank_label(2, 2) == "low");
    const auto c = Matrix::from_rows({{5.0, 1.0}, {9.0, 0.0}, {5.0, 3.0}, {5.0, 1.0}});
    CHECK(rank_order(c) == std::vector<std::size_t>{1, 2, 0, 3});
}

TEST_CASE("three plateaus give aligned rank labels in every window") {
    const auto power = plateau_series(4, 120, 1);
    const auto w = extract_concepts(power, config_with(4));
    REQUIRE(w.size() == 4);
    for (const auto& win : w) {
        REQUIRE(win.concepts.size() == 3);
        CHECK(win.concepts[0].centroid.z == doctest::Approx(80000.0).epsilon(0.01));
        CHECK(win.concepts[1].centroid.z == doctest::Approx(50000.0).epsilon(0.01));
        CHECK(win.concepts[2].centroid.z == doctest::Approx(20000.0).epsilon(0.02));
    }
}

TEST_CASE("concept extraction invariants") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(60000.0, 8000.0);
    for (std::size_t n : {250u, 401u, 999u}) {
        std::vector<double> power;
        for (std::size_t i = 0; i < n; ++i) power.push_back(g(rng));
        for (std::size_t r : {1u, 7u, 20u}) {
            const auto w = extract_concepts(power, config_with(r), 3);
            REQUIRE(w.size() == r);
            std::size_t deltas = 0;
            for (const auto& win : w) {
                deltas += win.memberships.rows();
                CHECK(win.memberships.rows() == win.sample_count - 1);
                CHECK(win.concepts.size() == 3);
                for (std::size_t k = 1; k < win.concepts.size(); ++k)
                    CHECK(win.concepts[k - 1].centroid.z >= win.concepts[k].centroid.z);
                for (std::size_t i = 0; i < win.memberships.rows(); ++i) {
                    double s = 0.0;
                    for (double u : win.memberships.row(i)) s += u;
                    CHECK(std::abs(s - 1.0) < 1e-9);
                }
            }
            CHECK(deltas == n - r);
        }
    }
}

TEST_CASE("sorting permutes the unsorted FCM result") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(60000.0, 8000.0);
    std::vector<double> power;
    for (int i = 0; i < 40; ++i) power.push_back(g(rng));
    auto cfg = config_with(1);
    const auto w = extract_concepts(power, cfg, 2).front();

    const auto deltas = delta_transform(power);
    Matrix pts(deltas.size(), 2);
    for (std::size_t i = 0; i < deltas.size(); ++i) pts(i, 0) = deltas[i].z, pts(i, 1) = deltas[i].dz;
    FcmParams p = cfg.fcm;
    p.seed = window_seed(cfg.fcm.seed, 2, 1);
    const auto raw = fcm_fit(pts, p);
    for (std::size_t j = 0; j < 3; ++j) {
        const auto it = std::find_if(w.concepts.begin(), w.concepts.end(), [&](const Concept& c) {
            return c.centroid.z == raw.centroids(j, 0) && c.centroid.dz == raw.centroids(j, 1);
        });
        REQUIRE(it != w.concepts.end());
        const std::size_t col = it->rank - 1;
        for (std::size_t i = 0; i < pts.rows(); ++i) CHECK(w.memberships(i, col) == raw.memberships(i, j));
    }
}

TEST_CASE("too little data is reported as insufficient") {
    const std::vector<double> power(50, 1.0);
    CHECK_THROWS_AS(extract_concepts(power, config_with(20)), InsufficientData);
    CHECK_NOTHROW(extract_concepts(power, config_with(5)));
}

TEST_CASE("window seeds differ by sub-bin and window") {
    CHECK(window_seed(1, 0, 1) != window_seed(1, 0, 2));
    CHECK(window_seed(1, 0, 1) != window_seed(1, 1, 1));
    CHECK(window_seed(1, 0, 1) != window_seed(2, 0, 1));
    CHECK(window_seed(1, 0, 1) == window_seed(1, 0, 1));
}

TEST_CASE("time reversal mirrors the window layout") {
    const std::size_t n = 120, r = 6;
    const auto fwd = split_windows(n, r);
    const auto rev = split_windows(n, r);
    for (std::size_t w = 0; w < r; ++w) {
        CHECK(rev[w].begin == n - fwd[r - 1 - w].end);
        CHECK(rev[w].end == n - fwd[r - 1 - w].begin);
    }
    std::vector<double> power(n);
    for (std::size_t i = 0; i < n; ++i) power[i] = static_cast<double>((i * 7919) % 101);
    std::vector<double> reversed(power.rbegin(), power.rend());
    const auto a = extract_concepts(power, config_with(r));
    const auto b = extract_concepts(reversed, config_with(r));
    for (std::size_t w = 0; w < r; ++w) {
        std::vector<double> za, zb;
        for (std::size_t i = 0; i < a[w].sample_count; ++i) za.push_back(power[a[w].first_sample + i]);
        for (std::size_t i = 0; i < b[r - 1 - w].sample_count; ++i) zb.push_back(reversed[b[r - 1 - w].first_sample + i]);
        std::reverse(zb.begin(), zb.end());
        CHECK(za == zb);
    }
}

TEST_CASE("concept scatter round-trips") {
    const auto power = plateau_series(2, 40, 9);
    const auto w = extract_concepts(power, config_with(2));
    std::stringstream buf;
    emit_concept_scatter(w, buf);
    const auto rows = read_concept_scatter(buf);
    REQUIRE(rows.size() == 6);
    std::size_t k = 0;
    for (const auto& win : w)
        for (const auto& c : win.concepts) {
            CHECK(rows[k].window_index == win.window_index);
            CHECK(rows[k].rank_label == rank_label(c.rank, 3));
            CHECK(rows[k].centroid == c.centroid);
            ++k;
        }
}
