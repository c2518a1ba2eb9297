#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fzhealth/errors.hpp"
#include "fzhealth/report.hpp"
#include "fzhealth/synth.hpp"

using namespace fzh;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("fzhealth_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

SeriesSet small_series(std::uint64_t seed, const std::string& id, double degradation = 0.0) {
    SynthConfig c;
    c.samples = 12000;
    c.noise = 0.02;
    c.seed = seed;
    c.turbine_id = id;
    c.degradation = degradation;
    return generate_scada(c);
}

}  // namespace

TEST_CASE("config JSON round-trips and rejects unknown keys") {
    RunConfig c;
    c.windows = 10;
    c.window_length = 40;
    c.seed = 77;
    c.di_metric = DistanceMetric::manhattan;
    c.columns.constant_turbine_id = "T06";
    c.csv.delimiter = ';';
    RunConfig back;
    apply_config_json(config_to_json(c), back);
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(back.window_length == 40);

    CHECK_THROWS_AS(apply_config_json(Json{{"windowz", 3}}, back), ConfigError);
    CHECK_THROWS_AS(apply_config_json(Json{{"windows", "many"}}, back), ConfigError);
    CHECK_THROWS_AS(apply_config_json(Json{{"di_metric", "cosine"}}, back), ConfigError);
    CHECK_THROWS_AS(apply_config_json(Json::array(), back), ConfigError);
}

TEST_CASE("sha256 of a known string") {
    const auto p = scratch("sha") ;
    fs::create_directories(p);
    std::ofstream(p / "abc.txt", std::ios::binary) << "abc";
    CHECK(sha256_file(p / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("outputs are listed in the manifest and independent of the output directory") {
    RunConfig c;
    c.windows = 10;
    const auto series = small_series(3, "A");
    const auto result = analyze(series, c);
    const auto d1 = scratch("out1"), d2 = scratch("out2");
    const auto m1 = write_outputs(result, c, d1);
    const auto m2 = write_outputs(result, c, d2);
    REQUIRE(m1.size() == m2.size());
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(d1))
        if (e.is_regular_file()) ++files;
    CHECK(files == m1.size() + 1);
    for (std::size_t i = 0; i < m1.size(); ++i) {
        CHECK(m1[i].path == m2[i].path);
        CHECK(m1[i].sha256 == m2[i].sha256);
        CHECK(m1[i].sha256 == sha256_file(d1 / m1[i].path));
    }
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));

    const auto report = Json::parse(slurp(d1 / "report.json"));
    CHECK(report.at("config").at("windows") == 10);
    const auto& t = report.at("turbines").at(0);
    CHECK(t.at("turbine_id") == "A");
    // every sub-bin is either analyzed or listed as skipped
    std::size_t analyzed = 0, skipped = 0;
    for (const auto& s : t.at("subbins")) (s.at("status") == "skipped" ? skipped : analyzed)++;
    CHECK(analyzed + skipped == 20);
    CHECK(report.at("skipped").size() == skipped);
}

TEST_CASE("compare ranks turbines and enforces identical settings") {
    RunConfig c;
    c.windows = 10;
    auto series = small_series(5, "B");
    series.turbines["A"] = small_series(5, "A").turbines.at("A");
    const auto report = analysis_to_json(analyze(series, c), c);
    const std::vector<Json> reports{report};
    const std::vector<std::string> src{"r.json"};
    const auto cmp = compare_reports(reports, src);
    REQUIRE(cmp.by_distance.size() == 2);
    // identical data: tie, so turbine-id order
    CHECK(cmp.by_distance[0].turbine_id == "A");
    CHECK(cmp.by_slope[0].turbine_id == "A");
    CHECK(cmp.by_distance[0].di_total == cmp.by_distance[1].di_total);

    RunConfig other = c;
    other.windows = 12;
    const std::vector<Json> mixed{report, analysis_to_json(analyze(series, other), other)};
    const std::vector<std::string> src2{"a", "b"};
    CHECK_THROWS_AS(compare_reports(mixed, src2), ConfigError);

    auto lone = small_series(5, "A");
    const std::vector<Json> single{analysis_to_json(analyze(lone, c), c)};
    CHECK_THROWS_AS(compare_reports(single, src), ConfigError);
}

TEST_CASE("histogram") {
    const std::vector<double> v{0, 1, 2, 3, 4};
    std::ostringstream out;
    emit_histogram(v, 2, out);
    CHECK(out.str() == "lower,upper,count\n0,2,2\n2,4,3\n");
}

TEST_CASE("analysis errors name the stage") {
    SeriesSet s;
    s.turbines["X"] = small_series(1, "X").turbines.at("X");
    for (auto& r : s.turbines["X"]) r.wind_speed = 2.0;
    try {
        analyze(s, RunConfig{});
        FAIL("expected a data error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("preprocess") != std::string::npos);
        CHECK(std::string(e.what()).find("X") != std::string::npos);
    }
    RunConfig bad;
    bad.fuzzifier = 1.0;
    CHECK_THROWS_AS(analyze(small_series(1, "X"), bad), ConfigError);
    RunConfig missing;
    missing.turbines = {"nope"};
    CHECK_THROWS_AS(analyze(small_series(1, "X"), missing), DataError);
}
