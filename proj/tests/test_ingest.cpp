#include "doctest.h"

#include <sstream>

#include "fzhealth/errors.hpp"
#include "fzhealth/ingest.hpp"
#include "fzhealth/synth.hpp"

using namespace fzh;

namespace {

LoadResult load(const std::string& csv, const ColumnMap& cols = {}, const CsvOptions& opt = {}) {
    std::istringstream in(csv);
    return load_scada(in, cols, opt);
}

const char* kHeader = "timestamp,turbine_id,wind_speed,temperature,power\n";

}  // namespace

TEST_CASE("rows with a missing power value are dropped and counted") {
    const auto r = load(std::string(kHeader) +
                        "2016-01-01T00:00:00Z,T1,5,15,100\n"
                        "2016-01-01T00:10:00Z,T1,6,15,\n"
                        "2016-01-01T00:20:00Z,T1,7,15,300\n"
                        "2016-01-01T00:30:00Z,T1,8,15,400\n");
    CHECK(r.series.total_records() == 3);
    CHECK(r.stats.dropped_invalid == 1);
    CHECK(r.stats.rows_read == 4);
}

TEST_CASE("shuffled timestamps come back sorted") {
    const auto r = load(std::string(kHeader) +
                        "2016-01-01T00:20:00Z,T1,7,15,300\n"
                        "2016-01-01T00:00:00Z,T1,5,15,100\n"
                        "2016-01-01T00:10:00Z,T1,6,15,200\n");
    const auto& recs = r.series.turbines.at("T1");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].power == 100);
    CHECK(recs[1].power == 200);
    CHECK(recs[2].power == 300);
    CHECK(r.series.sampling_period == std::chrono::seconds{600});
}

TEST_CASE("duplicate timestamps keep the first row") {
    const auto r = load(std::string(kHeader) +
                        "2016-01-01T00:00:00Z,T1,5,15,100\n"
                        "2016-01-01T00:00:00Z,T1,6,15,999\n"
                        "2016-01-01T00:00:00Z,T2,6,15,50\n");
    CHECK(r.series.turbines.at("T1").size() == 1);
    CHECK(r.series.turbines.at("T1")[0].power == 100);
    CHECK(r.series.turbines.at("T2").size() == 1);
    CHECK(r.stats.dropped_duplicate == 1);
}

TEST_CASE("negative wind and bad timestamps are invalid") {
    const auto r = load(std::string(kHeader) +
                        "2016-01-01T00:00:00Z,T1,-1,15,100\n"
                        "yesterday,T1,5,15,100\n"
                        "2016-01-01T00:10:00Z,T1,5,nan?,100\n"
                        "2016-01-01T00:20:00Z,T1,5,15,100\n");
    CHECK(r.series.total_records() == 1);
    CHECK(r.stats.dropped_invalid == 3);
}

TEST_CASE("ingest errors") {
    CHECK_THROWS_AS(load_scada(std::filesystem::path("/nonexistent/file.csv")), DataError);
    CHECK_THROWS_AS(load("timestamp,turbine_id,wind_speed,power\n2016-01-01T00:00:00Z,T1,5,1\n"), DataError);
    CHECK_THROWS_AS(load(std::string(kHeader) + "2016-01-01T00:00:00Z,T1,,15,100\n"), DataError);
    CHECK_THROWS_AS(load(""), DataError);
}

TEST_CASE("column mapping, delimiter and timestamp format") {
    ColumnMap cols;
    cols.timestamp = "Timestamp";
    cols.wind = "Amb_WindSpeed_Avg";
    cols.temperature = "Amb_Temp_Avg";
    cols.power = "Grd_Prod_Pwr_Avg";
    cols.constant_turbine_id = "T11";
    CsvOptions opt;
    opt.delimiter = ';';
    opt.timestamp_format = "%d/%m/%Y %H:%M";
    const auto r = load("Timestamp;Amb_WindSpeed_Avg;Amb_Temp_Avg;Grd_Prod_Pwr_Avg\n"
                        "02/01/2016 10:30;6.1;14.5;70000\n",
                        cols, opt);
    const auto& rec = r.series.turbines.at("T11").at(0);
    CHECK(format_iso8601(rec.timestamp) == "2016-01-02T10:30:00Z");
    CHECK(rec.wind_speed == 6.1);
    CHECK(rec.temperature == 14.5);
}

TEST_CASE("ISO-8601 variants") {
    CHECK(parse_iso8601("2016-01-01T00:00:00Z") == parse_iso8601("2016-01-01 00:00:00"));
    CHECK(parse_iso8601("2016-01-01T01:00:00+01:00") == parse_iso8601("2016-01-01T00:00:00Z"));
    CHECK(parse_iso8601("2016-01-01T00:00:00.750Z") == parse_iso8601("2016-01-01T00:00:00Z"));
    CHECK_FALSE(parse_iso8601("2016-13-01T00:00:00Z"));
    CHECK_FALSE(parse_iso8601("not a date"));
}

TEST_CASE("summarize aggregates exactly") {
    const auto r = load(std::string(kHeader) +
                        "2016-01-01T00:00:00Z,T1,2,10,1\n"
                        "2016-01-01T00:10:00Z,T1,5,-3,7\n"
                        "2016-01-01T00:20:00Z,T1,11,4,2\n");
    const auto s = summarize(r.series);
    REQUIRE(s.size() == 1);
    CHECK(s[0].wind.min == 2);
    CHECK(s[0].wind.max == 11);
    CHECK(s[0].temperature.min == -3);
    CHECK(s[0].power.max == 7);
    CHECK(s[0].span == std::chrono::seconds{1200});

    const auto one = summarize(load(std::string(kHeader) + "2016-01-01T00:00:00Z,T1,2,10,1\n").series);
    CHECK(one[0].span == std::chrono::seconds{0});
}

TEST_CASE("synthetic series summary matches generator length") {
    SynthConfig c;
    c.samples = 100;
    const auto s = summarize(generate_scada(c));
    REQUIRE(s.size() == 1);
    CHECK(s[0].count == 100);
}

TEST_CASE("write then load reproduces the series bit-exactly and loading is idempotent") {
    SynthConfig c;
    c.samples = 500;
    c.noise = 0.03;
    c.degradation = 1e-5;
    const auto series = generate_scada(c);
    std::stringstream buf;
    write_scada_csv(series, buf);
    const auto text = buf.str();
    const auto a = load(text);
    const auto b = load(text);
    CHECK(a.series == series);
    CHECK(a.series == b.series);
}
