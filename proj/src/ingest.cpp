#include "fzhealth/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "fzhealth/errors.hpp"
#include "fzhealth/text.hpp"

namespace fzh {

namespace {

bool read_int(std::string_view& s, std::size_t digits, int& out) {
    if (s.size() < digits) return false;
    int v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    s.remove_prefix(digits);
    return true;
}

bool consume(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

std::optional<Timestamp> make_utc(int y, int mo, int d, int h, int mi, int sec) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

std::chrono::seconds median_positive_gap(const std::vector<SampleRecord>& recs) {
    std::vector<std::int64_t> gaps;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto g = (recs[i].timestamp - recs[i - 1].timestamp).count();
        if (g > 0) gaps.push_back(g);
    }
    if (gaps.empty()) return std::chrono::seconds{600};
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    return std::chrono::seconds{gaps[gaps.size() / 2]};
}

}  // namespace

std::size_t SeriesSet::total_records() const noexcept {
    std::size_t n = 0;
    for (const auto& [id, recs] : turbines) n += recs.size();
    return n;
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
    s = trim(s);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_int(s, 4, y) || !consume(s, '-') || !read_int(s, 2, mo) || !consume(s, '-') || !read_int(s, 2, d))
        return std::nullopt;
    int offset_minutes = 0;
    if (!s.empty()) {
        if (s.front() != 'T' && s.front() != 't' && s.front() != ' ') return std::nullopt;
        s.remove_prefix(1);
        if (!read_int(s, 2, h) || !consume(s, ':') || !read_int(s, 2, mi)) return std::nullopt;
        if (consume(s, ':')) {
            if (!read_int(s, 2, sec)) return std::nullopt;
            if (consume(s, '.') || consume(s, ',')) {
                // fractional seconds are truncated
                std::size_t n = 0;
                while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
                if (n == 0) return std::nullopt;
                s.remove_prefix(n);
            }
        }
        if (consume(s, 'Z') || consume(s, 'z')) {
        } else if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            const int sign = s.front() == '-' ? -1 : 1;
            s.remove_prefix(1);
            int oh = 0, om = 0;
            if (!read_int(s, 2, oh)) return std::nullopt;
            consume(s, ':');
            if (!s.empty() && !read_int(s, 2, om)) return std::nullopt;
            offset_minutes = sign * (oh * 60 + om);
        }
        if (!s.empty()) return std::nullopt;
    }
    auto t = make_utc(y, mo, d, h, mi, sec);
    if (!t) return std::nullopt;
    return *t - std::chrono::minutes{offset_minutes};
}

std::optional<Timestamp> parse_timestamp(std::string_view text, const std::string& format) {
    if (format.empty()) return parse_iso8601(text);
    std::tm tm{};
    std::istringstream in{std::string(trim(text))};
    in >> std::get_time(&tm, format.c_str());
    if (in.fail()) return std::nullopt;
    return make_utc(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    const auto days = floor<std::chrono::days>(t);
    const year_month_day ymd{days};
    const hh_mm_ss hms{t - days};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

LoadResult load_scada(const std::filesystem::path& path, const ColumnMap& columns, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path.string());
    return load_scada(in, columns, options);
}

LoadResult load_scada(std::istream& in, const ColumnMap& columns, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("input has no header row");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = split_csv_line(line, options.delimiter);

    auto find_col = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return i;
        throw DataError("mapped column not found in header: '" + name + "'");
    };
    const std::size_t c_time = find_col(columns.timestamp);
    const std::size_t c_wind = find_col(columns.wind);
    const std::size_t c_temp = find_col(columns.temperature);
    const std::size_t c_power = find_col(columns.power);
    const std::optional<std::size_t> c_id =
        columns.constant_turbine_id ? std::nullopt : std::optional{find_col(columns.turbine_id)};

    LoadResult result;
    auto& stats = result.stats;
    std::map<std::string, std::vector<SampleRecord>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++stats.rows_read;
        const auto f = split_csv_line(line, options.delimiter);
        auto field = [&](std::size_t c) -> std::string_view { return c < f.size() ? trim(f[c]) : std::string_view{}; };

        SampleRecord r;
        const auto ts = parse_timestamp(field(c_time), options.timestamp_format);
        const auto w = parse_double(field(c_wind));
        const auto t = parse_double(field(c_temp));
        const auto p = parse_double(field(c_power));
        r.turbine_id = columns.constant_turbine_id ? *columns.constant_turbine_id : std::string(field(*c_id));
        if (!ts || !w || !t || !p || r.turbine_id.empty() || !std::isfinite(*w) || !std::isfinite(*t) ||
            !std::isfinite(*p) || *w < 0.0) {
            ++stats.dropped_invalid;
            continue;
        }
        r.timestamp = *ts;
        r.wind_speed = *w;
        r.temperature = *t;
        r.power = *p;
        rows[r.turbine_id].push_back(std::move(r));
    }

    for (auto& [id, recs] : rows) {
        // stable sort keeps file order among equal timestamps, so "first" is the first in the file
        std::stable_sort(recs.begin(), recs.end(),
                         [](const SampleRecord& a, const SampleRecord& b) { return a.timestamp < b.timestamp; });
        const auto last = std::unique(recs.begin(), recs.end(), [](const SampleRecord& a, const SampleRecord& b) {
            return a.timestamp == b.timestamp;
        });
        stats.dropped_duplicate += static_cast<std::size_t>(recs.end() - last);
        recs.erase(last, recs.end());
    }
    if (rows.empty()) throw DataError("no valid rows in input");

    result.series.sampling_period = median_positive_gap(rows.begin()->second);
    result.series.turbines = std::move(rows);
    return result;
}

void write_scada_csv(const SeriesSet& series, std::ostream& out) {
    out << "timestamp,turbine_id,wind_speed,temperature,power\n";
    for (const auto& [id, recs] : series.turbines) {
        for (const auto& r : recs) {
            out << format_iso8601(r.timestamp) << ',' << csv_field(r.turbine_id) << ',' << format_exact(r.wind_speed)
                << ',' << format_exact(r.temperature) << ',' << format_exact(r.power) << '\n';
        }
    }
}

void write_scada_csv(const SeriesSet& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    write_scada_csv(series, out);
}

void write_ingest_report(const IngestStats& stats, std::ostream& out) {
    out << "rows read: " << stats.rows_read << '\n'
        << "dropped (missing or unparsable field): " << stats.dropped_invalid << '\n'
        << "dropped (duplicate timestamp): " << stats.dropped_duplicate << '\n'
        << "kept: " << stats.rows_read - stats.dropped() << '\n';
}

std::vector<TurbineSummary> summarize(const SeriesSet& series) {
    std::vector<TurbineSummary> out;
    for (const auto& [id, recs] : series.turbines) {
        if (recs.empty()) continue;
        TurbineSummary s;
        s.turbine_id = id;
        s.count = recs.size();
        s.first = recs.front().timestamp;
        s.last = recs.back().timestamp;
        s.span = s.last - s.first;
        auto range = [&](auto proj) {
            FieldRange fr{proj(recs.front()), proj(recs.front())};
            for (const auto& r : recs) {
                fr.min = std::min(fr.min, proj(r));
                fr.max = std::max(fr.max, proj(r));
            }
            return fr;
        };
        s.wind = range([](const SampleRecord& r) { return r.wind_speed; });
        s.temperature = range([](const SampleRecord& r) { return r.temperature; });
        s.power = range([](const SampleRecord& r) { return r.power; });
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace fzh
