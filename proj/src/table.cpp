#include "fzhealth/table.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "fzhealth/errors.hpp"
#include "fzhealth/text.hpp"

namespace fzh {

HealthTable make_table(std::string title, std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                       std::span<const SubBinValue> values, double scale, bool with_row_sums) {
    HealthTable t;
    t.title = std::move(title);
    t.row_labels = std::move(row_labels);
    t.col_labels = std::move(col_labels);
    t.with_row_sums = with_row_sums;
    const std::size_t nr = t.row_labels.size();
    const std::size_t nc = t.col_labels.size();
    t.cells.assign(nr, std::vector<std::optional<double>>(nc));
    for (const auto& v : values) {
        if (v.temp_index >= nr || v.wind_index >= nc) throw std::out_of_range("make_table: sub-bin outside table");
        if (v.value) t.cells[v.temp_index][v.wind_index] = *v.value * scale;
    }
    t.column_sums.assign(nc, 0.0);
    if (with_row_sums) t.row_sums.assign(nr, 0.0);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            if (!t.cells[r][c]) continue;
            t.column_sums[c] += *t.cells[r][c];
            if (with_row_sums) t.row_sums[r] += *t.cells[r][c];
        }
    }
    for (double s : t.column_sums) t.total += s;
    return t;
}

void write_table_csv(const HealthTable& t, std::ostream& out) {
    out << "temperature";
    for (const auto& c : t.col_labels) out << ',' << csv_field(c);
    if (t.with_row_sums) out << ",sum";
    out << '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << csv_field(t.row_labels[r]);
        for (const auto& cell : t.cells[r]) {
            out << ',';
            if (cell) out << format_exact(*cell);
        }
        if (t.with_row_sums) out << ',' << format_exact(t.row_sums[r]);
        out << '\n';
    }
    out << "sum";
    for (double s : t.column_sums) out << ',' << format_exact(s);
    if (t.with_row_sums) out << ',' << format_exact(t.total);
    out << '\n';
}

void write_table_csv(const HealthTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    write_table_csv(table, out);
}

void print_table(const HealthTable& t, std::ostream& out, int decimals) {
    constexpr int w = 12;
    out << t.title << '\n' << std::setw(10) << "temp";
    for (const auto& c : t.col_labels) out << std::setw(w) << c;
    if (t.with_row_sums) out << std::setw(w) << "sum";
    out << '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << std::setw(10) << t.row_labels[r];
        for (const auto& cell : t.cells[r]) out << std::setw(w) << (cell ? format_fixed(*cell, decimals) : "-");
        if (t.with_row_sums) out << std::setw(w) << format_fixed(t.row_sums[r], decimals);
        out << '\n';
    }
    out << std::setw(10) << "sum";
    for (double s : t.column_sums) out << std::setw(w) << format_fixed(s, decimals);
    if (t.with_row_sums) out << std::setw(w) << format_fixed(t.total, decimals);
    out << '\n';
}

}  // namespace fzh
