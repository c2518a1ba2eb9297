#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fzh {

/// Value computed for one sub-bin; nullopt when the sub-bin was skipped.
struct SubBinValue {
    std::size_t temp_index = 0;
    std::size_t wind_index = 0;
    std::optional<double> value;
};

/// Temperature rows x wind-bin columns, with a trailing "sum" row of column
/// sums and, optionally, a "sum" column of row sums plus the grand total.
/// Missing cells do not contribute to sums.
struct HealthTable {
    std::string title;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::optional<double>>> cells;
    std::vector<double> column_sums;
    std::vector<double> row_sums;  // empty unless with_row_sums
    double total = 0.0;
    bool with_row_sums = false;
};

HealthTable make_table(std::string title, std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                       std::span<const SubBinValue> values, double scale, bool with_row_sums);

void write_table_csv(const HealthTable& table, std::ostream& out);
void write_table_csv(const HealthTable& table, const std::filesystem::path& path);

// Fixed-width text rendering for terminals.
void print_table(const HealthTable& table, std::ostream& out, int decimals = 2);

}  // namespace fzh
