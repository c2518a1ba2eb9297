#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fzh {

// Shortest decimal text that parses back to the same double.
inline std::string format_exact(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed-point text with `digits` decimals, used for human-facing labels.
std::string format_fixed(double v, int digits);

std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view s) noexcept;

// Splits one CSV line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter);

// Quotes a field when it contains the delimiter, a quote or a newline.
std::string csv_field(std::string_view value, char delimiter = ',');

}  // namespace fzh
