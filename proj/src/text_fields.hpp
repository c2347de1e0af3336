#pragma once

#include "offd/error.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace offd::detail {

/// Splits on runs of spaces/tabs; trailing '\r' ignored.
inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    const auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) {
            ++i;
        }
        const auto start = i;
        while (i < line.size() && !is_sep(line[i])) {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

inline double parse_double(std::string_view text, std::size_t line_no)
{
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw DataError("line " + std::to_string(line_no) + ": non-numeric value '" +
                        std::string(text) + "'");
    }
    return value;
}

inline long long parse_int(std::string_view text, std::size_t line_no)
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                        std::string(text) + "'");
    }
    return value;
}

}  // namespace offd::detail
