#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csfs {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

/// Parses the whole of `text` as a real; nullopt on any leftover characters.
std::optional<double> parse_real(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);
std::optional<unsigned long long> parse_unsigned(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split_fields(std::string_view line, char sep);

}  // namespace csfs
