#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flexhome {

// Shortest decimal representation that round-trips the exact double
// (std::to_chars). Locale-free, byte-stable, used for every CSV/config value
// we emit so reruns are byte-identical and load(write(x)) == x.
std::string format_double(double v);
std::string format_i64(std::int64_t v);
std::string format_u64(std::uint64_t v);

// Strict parsers: the whole string must be consumed. Return false on failure.
bool parse_double(std::string_view s, double& out);
bool parse_i64(std::string_view s, std::int64_t& out);
bool parse_u64(std::string_view s, std::uint64_t& out);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace flexhome
