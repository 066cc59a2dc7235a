#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

// Small text helpers shared by the CSV, config and checkpoint readers.
namespace pmuguard::text {

// "%.9g"
std::string format_sig9(double value);

// Round-trips exactly through parse_number ("%.17g").
std::string format_exact(double value);

// Nearest double to the 9-significant-digit decimal rendering of value.
double quantize_sig9(double value);

std::vector<std::string_view> split(std::string_view line, char sep);

// Whole-token parse; throws ParseError on trailing garbage or empty input.
double parse_number(std::string_view token);
std::int64_t parse_integer(std::string_view token);

std::string read_file(const std::string& path);

// Parses a JSON config and checks its {"format": ..., "version": ...} header.
nlohmann::json parse_config(const std::string& json_text, std::string_view format,
                            int max_version);

}  // namespace pmuguard::text
