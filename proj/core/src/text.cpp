#include "pmuguard/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmuguard/error.hpp"

namespace pmuguard::text {

std::string format_sig9(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string format_exact(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double quantize_sig9(double value) {
    if (!std::isfinite(value)) return value;
    return parse_number(format_sig9(value));
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_number(std::string_view token) {
    token = trim(token);
    if (token.empty()) throw ParseError("empty numeric field");
    // from_chars rejects a leading '+', and strtod handles nan/inf spellings.
    const std::string owned(token);
    char* end = nullptr;
    const double v = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size()) {
        throw ParseError("malformed number '" + owned + "'");
    }
    return v;
}

std::int64_t parse_integer(std::string_view token) {
    token = trim(token);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("malformed integer '" + std::string(token) + "'");
    }
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json parse_config(const std::string& json_text, std::string_view format,
                            int max_version) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed ") + std::string(format) + " config: " + e.what());
    }
    if (!j.is_object() || !j.contains("format") || !j.contains("version")) {
        throw ConfigError(std::string(format) + " config lacks the format/version header");
    }
    if (j["format"] != format) {
        throw ConfigError("expected format '" + std::string(format) + "', got " +
                          j["format"].dump());
    }
    if (!j["version"].is_number_integer() || j["version"].get<int>() < 1 ||
        j["version"].get<int>() > max_version) {
        throw ConfigError("unsupported " + std::string(format) + " version " +
                          j["version"].dump());
    }
    return j;
}

}  // namespace pmuguard::text
