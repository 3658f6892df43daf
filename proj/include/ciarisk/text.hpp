#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ciarisk::text {

// Field escaping for the tab-separated record format: \\ \t \n \r.
std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

// Splits on '\t', keeping empty fields (including a trailing one).
std::vector<std::string> split_tabs(std::string_view line);

// Splits on runs of spaces/tabs, dropping empties.
std::vector<std::string> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
// Fixed one-decimal form used for money amounts in rendered output.
std::string format_money(double value);

double parse_double(std::string_view token, std::string_view what);
std::int64_t parse_i64(std::string_view token, std::string_view what);
std::uint64_t parse_u64(std::string_view token, std::string_view what);

// A "name:" header followed by its body lines ('#' comments and blanks removed).
struct Section {
    std::string name;
    std::vector<std::string> lines;
};
std::vector<Section> read_sections(std::istream& in);

}  // namespace ciarisk::text
