#include "ciarisk/text.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "ciarisk/error.hpp"

namespace ciarisk::text {

std::string escape_field(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

std::string unescape_field(std::string_view escaped) {
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        char c = escaped[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        if (i + 1 == escaped.size())
            raise(Errc::parse_error, "dangling escape at end of field");
        switch (escaped[++i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: raise(Errc::parse_error, "unknown escape sequence in field");
        }
    }
    return out;
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        raise(Errc::invariant_violation, "failed to format double");
    return std::string(buf, ptr);
}

std::string format_money(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

double parse_double(std::string_view token, std::string_view what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        raise(Errc::parse_error, "bad number for " + std::string(what) + ": '" + std::string(token) + "'");
    return value;
}

std::int64_t parse_i64(std::string_view token, std::string_view what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        raise(Errc::parse_error, "bad integer for " + std::string(what) + ": '" + std::string(token) + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view token, std::string_view what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        raise(Errc::parse_error, "bad unsigned integer for " + std::string(what) + ": '" + std::string(token) + "'");
    return value;
}

std::vector<Section> read_sections(std::istream& in) {
    std::vector<Section> sections;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (sv.back() == ':' && sv.find(' ') == std::string_view::npos && sv.find('\t') == std::string_view::npos) {
            sections.push_back({std::string(sv.substr(0, sv.size() - 1)), {}});
            continue;
        }
        if (sections.empty())
            raise(Errc::parse_error, "content before first section header: '" + std::string(sv) + "'");
        sections.back().lines.emplace_back(sv);
    }
    return sections;
}

}  // namespace ciarisk::text
