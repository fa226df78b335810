// source.hpp - textual graph sources used by the command line:
//   base graphs:  g6:<graph6> | edges:<path> | path:<n> | complete:<n> | cycle:<n> | empty:<n>
//   satellites:   uniform:<family>:<size> | comma list of Pn / Kn / Cn / En

#pragma once

#include "graph.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vcc {

namespace detail {

inline int parse_count(std::string_view s, std::string_view what) {
    int value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < 1) {
        throw std::invalid_argument(std::string(what) + ": expected a positive integer, got '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace detail

inline Family parse_family(std::string_view name) {
    if (name == "path" || name == "P") return Family::path;
    if (name == "complete" || name == "K") return Family::complete;
    if (name == "cycle" || name == "C") return Family::cycle;
    if (name == "empty" || name == "E") return Family::empty;
    throw std::invalid_argument("unknown graph family '" + std::string(name) + "'");
}

inline Graph parse_base_source(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("base graph: expected <kind>:<value>, got '" + std::string(text) + "'");
    }
    const auto kind = text.substr(0, colon);
    const auto value = text.substr(colon + 1);
    if (kind == "g6") return parse_graph6(value);
    if (kind == "edges") {
        std::ifstream in{std::string(value)};
        if (!in) throw std::invalid_argument("base graph: cannot open edge list '" + std::string(value) + "'");
        return read_edge_list(in);
    }
    return standard_family(parse_family(kind), detail::parse_count(value, "base graph size"));
}

// Pn, Kn, Cn, En
inline Graph parse_satellite_token(std::string_view token) {
    if (token.size() < 2) throw std::invalid_argument("satellite: malformed token '" + std::string(token) + "'");
    return standard_family(parse_family(token.substr(0, 1)), detail::parse_count(token.substr(1), "satellite size"));
}

// Uniform specs are expanded to base_order copies.
inline std::vector<Graph> parse_satellites(std::string_view text, int base_order) {
    std::vector<Graph> out;
    if (text.starts_with("uniform:")) {
        const auto rest = text.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("satellites: expected uniform:<family>:<size>");
        }
        const auto h = standard_family(parse_family(rest.substr(0, colon)),
                                       detail::parse_count(rest.substr(colon + 1), "satellite size"));
        out.assign(static_cast<std::size_t>(base_order), h);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_satellite_token(token));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace vcc
