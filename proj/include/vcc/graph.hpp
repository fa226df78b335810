// graph.hpp - simple undirected graphs, standard families, graph6 / edge-list
// ingestion and the vertex complemented corona constructor.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcc {

using Edge = std::pair<int, int>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Undirected simple graph on {0..n-1}. Edges are kept as a sorted list of
// (lo, hi) pairs so that equality is structural.
class Graph {
public:
    Graph() = default;

    Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 0) {
            throw std::invalid_argument("Graph: negative vertex count");
        }
        for (auto& [a, b] : edges_) {
            if (a < 0 || b < 0 || a >= n_ || b >= n_) {
                throw std::invalid_argument("Graph: edge endpoint out of range (" + std::to_string(a) +
                                            "," + std::to_string(b) + ")");
            }
            if (a == b) {
                throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(a));
            }
            if (a > b) std::swap(a, b);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw std::invalid_argument("Graph: duplicate edge");
        }
    }

    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool has_edge(int a, int b) const {
        if (a > b) std::swap(a, b);
        return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
    }

    std::vector<int> degrees() const {
        std::vector<int> deg(static_cast<std::size_t>(n_), 0);
        for (const auto& [a, b] : edges_) {
            ++deg[static_cast<std::size_t>(a)];
            ++deg[static_cast<std::size_t>(b)];
        }
        return deg;
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_{0};
    std::vector<Edge> edges_;
};

// ------------------------------- families ----------------------------------

enum class Family { path, complete, cycle, empty };

inline Graph standard_family(Family kind, int n) {
    if (n < 1) {
        throw std::invalid_argument("standard_family: n must be >= 1");
    }
    std::vector<Edge> edges;
    switch (kind) {
    case Family::path:
        for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
        break;
    case Family::cycle:
        if (n < 3) {
            throw std::invalid_argument("standard_family: cycle needs n >= 3");
        }
        for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
        edges.emplace_back(0, n - 1);
        break;
    case Family::complete:
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
        break;
    case Family::empty:
        break;
    }
    return Graph(n, std::move(edges));
}

// ------------------------------ components ---------------------------------

// Number of connected components, by union-find.
inline int component_count(const Graph& g) {
    std::vector<int> parent(static_cast<std::size_t>(g.order()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    };
    int components = g.order();
    for (const auto& [a, b] : g.edges()) {
        int ra = find(a);
        int rb = find(b);
        if (ra != rb) {
            parent[static_cast<std::size_t>(ra)] = rb;
            --components;
        }
    }
    return components;
}

inline bool is_connected(const Graph& g) { return g.order() >= 1 && component_count(g) == 1; }

// ------------------------------- Laplacian ---------------------------------

inline IntMatrix laplacian(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.order());
    IntMatrix L = IntMatrix::Zero(n, n);
    for (const auto& [a, b] : g.edges()) {
        L(a, b) = -1;
        L(b, a) = -1;
        L(a, a) += 1;
        L(b, b) += 1;
    }
    return L;
}

// -------------------------------- graph6 -----------------------------------

class Graph6Error : public std::runtime_error {
public:
    enum class Code { empty_input, byte_out_of_range, unsupported_size, bad_length, trailing_garbage };

    Graph6Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

// Short-form graph6 (n <= 62). Bits of the upper triangle are read column by
// column: (0,1), (0,2), (1,2), (0,3), ... six per byte, most significant first.
inline Graph parse_graph6(std::string_view text) {
    using C = Graph6Error::Code;
    // Tolerate the line terminator of a corpus file, nothing else.
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw Graph6Error(C::empty_input, "graph6: empty input");
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c < 63 || c > 126) {
            if (i > 0 && (c == ' ' || c == '\t')) {
                throw Graph6Error(C::trailing_garbage, "graph6: trailing characters after record");
            }
            throw Graph6Error(C::byte_out_of_range,
                              "graph6: byte " + std::to_string(c) + " at offset " + std::to_string(i) +
                                  " outside 63..126");
        }
    }
    const int n = static_cast<unsigned char>(text[0]) - 63;
    if (n == 63) throw Graph6Error(C::unsupported_size, "graph6: long form (n >= 63) not supported");

    const std::size_t bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
    const std::size_t want = (bits + 5) / 6;
    const std::size_t have = text.size() - 1;
    if (have < want) {
        throw Graph6Error(C::bad_length, "graph6: expected " + std::to_string(want) + " data bytes for n=" +
                                             std::to_string(n) + ", got " + std::to_string(have));
    }
    if (have > want) {
        throw Graph6Error(C::trailing_garbage, "graph6: " + std::to_string(have - want) +
                                                   " trailing byte(s) after record");
    }

    std::vector<Edge> edges;
    std::size_t bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            const int byte = static_cast<unsigned char>(text[1 + bit / 6]) - 63;
            if ((byte >> (5 - bit % 6)) & 1) edges.emplace_back(i, j);
        }
    }
    return Graph(n, std::move(edges));
}

// ------------------------------- edge list ---------------------------------

// One "u v" pair per line, '#' starts a comment. The vertex count is
// max index + 1 unless a "# vertices N" comment sets it explicitly.
inline Graph read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    int declared = -1;
    int max_index = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            std::istringstream comment(line.substr(hash + 1));
            std::string key;
            int count = 0;
            if (comment >> key && key == "vertices" && comment >> count) declared = count;
            line.erase(hash);
        }
        std::istringstream ss(line);
        int a = 0;
        int b = 0;
        if (!(ss >> a)) continue;
        std::string rest;
        if (!(ss >> b) || (ss >> rest)) {
            throw std::invalid_argument("edge list: malformed line " + std::to_string(lineno));
        }
        edges.emplace_back(a, b);
        max_index = std::max({max_index, a, b});
    }
    const int n = declared >= 0 ? declared : max_index + 1;
    return Graph(n, std::move(edges));
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# vertices " << g.order() << '\n';
    for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

// -------------------------------- corona -----------------------------------

// Flat indexing of a corona: backbone vertex v is v; satellite w (1-based) of
// owner j is n + (k_0 + ... + k_{j-1}) + (w - 1).
class CoronaLabeling {
public:
    CoronaLabeling() = default;

    explicit CoronaLabeling(std::vector<int> sizes) : sizes_(std::move(sizes)) {
        offsets_.reserve(sizes_.size() + 1);
        int acc = static_cast<int>(sizes_.size());
        for (int k : sizes_) {
            if (k < 0) throw std::invalid_argument("CoronaLabeling: negative satellite size");
            offsets_.push_back(acc);
            acc += k;
        }
        total_ = acc;
    }

    int backbone_size() const noexcept { return static_cast<int>(sizes_.size()); }
    int total() const noexcept { return total_; }
    const std::vector<int>& satellite_sizes() const noexcept { return sizes_; }

    bool uniform() const {
        return std::adjacent_find(sizes_.begin(), sizes_.end(), std::not_equal_to<>{}) == sizes_.end();
    }

    int flat(int owner, int w) const {
        if (owner < 0 || owner >= backbone_size()) {
            throw std::out_of_range("CoronaLabeling: owner out of range");
        }
        if (w == 0) return owner;
        if (w < 0 || w > sizes_[static_cast<std::size_t>(owner)]) {
            throw std::out_of_range("CoronaLabeling: satellite index out of range");
        }
        return offsets_[static_cast<std::size_t>(owner)] + w - 1;
    }

    // Inverse of flat(): (owner, w), w = 0 for backbone vertices.
    std::pair<int, int> composite(int index) const {
        if (index < 0 || index >= total_) throw std::out_of_range("CoronaLabeling: index out of range");
        if (index < backbone_size()) return {index, 0};
        const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
        // last owner whose offset is <= index; earlier ties have empty satellites
        const auto owner = static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
        return {owner, index - offsets_[static_cast<std::size_t>(owner)] + 1};
    }

    bool is_backbone(int index) const { return index >= 0 && index < backbone_size(); }

private:
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    int total_{0};
};

struct Corona {
    Graph graph;
    CoronaLabeling labeling;
};

// Disjoint union of g and hs[i], plus every edge between V(hs[i]) and
// V(g) \ {i}.
inline Corona vertex_complemented_corona(const Graph& g, const std::vector<Graph>& hs) {
    const int n = g.order();
    if (static_cast<int>(hs.size()) != n) {
        throw std::invalid_argument("vertex_complemented_corona: got " + std::to_string(hs.size()) +
                                    " satellites for a base graph on " + std::to_string(n) + " vertices");
    }
    std::vector<int> sizes;
    sizes.reserve(hs.size());
    for (const auto& h : hs) sizes.push_back(h.order());
    CoronaLabeling labels(std::move(sizes));

    std::vector<Edge> edges(g.edges());
    for (int i = 0; i < n; ++i) {
        const auto& h = hs[static_cast<std::size_t>(i)];
        for (const auto& [a, b] : h.edges()) {
            edges.emplace_back(labels.flat(i, a + 1), labels.flat(i, b + 1));
        }
        for (int w = 1; w <= h.order(); ++w) {
            const int s = labels.flat(i, w);
            for (int j = 0; j < n; ++j) {
                if (j != i) edges.emplace_back(j, s);
            }
        }
    }
    return {Graph(labels.total(), std::move(edges)), std::move(labels)};
}

inline Corona vertex_complemented_corona(const Graph& g, const Graph& satellite) {
    return vertex_complemented_corona(g, std::vector<Graph>(static_cast<std::size_t>(g.order()), satellite));
}

}  // namespace vcc
