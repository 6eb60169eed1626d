#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cbp/ctbp.hpp"

namespace cbp {

// Directed multigraph over vertices 1..n_vertices with fixed out-degree m for
// complete vertices (vertex 1: m-1, a partial last vertex: fewer).
struct Multigraph {
    unsigned m = 1;
    std::uint64_t n_vertices = 0;
    std::uint64_t n_edges = 0;  // total multiplicity
    // (source, target) -> multiplicity, sorted lexicographically
    struct Edge {
        std::uint64_t source, target, multiplicity;
        bool operator==(const Edge&) const = default;
    };
    std::vector<Edge> edges;
    std::vector<std::uint64_t> in_degrees;   // index v-1
    std::vector<std::uint64_t> out_degrees;  // index v-1
};

struct CollapseMap {
    unsigned m = 1;
};

struct VertexSlot {
    std::uint64_t vertex;
    unsigned slot;  // 1..m
    bool operator==(const VertexSlot&) const = default;
};

// Inverse of (n, j) -> m(n-1) + j.
VertexSlot vertex_of(const CollapseMap& map, std::uint64_t individual_id);

// Merge consecutive groups of m individuals into vertices; each non-root
// individual x with parent y contributes one edge vertex(x) -> vertex(y).
// Restricted to individuals with tau <= t when t is given.
Multigraph collapse(const BirthLog& log, unsigned m,
                    std::optional<double> t = std::nullopt);

// ceil(population(t) / m) without building the graph.
std::uint64_t graph_size(const BirthLog& log, unsigned m,
                         std::optional<double> t = std::nullopt);

// N_k = number of vertices with in-degree k, k = 0..max.
std::vector<std::uint64_t> in_degree_histogram(const Multigraph& graph);

// Same over in-degree + out-degree, for total-degree conventions.
std::vector<std::uint64_t> total_degree_histogram(const Multigraph& graph);

// Assemble a Multigraph from raw (source, target) pairs: aggregates
// multiplicities, sorts edges, tallies degrees.
Multigraph multigraph_from_pairs(
    unsigned m, std::uint64_t n_vertices,
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs);

}  // namespace cbp
