#include "cbp/collapse.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbp {

namespace {

Multigraph build_multigraph(unsigned m, std::uint64_t n_vertices,
                            std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs) {
    Multigraph g;
    g.m = m;
    g.n_vertices = n_vertices;
    g.n_edges = pairs.size();
    g.in_degrees.assign(n_vertices, 0);
    g.out_degrees.assign(n_vertices, 0);
    for (const auto& [src, tgt] : pairs) {
        ++g.out_degrees[src - 1];
        ++g.in_degrees[tgt - 1];
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        g.edges.push_back({pairs[i].first, pairs[i].second, j - i});
        i = j;
    }
    return g;
}

}  // namespace

VertexSlot vertex_of(const CollapseMap& map, std::uint64_t individual_id) {
    if (individual_id < 1) throw std::invalid_argument("ids start at 1");
    const std::uint64_t z = individual_id - 1;
    return {z / map.m + 1, static_cast<unsigned>(z % map.m) + 1};
}

Multigraph collapse(const BirthLog& log, unsigned m, std::optional<double> t) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    const std::uint64_t n =
        t ? population_at(log, *t) : log.individuals.size();
    const CollapseMap map{m};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    pairs.reserve(n > 0 ? n - 1 : 0);
    for (std::uint64_t id = 2; id <= n; ++id) {
        const std::uint64_t parent = log.individuals[id - 1].parent_id;
        pairs.emplace_back(vertex_of(map, id).vertex, vertex_of(map, parent).vertex);
    }
    return build_multigraph(m, (n + m - 1) / m, std::move(pairs));
}

std::uint64_t graph_size(const BirthLog& log, unsigned m, std::optional<double> t) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    const std::uint64_t n =
        t ? population_at(log, *t) : log.individuals.size();
    return (n + m - 1) / m;
}

std::vector<std::uint64_t> in_degree_histogram(const Multigraph& graph) {
    std::uint64_t max_deg = 0;
    for (std::uint64_t d : graph.in_degrees) max_deg = std::max(max_deg, d);
    std::vector<std::uint64_t> hist(max_deg + 1, 0);
    for (std::uint64_t d : graph.in_degrees) ++hist[d];
    return hist;
}

std::vector<std::uint64_t> total_degree_histogram(const Multigraph& graph) {
    std::uint64_t max_deg = 0;
    for (std::size_t i = 0; i < graph.in_degrees.size(); ++i)
        max_deg = std::max(max_deg, graph.in_degrees[i] + graph.out_degrees[i]);
    std::vector<std::uint64_t> hist(max_deg + 1, 0);
    for (std::size_t i = 0; i < graph.in_degrees.size(); ++i)
        ++hist[graph.in_degrees[i] + graph.out_degrees[i]];
    return hist;
}

// Shared with the discrete generators.
Multigraph multigraph_from_pairs(
    unsigned m, std::uint64_t n_vertices,
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs) {
    return build_multigraph(m, n_vertices, std::move(pairs));
}

}  // namespace cbp
