#pragma once

// Exact outcome laws for tiny attachment graphs, shared by the unit tests and
// the acceptance checks. Outcomes are keyed by their sorted edge multiset.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cbp/collapse.hpp"

namespace enumeration {

inline std::string canonical_key(const cbp::Multigraph& g) {
    std::string key;
    for (const auto& e : g.edges) {
        key += std::to_string(e.source);
        key += '>';
        key += std::to_string(e.target);
        key += 'x';
        key += std::to_string(e.multiplicity);
        key += ';';
    }
    return key;
}

// Walks every parent sequence of the individual-level attachment chain
// (weights child_count + 1 + delta/m) and accumulates the probability of each
// collapsed multigraph. Feasible only for a handful of individuals.
inline std::map<std::string, double> pam_outcome_law(unsigned m, double delta,
                                                     std::uint64_t n) {
    const std::uint64_t total = n * m;
    const double unit = 1.0 + delta / m;
    std::map<std::string, double> law;
    std::vector<std::uint64_t> parents(total + 1, 0);
    std::vector<unsigned> children(total + 1, 0);

    std::function<void(std::uint64_t, double)> walk = [&](std::uint64_t x,
                                                          double prob) {
        if (x > total) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
            for (std::uint64_t id = 2; id <= total; ++id)
                pairs.emplace_back((id - 1) / m + 1, (parents[id] - 1) / m + 1);
            law[canonical_key(cbp::multigraph_from_pairs(m, n, pairs))] += prob;
            return;
        }
        const double weight_sum =
            static_cast<double>(x - 1) * unit + static_cast<double>(x - 2);
        for (std::uint64_t y = 1; y < x; ++y) {
            const double w = children[y] + unit;
            parents[x] = y;
            ++children[y];
            walk(x + 1, prob * w / weight_sum);
            --children[y];
        }
    };
    walk(2, 1.0);
    return law;
}

}  // namespace enumeration
