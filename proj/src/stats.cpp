#include "cbp/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cbp {

DegreeDistribution empirical_distribution(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("empty histogram");

    DegreeDistribution out;
    out.provenance = DegreeDistribution::Provenance::Empirical;
    out.values.reserve(counts.size());
    for (std::uint64_t c : counts)
        out.values.push_back(static_cast<double>(c) / static_cast<double>(total));
    out.tail_mass = 0.0;
    return out;
}

double tv_distance(const DegreeDistribution& empirical,
                   const DegreeDistribution& analytic) {
    const std::size_t n = std::max(empirical.values.size(), analytic.values.size());
    double l1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = k < empirical.values.size() ? empirical.values[k] : 0.0;
        const double a = k < analytic.values.size() ? analytic.values[k] : 0.0;
        l1 += std::abs(e - a);
    }
    l1 += empirical.tail_mass + analytic.tail_mass;
    return 0.5 * l1;
}

}  // namespace cbp
