#pragma once

#include <cstdint>
#include <vector>

#include "cbp/degree_dist.hpp"

namespace cbp {

// Exact normalized histogram; tail mass is zero by construction.
DegreeDistribution empirical_distribution(const std::vector<std::uint64_t>& counts);

// Half L1 distance over the union support; the analytic tail mass counts as
// pure discrepancy.
double tv_distance(const DegreeDistribution& empirical,
                   const DegreeDistribution& analytic);

}  // namespace cbp
