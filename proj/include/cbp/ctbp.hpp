#pragma once

#include <cstdint>
#include <vector>

#include "cbp/birth_process.hpp"

namespace cbp {

struct Individual {
    std::uint64_t id = 0;         // birth order, root = 1
    std::uint64_t parent_id = 0;  // 0 = none (root only)
    double birth_time = 0.0;
    std::uint32_t child_count = 0;
    double internal_clock = 0.0;  // cumulative internal time consumed
};

struct SimStop {
    enum class Kind { MaxIndividuals, Horizon };
    static SimStop max_individuals(std::uint64_t n) { return {Kind::MaxIndividuals, n, 0.0}; }
    static SimStop horizon(double t) { return {Kind::Horizon, 0, t}; }
    Kind kind;
    std::uint64_t count;
    double time;
};

struct BirthLog {
    std::vector<Individual> individuals;  // ids contiguous 1..N at index id-1
    BirthProcessSpec spec;
    std::uint64_t seed = 0;
    SimStop stop = SimStop::max_individuals(1);
    double horizon = 0.0;  // last simulated time (tau_N, or T for horizon stops)
    bool extinct = false;  // every individual went dormant before the stop rule hit
};

struct GrowthEstimate {
    double alpha_hat = 0.0;
    double theta_t = 0.0;  // mu * alpha_star * exp(-alpha_star t) * population
    std::uint64_t fit_lo = 0, fit_hi = 0;
};

// Event-driven simulation: a priority queue of (next birth time, id), one
// independent birth process per individual. Each exponential draw comes from a
// counter-based stream keyed by (seed, id, draw index), so the result is
// deterministic regardless of event interleaving.
BirthLog simulate_ctbp(const BirthProcessSpec& spec, std::uint64_t seed,
                       const SimStop& stop);

// N_k(t) = number of individuals born by t with exactly k children born by t.
std::vector<std::uint64_t> children_count_histogram(const BirthLog& log, double t);
std::vector<std::uint64_t> children_count_histogram(const BirthLog& log);  // at horizon

std::uint64_t population_at(const BirthLog& log, double t);

// Least-squares slope of log n against tau_n over the last half of the log.
GrowthEstimate estimate_growth(const BirthLog& log, double alpha_star, double mu);

}  // namespace cbp
