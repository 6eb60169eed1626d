#pragma once

#include <cstdint>
#include <vector>

#include "cbp/aging.hpp"
#include "cbp/rates.hpp"
#include "cbp/rng.hpp"

namespace cbp {

// A birth process: exponential clocks with rates lambda_k run on the internal
// clock, observed through the aging time change (identity = no aging).
struct BirthProcessSpec {
    RateSequence rates;
    AgingFunction aging = AgingFunction::identity();
};

// Marginal law of the count at calendar time t, truncated at K.
struct CountProbabilities {
    double t = 0.0;
    std::vector<double> values;  // P_0(t) .. P_K(t)
    double tail_mass = 0.0;
};

struct JumpStop {
    enum class Kind { MaxJumps, Horizon };
    static JumpStop max_jumps(std::uint64_t n) { return {Kind::MaxJumps, n, 0.0}; }
    static JumpStop horizon(double t) { return {Kind::Horizon, 0, t}; }
    Kind kind;
    std::uint64_t count;
    double time;
};

double rate(const BirthProcessSpec& spec, std::uint64_t k);

// Calendar times of the jumps, strictly increasing. The list simply ends when
// the next internal exponential would exceed the remaining budget G_total
// (dormancy) or when the stop rule is reached.
std::vector<double> sample_jump_times(const BirthProcessSpec& spec, Rng& rng,
                                      const JumpStop& stop);

// P_k(t) for k = 0..K. Affine and constant rates use the closed-form
// negative-binomial / Poisson family at internal time s = G(t); explicit rate
// lists integrate the master equation.
CountProbabilities count_probabilities(const BirthProcessSpec& spec, double t,
                                       std::size_t K);

// lambda_k * sup g, the Lipschitz bound on P_k(t) used in diagnostics.
double lipschitz_constant(const BirthProcessSpec& spec, std::uint64_t k);

// E[xi_{G(t)}]
double mean_count(const BirthProcessSpec& spec, double t);

// lim_{t->inf} E[xi_{G(t)}]; +inf when the aging function is not integrable.
double limit_mean_count(const BirthProcessSpec& spec);

namespace detail {
// Master equation dP_0/ds = -l_0 P_0, dP_k/ds = -l_k P_k + l_{k-1} P_{k-1},
// solved at internal time s by an adaptive Runge-Kutta stepper.
std::vector<double> count_probabilities_ode(const RateSequence& rates, double s,
                                            std::size_t K);
std::vector<double> count_probabilities_closed(const RateSequence& rates, double s,
                                               std::size_t K);
double mean_count_internal(const RateSequence& rates, double s);
}  // namespace detail

}  // namespace cbp
