#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cbp/birth_process.hpp"

using namespace cbp;

namespace {

double poisson_pmf(double lambda, std::uint64_t k) {
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

// Counting process with lambda_k = a k + b at internal time s: negative
// binomial with r = b/a, P_k(s) = C(r+k-1, k) e^{-b s} (1 - e^{-a s})^k.
double neg_binomial_pmf(double a, double b, double s, std::uint64_t k) {
    const double r = b / a;
    const double log_coef =
        std::lgamma(r + k) - std::lgamma(r) - std::lgamma(k + 1.0);
    return std::exp(log_coef - b * s + k * std::log1p(-std::exp(-a * s)));
}

}  // namespace

TEST_SUITE("birth_process") {

TEST_CASE("rate examples") {
    BirthProcessSpec affine{RateSequence::affine(1.0, 2.0)};
    CHECK(rate(affine, 3) == doctest::Approx(5.0).epsilon(1e-15));

    BirthProcessSpec constant{RateSequence::constant(1.0)};
    CHECK(rate(constant, 7) == doctest::Approx(1.0).epsilon(1e-15));

    BirthProcessSpec pam{RateSequence::affine(1.0, 1.5)};
    CHECK(rate(pam, 0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("explicit rates continue per the tail rule") {
    auto repeat = RateSequence::explicit_list({2.0, 3.0, 0.5}, RateSequence::Tail::RepeatLast);
    CHECK(repeat.value(1) == 3.0);
    CHECK(repeat.value(2) == 0.5);
    CHECK(repeat.value(10) == 0.5);

    auto affine_tail =
        RateSequence::explicit_list({5.0, 1.0, 2.0}, RateSequence::Tail::Affine, 1.0);
    CHECK(affine_tail.value(2) == 2.0);
    CHECK(affine_tail.value(3) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(affine_tail.value(12) == doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("lipschitz bound") {
    BirthProcessSpec plain{RateSequence::affine(1.0, 1.0)};
    CHECK(lipschitz_constant(plain, 3) == doctest::Approx(4.0).epsilon(1e-15));

    BirthProcessSpec aged{RateSequence::affine(1.0, 1.0), AgingFunction::exponential(1.0)};
    CHECK(lipschitz_constant(aged, 3) == doctest::Approx(4.0).epsilon(1e-15));

    BirthProcessSpec tab{RateSequence::constant(7.0),
                         AgingFunction::tabulated({0.0, 1.0, 2.0}, {0.5, 0.5, 0.25})};
    CHECK(lipschitz_constant(tab, 0) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("poisson marginals for constant rates") {
    BirthProcessSpec spec{RateSequence::constant(1.0)};
    auto probs = count_probabilities(spec, 1.0, 20);
    CHECK(probs.values[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (std::uint64_t k = 0; k <= 20; ++k)
        CHECK(probs.values[k] == doctest::Approx(poisson_pmf(1.0, k)).epsilon(1e-12));

    auto later = count_probabilities(spec, 3.25, 30);
    for (std::uint64_t k = 0; k <= 30; ++k)
        CHECK(later.values[k] == doctest::Approx(poisson_pmf(3.25, k)).epsilon(1e-11));
}

TEST_CASE("negative binomial marginals for affine rates") {
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.5)};
    for (double t : {0.3, 1.0, 2.5}) {
        auto probs = count_probabilities(spec, t, 40);
        for (std::uint64_t k = 0; k <= 40; ++k) {
            CHECK(probs.values[k] ==
                  doctest::Approx(neg_binomial_pmf(1.0, 1.5, t, k)).epsilon(1e-11));
        }
    }
}

TEST_CASE("master equation agrees with the closed form") {
    // Same rates, one spelled as an explicit list (integrated numerically) and
    // one as an affine family (closed form).
    const double beta = 1.5;
    std::vector<double> leading;
    for (int k = 0; k < 12; ++k) leading.push_back(k + beta);
    BirthProcessSpec listed{
        RateSequence::explicit_list(leading, RateSequence::Tail::Affine, 1.0)};
    BirthProcessSpec closed{RateSequence::affine(1.0, beta)};

    for (double t : {0.5, 2.0, 10.0}) {
        auto a = count_probabilities(listed, t, 100);
        auto b = count_probabilities(closed, t, 100);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.values.size(); ++k)
            worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("aging freezes the count at the internal budget") {
    // g = e^{-t}: G_total = 1, so the count at t = inf is Poisson(1) and
    // P_0 -> e^{-1} for unit constant rates.
    BirthProcessSpec spec{RateSequence::constant(1.0), AgingFunction::exponential(1.0)};
    auto probs = count_probabilities(spec, 50.0, 10);
    CHECK(probs.values[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(mean_count(spec, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(limit_mean_count(spec) == doctest::Approx(1.0).epsilon(1e-12));

    BirthProcessSpec no_aging{RateSequence::constant(1.0)};
    CHECK(std::isinf(limit_mean_count(no_aging)));
}

TEST_CASE("negative time is rejected") {
    BirthProcessSpec spec{RateSequence::constant(1.0)};
    CHECK_THROWS_AS((void)count_probabilities(spec, -0.5, 4), std::invalid_argument);
}

TEST_CASE("tabulated aging past the grid") {
    auto strict = AgingFunction::tabulated({0.0, 1.0}, {1.0, 1.0}, AgingFunction::Beyond::Error);
    BirthProcessSpec spec{RateSequence::constant(1.0), strict};
    CHECK_THROWS_AS((void)count_probabilities(spec, 2.0, 4), std::domain_error);

    auto padded = AgingFunction::tabulated({0.0, 1.0}, {1.0, 1.0}, AgingFunction::Beyond::Zero);
    BirthProcessSpec ok{RateSequence::constant(1.0), padded};
    auto probs = count_probabilities(ok, 2.0, 10);
    CHECK(probs.values[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("marginals stay normalized and within [0, 1]") {
    std::vector<BirthProcessSpec> specs = {
        {RateSequence::affine(1.0, 1.0)},
        {RateSequence::constant(2.0)},
        {RateSequence::explicit_list({1.0, 2.0, 1.5, 3.0}, RateSequence::Tail::RepeatLast)},
        {RateSequence::affine(1.0, 1.5), AgingFunction::exponential(1.0)},
    };
    for (const auto& spec : specs) {
        for (double t : {0.0, 0.3, 1.0, 2.7, 10.0}) {
            auto probs = count_probabilities(spec, t, 40);
            double total = std::accumulate(probs.values.begin(), probs.values.end(), 0.0);
            CHECK(std::abs(total + probs.tail_mass - 1.0) <= 1e-10);
            for (double p : probs.values) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0 + 1e-12);
            }
            CHECK(probs.tail_mass >= -1e-15);
        }
    }
}

TEST_CASE("counts are stochastically increasing in t") {
    std::vector<BirthProcessSpec> specs = {
        {RateSequence::affine(1.0, 1.0)},
        {RateSequence::explicit_list({1.0, 2.0, 1.5, 3.0}, RateSequence::Tail::RepeatLast)},
        {RateSequence::affine(1.0, 1.5), AgingFunction::exponential(1.0)},
    };
    const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
    for (const auto& spec : specs) {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            auto early = count_probabilities(spec, grid[i], 25);
            auto late = count_probabilities(spec, grid[i + 1], 25);
            double cdf_early = 0.0, cdf_late = 0.0;
            for (std::size_t k = 0; k <= 25; ++k) {
                cdf_early += early.values[k];
                cdf_late += late.values[k];
                CHECK(cdf_late <= cdf_early + 1e-12);
            }
        }
    }
}

TEST_CASE("first jump of a unit-rate process has mean one") {
    BirthProcessSpec spec{RateSequence::constant(1.0)};
    const int replicas = 100000;
    double sum = 0.0;
    for (int i = 0; i < replicas; ++i) {
        Rng rng(substream_seed(2024, i));
        auto jumps = sample_jump_times(spec, rng, JumpStop::max_jumps(1));
        REQUIRE(jumps.size() == 1);
        sum += jumps[0];
    }
    const double mean = sum / replicas;
    const double three_se = 3.0 / std::sqrt(static_cast<double>(replicas));
    CHECK(std::abs(mean - 1.0) <= three_se);
}

TEST_CASE("dormancy probability matches the budget") {
    // lambda_0 = 1, G_total = 1: no jump ever happens iff Exp(1) > 1.
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.0), AgingFunction::exponential(1.0)};
    const int replicas = 100000;
    int dormant = 0;
    for (int i = 0; i < replicas; ++i) {
        Rng rng(substream_seed(77, i));
        auto jumps = sample_jump_times(spec, rng, JumpStop::max_jumps(1));
        if (jumps.empty()) ++dormant;
    }
    const double p = std::exp(-1.0);
    const double frac = static_cast<double>(dormant) / replicas;
    const double three_se = 3.0 * std::sqrt(p * (1.0 - p) / replicas);
    CHECK(std::abs(frac - p) <= three_se);
}

TEST_CASE("sampled counts follow the analytic marginal") {
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.0)};
    const double t = 1.0;
    const int replicas = 100000;
    std::vector<std::uint64_t> hist;
    for (int i = 0; i < replicas; ++i) {
        Rng rng(substream_seed(4242, i));
        auto jumps = sample_jump_times(spec, rng, JumpStop::horizon(t));
        std::size_t k = jumps.size();
        if (hist.size() <= k) hist.resize(k + 1, 0);
        ++hist[k];
    }
    auto probs = count_probabilities(spec, t, hist.size() + 5);
    for (std::size_t k = 0; k < hist.size(); ++k) {
        const double p = probs.values[k];
        if (replicas * p < 50.0) continue;  // normal approximation needs mass
        const double frac = static_cast<double>(hist[k]) / replicas;
        const double four_se = 4.0 * std::sqrt(p * (1.0 - p) / replicas);
        CHECK(std::abs(frac - p) <= four_se);
    }
}

TEST_CASE("jump sampling is deterministic and strictly increasing") {
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.5), AgingFunction::exponential(0.25)};
    Rng a(991), b(991);
    auto first = sample_jump_times(spec, a, JumpStop::max_jumps(40));
    auto second = sample_jump_times(spec, b, JumpStop::max_jumps(40));
    CHECK(first == second);
    for (std::size_t i = 1; i < first.size(); ++i) CHECK(first[i] > first[i - 1]);

    BirthProcessSpec plain{RateSequence::constant(3.0)};
    Rng c(5);
    auto exactly = sample_jump_times(plain, c, JumpStop::max_jumps(17));
    CHECK(exactly.size() == 17);

    Rng d(5);
    auto capped = sample_jump_times(plain, d, JumpStop::horizon(2.0));
    for (double t : capped) CHECK(t <= 2.0);
}

}  // TEST_SUITE
