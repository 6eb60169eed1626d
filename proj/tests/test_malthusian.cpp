#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "cbp/malthusian.hpp"

using namespace cbp;

TEST_SUITE("malthusian") {

TEST_CASE("laplace transform examples") {
    BirthProcessSpec unit{RateSequence::constant(1.0)};
    CHECK(laplace_mean(unit, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

    // lambda_k = k + 1: L(alpha) = 1/(alpha - 1) for alpha > 1.
    BirthProcessSpec yule{RateSequence::affine(1.0, 1.0)};
    CHECK(laplace_mean(yule, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(laplace_mean(yule, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laplace transform diverges at the abscissa") {
    BirthProcessSpec yule{RateSequence::affine(1.0, 1.0)};
    CHECK_THROWS_AS((void)laplace_mean(yule, 1.0), LaplaceDivergence);
    CHECK_THROWS_AS((void)laplace_mean(yule, 0.5), LaplaceDivergence);
}

TEST_CASE("unit-rate process") {
    BirthProcessSpec spec{RateSequence::constant(1.0)};
    auto result = solve_malthusian(spec);
    CHECK(result.alpha_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(result.mu == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(result.supercritical);
    CHECK(result.residual <= 1e-12);
}

TEST_CASE("affine closed forms across the model grid") {
    // lambda_k = k + 1 + delta/m gives alpha* = 2 + delta/m, mu = m/(m+delta).
    const std::vector<std::pair<unsigned, double>> grid = {
        {1, 0.0}, {2, 0.0}, {2, 1.0}, {3, -1.0}, {4, 2.5}, {1, 3.0}};
    for (auto [m, delta] : grid) {
        const double beta = 1.0 + delta / m;
        BirthProcessSpec spec{RateSequence::affine(1.0, beta)};
        auto result = solve_malthusian(spec);
        CHECK(result.alpha_star == doctest::Approx(2.0 + delta / m).epsilon(1e-8));
        CHECK(result.mu == doctest::Approx(m / (m + delta)).epsilon(1e-8));
        REQUIRE(result.closed_form_alpha_star.has_value());
        CHECK(*result.closed_form_alpha_star ==
              doctest::Approx(2.0 + delta / m).epsilon(1e-12));
        CHECK(result.residual <= 1e-12);
    }
}

TEST_CASE("series evaluation is exact at known roots") {
    BirthProcessSpec yule{RateSequence::affine(1.0, 1.0)};
    CHECK(std::abs(detail::laplace_series(yule.rates, 2.0) - 1.0) <= 1e-12);

    BirthProcessSpec pam{RateSequence::affine(1.0, 1.5)};
    CHECK(std::abs(detail::laplace_series(pam.rates, 2.5) - 1.0) <= 1e-12);
}

TEST_CASE("explicit rates solve cleanly") {
    BirthProcessSpec bumpy{
        RateSequence::explicit_list({1.0, 2.0, 1.5, 3.0}, RateSequence::Tail::RepeatLast)};
    auto result = solve_malthusian(bumpy);
    CHECK(result.residual <= 1e-12);
    CHECK(result.mu > 0.0);
    CHECK(laplace_mean(bumpy, result.alpha_star) == doctest::Approx(1.0).epsilon(1e-11));

    BirthProcessSpec ramp{
        RateSequence::explicit_list({5.0, 1.0, 2.0}, RateSequence::Tail::Affine, 1.0)};
    auto ramp_result = solve_malthusian(ramp);
    CHECK(ramp_result.residual <= 1e-12);
    CHECK(laplace_mean(ramp, ramp_result.alpha_star) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("laplace transform is strictly decreasing") {
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.5)};
    double prev = laplace_mean(spec, 1.2);
    for (double alpha : {1.5, 2.0, 2.5, 3.5, 6.0}) {
        double cur = laplace_mean(spec, alpha);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("supercriticality under aging") {
    BirthProcessSpec mild{RateSequence::affine(1.0, 1.0), AgingFunction::exponential(1.0)};
    auto check = check_supercritical(mild);
    CHECK(check.supercritical);
    CHECK(check.limit_mean_progeny == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));

    BirthProcessSpec harsh{RateSequence::affine(1.0, 1.0), AgingFunction::exponential(4.0)};
    auto harsh_check = check_supercritical(harsh);
    CHECK_FALSE(harsh_check.supercritical);
    CHECK(harsh_check.limit_mean_progeny ==
          doctest::Approx(std::exp(0.25) - 1.0).epsilon(1e-10));
    CHECK_THROWS_AS((void)solve_malthusian(harsh), SubcriticalError);
    try {
        (void)solve_malthusian(harsh);
    } catch (const SubcriticalError& e) {
        CHECK(e.limit_mean_progeny == doctest::Approx(std::exp(0.25) - 1.0).epsilon(1e-10));
    }

    BirthProcessSpec forever{RateSequence::constant(0.5)};
    auto unbounded = check_supercritical(forever);
    CHECK(unbounded.supercritical);
    CHECK(std::isinf(unbounded.limit_mean_progeny));
}

TEST_CASE("aged process matches the pinned solution") {
    // lambda_k = k + 1.5, g = e^{-t}: values fixed by an independent solver.
    BirthProcessSpec spec{RateSequence::affine(1.0, 1.5), AgingFunction::exponential(1.0)};
    auto result = solve_malthusian(spec);
    CHECK(result.alpha_star == doctest::Approx(1.1236841303707263).epsilon(1e-9));
    CHECK(result.mu == doctest::Approx(0.5841402775930149).epsilon(1e-9));
    CHECK(result.supercritical);
    CHECK(result.limit_mean_progeny ==
          doctest::Approx(1.5 * (std::exp(1.0) - 1.0)).epsilon(1e-10));
    CHECK(result.residual <= 1e-12);
    CHECK_FALSE(result.closed_form_alpha_star.has_value());
}

TEST_CASE("mu equals the negative derivative of L") {
    std::vector<BirthProcessSpec> specs = {
        {RateSequence::constant(1.0)},
        {RateSequence::affine(1.0, 1.5)},
        {RateSequence::affine(1.0, 1.5), AgingFunction::exponential(1.0)},
    };
    const double h = 1e-5;
    for (const auto& spec : specs) {
        auto result = solve_malthusian(spec);
        const double slope = (laplace_mean(spec, result.alpha_star + h) -
                              laplace_mean(spec, result.alpha_star - h)) /
                             (2.0 * h);
        CHECK(std::abs(result.mu + slope) <= 1e-6);
        CHECK(result.mu > 0.0);
    }
}

TEST_CASE("root is bracketed by the transform") {
    std::vector<BirthProcessSpec> specs = {
        {RateSequence::affine(1.0, 1.0)},
        {RateSequence::explicit_list({1.0, 2.0, 1.5, 3.0}, RateSequence::Tail::RepeatLast)},
        {RateSequence::affine(1.0, 1.5), AgingFunction::exponential(1.0)},
    };
    for (const auto& spec : specs) {
        auto result = solve_malthusian(spec);
        CHECK(laplace_mean(spec, result.alpha_star * (1.0 + 1e-6)) < 1.0);
        CHECK(laplace_mean(spec, result.alpha_star * (1.0 - 1e-6)) > 1.0);
    }
}

}  // TEST_SUITE
