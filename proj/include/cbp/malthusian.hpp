#pragma once

#include <optional>
#include <stdexcept>

#include "cbp/birth_process.hpp"

namespace cbp {

struct MalthusianResult {
    double alpha_star = 0.0;
    double mu = 0.0;  // -L'(alpha_star)
    bool supercritical = false;
    double limit_mean_progeny = 0.0;  // +inf with identity aging
    double residual = 0.0;            // |L(alpha_star) - 1|
    // Exact root when one exists (affine rates, identity aging: slope + intercept).
    std::optional<double> closed_form_alpha_star;
};

struct SupercriticalCheck {
    bool supercritical;
    double limit_mean_progeny;
};

// alpha at or below the convergence abscissa of the Laplace transform.
struct LaplaceDivergence : std::domain_error {
    using std::domain_error::domain_error;
};

// Subcritical or critical spec: no Malthusian parameter exists.
struct SubcriticalError : std::domain_error {
    explicit SubcriticalError(double limit)
        : std::domain_error("spec is not supercritical; no Malthusian parameter"),
          limit_mean_progeny(limit) {}
    double limit_mean_progeny;
};

// L(alpha) = int_0^inf e^{-alpha t} E xi(dt).
double laplace_mean(const BirthProcessSpec& spec, double alpha);

SupercriticalCheck check_supercritical(const BirthProcessSpec& spec);

// Root of L(alpha) = 1 (residual <= 1e-12) plus mu = -L'(alpha_star).
// Throws SubcriticalError when no root exists.
MalthusianResult solve_malthusian(const BirthProcessSpec& spec);

namespace detail {
// Series form sum_{k>=1} prod_{i<k} lambda_i/(lambda_i+alpha) for identity
// aging; the tail beyond the explicit prefix is summed in closed form, so the
// result carries no truncation error.
double laplace_series(const RateSequence& rates, double alpha);
// mu by termwise differentiation of the same series.
double laplace_series_mu(const RateSequence& rates, double alpha);
}  // namespace detail

}  // namespace cbp
