#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cbp/birth_process.hpp"

namespace cbp {

struct DegreeDistribution {
    enum class Provenance { Quadrature, ClosedFormPam, ClosedFormRrg, Empirical };
    std::vector<double> values;  // p_0 .. p_K
    double tail_mass = 0.0;
    Provenance provenance = Provenance::Quadrature;
};

std::string provenance_name(DegreeDistribution::Provenance p);

// m-fold self-convolution truncated at the input length; entries below the
// truncation point are exact, the rest is tracked as tail mass.
std::vector<double> convolve_m(const std::vector<double>& p, unsigned m);

// p_k = alpha* int_0^inf e^{-alpha* t} (P(t)^{*m})_k dt, evaluated on the unit
// interval via u = e^{-alpha* t}.
DegreeDistribution limiting_distribution(const BirthProcessSpec& spec, unsigned m,
                                         std::size_t K, double abs_tol = 1e-10);

// (2 + d/m) Gamma(2 + d/m + m + d)/Gamma(m + d) * Gamma(k + m + d)/Gamma(k + m + d + 3 + d/m)
DegreeDistribution pam_closed_form(unsigned m, double delta, std::size_t K);

// p_k = (1/(m+1)) (m/(m+1))^k with exact geometric tail mass.
DegreeDistribution rrg_closed_form(unsigned m, std::size_t K);

// Smallest K whose analytic tail mass is below `tail_bound`.
std::size_t default_truncation_pam(unsigned m, double delta, double tail_bound = 1e-6);
std::size_t default_truncation_rrg(unsigned m, double tail_bound = 1e-6);
std::size_t default_truncation_limiting(const BirthProcessSpec& spec, unsigned m,
                                        double tail_bound = 1e-6);

// Tail diagnostics for integrable aging. q_k = p_k Gamma(k+1)/Gamma(k+m+delta)
// should decay like e^{-C k} with C = |log(1 - e^{-G_total})|; the report
// carries r_k = -log(q_k)/k over a window together with the one-step ratios
// q_{k+1}/q_k, whose -log converges to C much faster than r_k does.
struct AgingTailReport {
    DegreeDistribution dist;
    double C = 0.0;
    std::size_t k_lo = 0, k_hi = 0;
    std::vector<double> r;            // r_{k_lo} .. r_{k_hi}
    std::vector<double> shape_ratio;  // q_{k+1}/q_k for k = k_lo .. k_hi-1
    double mean_r = 0.0;
    double rel_gap = 0.0;  // |mean_r - C| / C
    bool trends_toward_C = false;
};

AgingTailReport aging_tail_report(const BirthProcessSpec& spec, unsigned m,
                                  double delta, std::size_t K,
                                  std::size_t k_lo = 25, std::size_t k_hi = 50);

}  // namespace cbp
