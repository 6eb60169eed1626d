#include "cbp/degree_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cbp/malthusian.hpp"
#include "cbp/quadrature.hpp"

namespace cbp {

std::string provenance_name(DegreeDistribution::Provenance p) {
    switch (p) {
        case DegreeDistribution::Provenance::Quadrature: return "quadrature";
        case DegreeDistribution::Provenance::ClosedFormPam: return "pam_closed_form";
        case DegreeDistribution::Provenance::ClosedFormRrg: return "rrg_closed_form";
        case DegreeDistribution::Provenance::Empirical: return "empirical";
    }
    return "unknown";
}

std::vector<double> convolve_m(const std::vector<double>& p, unsigned m) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    const std::size_t n = p.size();
    std::vector<double> acc = p;
    std::vector<double> next(n);
    for (unsigned fold = 1; fold < m; ++fold) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            if (acc[a] == 0.0) continue;
            for (std::size_t b = 0; a + b < n; ++b) next[a + b] += acc[a] * p[b];
        }
        acc.swap(next);
    }
    return acc;
}

DegreeDistribution limiting_distribution(const BirthProcessSpec& spec, unsigned m,
                                         std::size_t K, double abs_tol) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    const MalthusianResult mal = solve_malthusian(spec);
    const double alpha = mal.alpha_star;

    DegreeDistribution out;
    out.provenance = DegreeDistribution::Provenance::Quadrature;
    out.values.assign(K + 1, 0.0);

    QuadOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 0.0;
    integrate_vec(
        [&](double u, double* v) {
            const double t = -std::log(u) / alpha;
            const CountProbabilities probs = count_probabilities(spec, t, K);
            const std::vector<double> conv = convolve_m(probs.values, m);
            std::copy(conv.begin(), conv.end(), v);
        },
        K + 1, 0.0, 1.0, out.values.data(), opt);

    for (double& v : out.values) v = std::max(0.0, v);
    const double total =
        std::accumulate(out.values.begin(), out.values.end(), 0.0);
    out.tail_mass = std::max(0.0, 1.0 - total);
    return out;
}

namespace {

// sum_{k >= K} Gamma(k+a)/Gamma(k+a+c) = Gamma(K+a) / ((c-1) Gamma(K+a+c-1)),
// by telescoping Gamma(k+a)/Gamma(k+a+c-1).
double pam_log_tail(double a, double beta, std::size_t K) {
    const double c0 = std::lgamma(2.0 + beta + a) - std::lgamma(a);
    return c0 + std::lgamma(K + 1.0 + a) - std::lgamma(K + 1.0 + a + 2.0 + beta);
}

}  // namespace

DegreeDistribution pam_closed_form(unsigned m, double delta, std::size_t K) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(delta > -static_cast<double>(m)))
        throw std::invalid_argument("delta must exceed -m");
    const double beta = delta / m;
    const double a = m + delta;
    const double c0 = std::lgamma(2.0 + beta + a) - std::lgamma(a);

    DegreeDistribution out;
    out.provenance = DegreeDistribution::Provenance::ClosedFormPam;
    out.values.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        out.values[k] = (2.0 + beta) * std::exp(c0 + std::lgamma(k + a) -
                                                std::lgamma(k + a + 3.0 + beta));
    out.tail_mass = std::exp(pam_log_tail(a, beta, K));
    return out;
}

DegreeDistribution rrg_closed_form(unsigned m, std::size_t K) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    const double q = m / (m + 1.0);

    DegreeDistribution out;
    out.provenance = DegreeDistribution::Provenance::ClosedFormRrg;
    out.values.resize(K + 1);
    double pk = 1.0 - q;
    for (std::size_t k = 0; k <= K; ++k, pk *= q) out.values[k] = pk;
    out.tail_mass = std::pow(q, static_cast<double>(K + 1));
    return out;
}

std::size_t default_truncation_pam(unsigned m, double delta, double tail_bound) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(delta > -static_cast<double>(m)))
        throw std::invalid_argument("delta must exceed -m");
    if (!(tail_bound > 0.0)) throw std::invalid_argument("tail bound must be positive");
    const double beta = delta / m;
    const double a = m + delta;
    const double log_bound = std::log(tail_bound);
    auto below = [&](std::size_t K) { return pam_log_tail(a, beta, K) < log_bound; };

    std::size_t hi = 1;
    while (!below(hi)) {
        hi *= 2;
        if (hi > (std::size_t{1} << 40))
            throw std::runtime_error("tail bound out of reach");
    }
    std::size_t lo = 0;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (below(mid)) hi = mid; else lo = mid + 1;
    }
    return lo;
}

std::size_t default_truncation_rrg(unsigned m, double tail_bound) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(tail_bound > 0.0)) throw std::invalid_argument("tail bound must be positive");
    const double q = m / (m + 1.0);
    std::size_t K = 0;
    double tail = q;  // q^{K+1}
    while (tail >= tail_bound) {
        ++K;
        tail *= q;
    }
    return K;
}

std::size_t default_truncation_limiting(const BirthProcessSpec& spec, unsigned m,
                                        double tail_bound) {
    if (!(tail_bound > 0.0)) throw std::invalid_argument("tail bound must be positive");
    for (std::size_t K = 64;; K *= 2) {
        const DegreeDistribution d =
            limiting_distribution(spec, m, K, tail_bound * 1e-4);
        double acc = 0.0;
        for (std::size_t k = 0; k <= K; ++k) {
            acc += d.values[k];
            if (1.0 - acc < tail_bound) return k;
        }
        if (K > (std::size_t{1} << 22))
            throw std::runtime_error("tail bound out of reach");
    }
}

AgingTailReport aging_tail_report(const BirthProcessSpec& spec, unsigned m,
                                  double delta, std::size_t K,
                                  std::size_t k_lo, std::size_t k_hi) {
    if (!spec.aging.integrable())
        throw std::invalid_argument("tail report needs integrable aging");
    if (k_lo < 1 || k_lo >= k_hi)
        throw std::invalid_argument("window must satisfy 1 <= k_lo < k_hi");

    AgingTailReport rep;
    rep.dist = limiting_distribution(spec, m, std::max(K, k_hi), 1e-13);
    rep.C = -std::log1p(-std::exp(-spec.aging.G_total()));
    rep.k_lo = k_lo;
    rep.k_hi = k_hi;

    const double a = m + delta;
    auto log_q = [&](std::size_t k) {
        const double pk = rep.dist.values[k];
        if (!(pk > 0.0))
            throw std::runtime_error("window extends past numerical resolution");
        return std::log(pk) + std::lgamma(k + 1.0) - std::lgamma(k + a);
    };

    double sum_r = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double r = -log_q(k) / static_cast<double>(k);
        rep.r.push_back(r);
        sum_r += r;
    }
    double sum_slope = 0.0;
    for (std::size_t k = k_lo; k < k_hi; ++k) {
        const double step = log_q(k + 1) - log_q(k);
        rep.shape_ratio.push_back(std::exp(step));
        sum_slope -= step;
    }
    rep.mean_r = sum_r / static_cast<double>(rep.r.size());
    rep.rel_gap = std::abs(rep.mean_r - rep.C) / rep.C;

    // The aggregate rate r_k approaches C only at O(log k / k); the one-step
    // slopes -log(q_{k+1}/q_k) shed that drift, so "trending" means the slopes
    // sit closer to C than mean_r does while the window moves the right way.
    const double mean_slope = sum_slope / static_cast<double>(rep.shape_ratio.size());
    const double slope_gap = std::abs(mean_slope - rep.C) / rep.C;
    rep.trends_toward_C = slope_gap < rep.rel_gap &&
                          std::abs(rep.r.back() - rep.C) <
                              std::abs(rep.r.front() - rep.C);
    return rep;
}

}  // namespace cbp
