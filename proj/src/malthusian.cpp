#include "cbp/malthusian.hpp"

#include <cmath>
#include <limits>

#include "cbp/quadrature.hpp"

namespace cbp {

namespace detail {

namespace {

struct SeriesTerms {
    double value;  // sum_{k>=1} u_k
    double mu;     // sum_{k>=1} u_k c_k
};

// u_k = prod_{i<k} lambda_i/(lambda_i+alpha), c_k = sum_{i<k} 1/(lambda_i+alpha).
// The explicit prefix is accumulated termwise; from the tail-view start the
// remainder is a hypergeometric (affine tail) or geometric (repeated rate)
// series with a closed-form sum, so no truncation error is introduced.
SeriesTerms laplace_series_terms(const RateSequence& rates, double alpha) {
    if (!(alpha > 0.0)) throw LaplaceDivergence("alpha must be positive");
    const auto tail = rates.tail_view();
    if (!tail.geometric && alpha <= tail.a)
        throw LaplaceDivergence("alpha at or below the convergence abscissa");

    double value = 0.0, mu = 0.0;
    double u = 1.0, c = 0.0;
    if (tail.start > 10000000ULL)
        throw std::runtime_error("rate prefix too long");
    for (std::uint64_t i = 0; i < tail.start; ++i) {
        const double lam = rates.value(i);
        u *= lam / (lam + alpha);
        c += 1.0 / (lam + alpha);
        value += u;
        mu += u * c;
    }

    double remainder, tail_mu;
    if (tail.geometric) {
        const double lam = tail.rate;
        remainder = lam / alpha;                  // T - 1
        tail_mu = lam / (alpha * alpha);
    } else {
        const double a = tail.a;
        const double b = a * static_cast<double>(tail.start) + tail.b;
        const double q = b / a;
        const double x = alpha / a;
        remainder = (q + x - 1.0) / (x - 1.0) - 1.0;
        tail_mu = b / ((alpha - a) * (alpha - a));
    }
    value += u * remainder;
    mu += u * (c * remainder + tail_mu);
    return {value, mu};
}

}  // namespace

double laplace_series(const RateSequence& rates, double alpha) {
    return laplace_series_terms(rates, alpha).value;
}

double laplace_series_mu(const RateSequence& rates, double alpha) {
    return laplace_series_terms(rates, alpha).mu;
}

}  // namespace detail

namespace {

// L(alpha) = alpha int_0^inf e^{-alpha t} E[xi_{G(t)}] dt, rescaled by u = alpha t
// so the exponential envelope fixes the cutoff independently of alpha.
double laplace_mean_aging(const BirthProcessSpec& spec, double alpha) {
    const double limit = limit_mean_count(spec);
    const double cut = 37.0 + std::log1p(limit);
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    return integrate(
        [&](double u) { return std::exp(-u) * mean_count(spec, u / alpha); }, 0.0,
        cut, opt);
}

double laplace_mean_aging_mu(const BirthProcessSpec& spec, double alpha) {
    const double limit = limit_mean_count(spec);
    const double cut = 37.0 + std::log1p(limit);
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    return integrate(
               [&](double u) {
                   return (u - 1.0) * std::exp(-u) * mean_count(spec, u / alpha);
               },
               0.0, cut, opt) /
           alpha;
}

// Classic Brent root bracketing for f(x) = L(x) - 1 on [lo, hi].
template <class F>
double brent_root(const F& f, double lo, double hi, double flo, double fhi) {
    double a = lo, b = hi, fa = flo, fb = fhi;
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || std::abs(fb) < 1e-13) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

}  // namespace

double laplace_mean(const BirthProcessSpec& spec, double alpha) {
    if (!(alpha > 0.0)) throw LaplaceDivergence("alpha must be positive");
    if (spec.aging.integrable()) return laplace_mean_aging(spec, alpha);
    switch (spec.rates.kind()) {
        case RateSequence::Kind::Constant:
            return spec.rates.intercept() / alpha;
        case RateSequence::Kind::Affine: {
            const double a = spec.rates.slope();
            if (alpha <= a)
                throw LaplaceDivergence("alpha at or below the convergence abscissa");
            return spec.rates.intercept() / (alpha - a);
        }
        case RateSequence::Kind::Explicit:
            return detail::laplace_series(spec.rates, alpha);
    }
    return 0.0;
}

SupercriticalCheck check_supercritical(const BirthProcessSpec& spec) {
    if (!spec.aging.integrable())
        return {true, std::numeric_limits<double>::infinity()};
    const double limit = limit_mean_count(spec);
    return {limit > 1.0, limit};
}

MalthusianResult solve_malthusian(const BirthProcessSpec& spec) {
    const auto check = check_supercritical(spec);
    if (!check.supercritical) throw SubcriticalError(check.limit_mean_progeny);

    double lo = 1e-8;
    if (!spec.aging.integrable()) {
        const auto tail = spec.rates.tail_view();
        if (!tail.geometric) {
            const double b = tail.a * static_cast<double>(tail.start) + tail.b;
            lo = tail.a + b * 1e-6;
        }
    }
    auto f = [&](double alpha) { return laplace_mean(spec, alpha) - 1.0; };
    double flo = f(lo);
    if (flo <= 0.0) throw std::runtime_error("failed to bracket the Malthusian root");
    double hi = std::max(1.0, 2.0 * lo);
    double fhi = f(hi);
    for (int i = 0; i < 200 && fhi >= 0.0; ++i) {
        hi *= 2.0;
        fhi = f(hi);
    }
    if (fhi >= 0.0) throw std::runtime_error("failed to bracket the Malthusian root");

    MalthusianResult res;
    res.alpha_star = brent_root(f, lo, hi, flo, fhi);
    res.residual = std::abs(f(res.alpha_star));
    res.supercritical = true;
    res.limit_mean_progeny = check.limit_mean_progeny;

    if (spec.aging.integrable()) {
        res.mu = laplace_mean_aging_mu(spec, res.alpha_star);
    } else {
        switch (spec.rates.kind()) {
            case RateSequence::Kind::Constant: {
                const double c = spec.rates.intercept();
                res.mu = c / (res.alpha_star * res.alpha_star);
                res.closed_form_alpha_star = c;
                break;
            }
            case RateSequence::Kind::Affine: {
                const double a = spec.rates.slope(), b = spec.rates.intercept();
                const double d = res.alpha_star - a;
                res.mu = b / (d * d);
                res.closed_form_alpha_star = a + b;
                break;
            }
            case RateSequence::Kind::Explicit:
                res.mu = detail::laplace_series_mu(spec.rates, res.alpha_star);
                break;
        }
    }
    return res;
}

}  // namespace cbp
