#include "cbp/birth_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbp {

double rate(const BirthProcessSpec& spec, std::uint64_t k) {
    return spec.rates.value(k);
}

std::vector<double> sample_jump_times(const BirthProcessSpec& spec, Rng& rng,
                                      const JumpStop& stop) {
    std::vector<double> times;
    const double budget = spec.aging.G_total();
    double s = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        if (stop.kind == JumpStop::Kind::MaxJumps && times.size() >= stop.count) break;
        s += rng.exponential(spec.rates.value(k));
        if (s >= budget) break;  // dormant: the jump never happens
        const double t = spec.aging.G_inverse(s);
        if (stop.kind == JumpStop::Kind::Horizon && t > stop.time) break;
        times.push_back(t);
    }
    return times;
}

namespace detail {

std::vector<double> count_probabilities_closed(const RateSequence& rates, double s,
                                               std::size_t K) {
    std::vector<double> p(K + 1, 0.0);
    if (s <= 0.0) {
        p[0] = 1.0;
        return p;
    }
    if (rates.kind() == RateSequence::Kind::Constant) {
        // Poisson(c s)
        const double cs = rates.intercept() * s;
        const double logcs = std::log(cs);
        for (std::size_t k = 0; k <= K; ++k)
            p[k] = std::exp(-cs + static_cast<double>(k) * logcs -
                            std::lgamma(static_cast<double>(k) + 1.0));
        return p;
    }
    // lambda_k = a k + b: negative binomial with r = b/a and success e^{-a s}
    const double a = rates.slope(), b = rates.intercept();
    const double r = b / a;
    const double logq = std::log(-std::expm1(-a * s));  // log(1 - e^{-a s})
    const double lgr = std::lgamma(r);
    for (std::size_t k = 0; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        p[k] = std::exp(std::lgamma(r + kk) - lgr - std::lgamma(kk + 1.0) - b * s +
                        kk * logq);
    }
    return p;
}

namespace {

// Dormand-Prince 5(4) pair.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,           500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84,     0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

std::vector<double> count_probabilities_ode(const RateSequence& rates, double s,
                                            std::size_t K) {
    const std::size_t n = K + 1;
    std::vector<double> lambda(n);
    for (std::size_t k = 0; k < n; ++k) lambda[k] = rates.value(k);

    auto deriv = [&](const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = -lambda[0] * y[0];
        for (std::size_t k = 1; k < n; ++k)
            dy[k] = -lambda[k] * y[k] + lambda[k - 1] * y[k - 1];
    };

    std::vector<double> y(n, 0.0);
    y[0] = 1.0;
    if (s <= 0.0) return y;

    constexpr double atol = 1e-12, rtol = 1e-10;
    const double lambda_max = *std::max_element(lambda.begin(), lambda.end());
    double x = 0.0;
    double h = std::min(s, 0.5 / lambda_max);

    std::vector<double> k_[7], ytmp(n), y5(n), y4(n);
    for (auto& v : k_) v.resize(n);

    while (x < s) {
        h = std::min(h, s - x);
        deriv(y, k_[0]);
        for (int stage = 1; stage < 7; ++stage) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < stage; ++j) acc += kA[stage][j] * k_[j][i];
                ytmp[i] = y[i] + h * acc;
            }
            deriv(ytmp, k_[stage]);
        }
        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s5 = 0.0, s4 = 0.0;
            for (int j = 0; j < 7; ++j) {
                s5 += kB5[j] * k_[j][i];
                s4 += kB4[j] * k_[j][i];
            }
            y5[i] = y[i] + h * s5;
            y4[i] = y[i] + h * s4;
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err_norm = std::max(err_norm, std::abs(y5[i] - y4[i]) / scale);
        }
        if (err_norm <= 1.0) {
            x += h;
            y.swap(y5);
        }
        const double factor = (err_norm > 0.0)
                                  ? 0.9 * std::pow(err_norm, -0.2)
                                  : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < 1e-14 * std::max(1.0, s))
            throw std::runtime_error("master equation stepper stalled");
    }
    for (double& v : y) v = std::clamp(v, 0.0, 1.0);
    return y;
}

double mean_count_internal(const RateSequence& rates, double s) {
    if (s <= 0.0) return 0.0;
    switch (rates.kind()) {
        case RateSequence::Kind::Constant:
            return rates.intercept() * s;
        case RateSequence::Kind::Affine:
            return rates.intercept() * std::expm1(rates.slope() * s) / rates.slope();
        case RateSequence::Kind::Explicit: {
            for (std::size_t K = 64; K <= 65536; K *= 2) {
                const auto p = count_probabilities_ode(rates, s, K);
                double total = 0.0, mean = 0.0;
                for (std::size_t k = 0; k <= K; ++k) {
                    total += p[k];
                    mean += static_cast<double>(k) * p[k];
                }
                if (1.0 - total < 1e-13) return mean;
            }
            throw std::runtime_error("mean count did not converge");
        }
    }
    return 0.0;
}

}  // namespace detail

CountProbabilities count_probabilities(const BirthProcessSpec& spec, double t,
                                       std::size_t K) {
    if (t < 0.0) throw std::invalid_argument("negative time");
    const double s = spec.aging.G(t);
    CountProbabilities out;
    out.t = t;
    out.values = (spec.rates.kind() == RateSequence::Kind::Explicit)
                     ? detail::count_probabilities_ode(spec.rates, s, K)
                     : detail::count_probabilities_closed(spec.rates, s, K);
    double total = 0.0;
    for (double v : out.values) total += v;
    out.tail_mass = std::max(0.0, 1.0 - total);
    return out;
}

double lipschitz_constant(const BirthProcessSpec& spec, std::uint64_t k) {
    return spec.rates.value(k) * spec.aging.sup_g();
}

double mean_count(const BirthProcessSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("negative time");
    return detail::mean_count_internal(spec.rates, spec.aging.G(t));
}

double limit_mean_count(const BirthProcessSpec& spec) {
    if (!spec.aging.integrable())
        return std::numeric_limits<double>::infinity();
    return detail::mean_count_internal(spec.rates, spec.aging.G_total());
}

}  // namespace cbp
