#include "cbp/aging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AgingFunction AgingFunction::identity() { return AgingFunction{}; }

AgingFunction AgingFunction::exponential(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("aging decay rate must be positive");
    AgingFunction a;
    a.kind_ = Kind::Exponential;
    a.c_ = c;
    return a;
}

AgingFunction AgingFunction::tabulated(std::vector<double> t, std::vector<double> g,
                                       Beyond beyond) {
    if (t.size() != g.size() || t.size() < 2)
        throw std::invalid_argument("tabulated aging needs matching grids of size >= 2");
    if (t.front() != 0.0)
        throw std::invalid_argument("tabulated aging grid must start at t = 0");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw std::invalid_argument("tabulated aging grid must be strictly increasing");
    for (double v : g)
        if (!(v >= 0.0)) throw std::invalid_argument("aging speed must be nonnegative");

    AgingFunction a;
    a.kind_ = Kind::Tabulated;
    a.beyond_ = beyond;
    a.grid_t_ = std::move(t);
    a.grid_g_ = std::move(g);
    a.grid_G_.resize(a.grid_t_.size());
    a.grid_G_[0] = 0.0;
    for (std::size_t i = 1; i < a.grid_t_.size(); ++i) {
        const double dt = a.grid_t_[i] - a.grid_t_[i - 1];
        a.grid_G_[i] = a.grid_G_[i - 1] + 0.5 * (a.grid_g_[i] + a.grid_g_[i - 1]) * dt;
    }
    return a;
}

double AgingFunction::g(double t) const {
    if (t < 0.0) throw std::invalid_argument("negative time");
    switch (kind_) {
        case Kind::Identity:
            return 1.0;
        case Kind::Exponential:
            return std::exp(-c_ * t);
        case Kind::Tabulated: {
            if (t > grid_t_.back()) {
                if (beyond_ == Beyond::Error)
                    throw std::domain_error("time beyond the tabulated aging grid");
                return 0.0;
            }
            auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
            const std::size_t i = (it == grid_t_.begin()) ? 1 : it - grid_t_.begin();
            const std::size_t hi = std::min(i, grid_t_.size() - 1);
            const double w = (t - grid_t_[hi - 1]) / (grid_t_[hi] - grid_t_[hi - 1]);
            return grid_g_[hi - 1] + w * (grid_g_[hi] - grid_g_[hi - 1]);
        }
    }
    return 1.0;
}

double AgingFunction::G(double t) const {
    if (t < 0.0) throw std::invalid_argument("negative time");
    switch (kind_) {
        case Kind::Identity:
            return t;
        case Kind::Exponential:
            return -std::expm1(-c_ * t) / c_;
        case Kind::Tabulated: {
            if (t >= grid_t_.back()) {
                if (t > grid_t_.back() && beyond_ == Beyond::Error)
                    throw std::domain_error("time beyond the tabulated aging grid");
                return grid_G_.back();
            }
            auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
            const std::size_t hi = std::max<std::size_t>(it - grid_t_.begin(), 1);
            const double t0 = grid_t_[hi - 1], g0 = grid_g_[hi - 1];
            const double dt = t - t0;
            const double slope = (grid_g_[hi] - g0) / (grid_t_[hi] - t0);
            return grid_G_[hi - 1] + g0 * dt + 0.5 * slope * dt * dt;
        }
    }
    return t;
}

double AgingFunction::G_total() const {
    switch (kind_) {
        case Kind::Identity:
            return kInf;
        case Kind::Exponential:
            return 1.0 / c_;
        case Kind::Tabulated:
            return grid_G_.back();
    }
    return kInf;
}

double AgingFunction::G_inverse(double s) const {
    if (s < 0.0) throw std::invalid_argument("negative internal time");
    switch (kind_) {
        case Kind::Identity:
            return s;
        case Kind::Exponential: {
            const double x = c_ * s;
            if (x >= 1.0) throw std::domain_error("internal time beyond the aging budget");
            return -std::log1p(-x) / c_;
        }
        case Kind::Tabulated: {
            if (s >= grid_G_.back())
                throw std::domain_error("internal time beyond the aging budget");
            // G is monotone and continuous; bisect to 1e-12.
            double lo = 0.0, hi = grid_t_.back();
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                (G(mid) < s ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return s;
}

double AgingFunction::sup_g() const {
    switch (kind_) {
        case Kind::Identity:
        case Kind::Exponential:
            return 1.0;
        case Kind::Tabulated:
            return *std::max_element(grid_g_.begin(), grid_g_.end());
    }
    return 1.0;
}

}  // namespace cbp
