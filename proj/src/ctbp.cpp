#include "cbp/ctbp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace cbp {

namespace {

struct Event {
    double time;
    std::uint64_t id;
    double internal;  // individual's clock after this birth
};

struct LaterEvent {
    bool operator()(const Event& a, const Event& b) const {
        return a.time > b.time || (a.time == b.time && a.id > b.id);
    }
};

// Exponential draw j of individual `id`, from a counter-based stream so the
// value depends only on (seed, id, j), not on event interleaving.
double exponential_draw(std::uint64_t seed, std::uint64_t id, std::uint64_t j,
                        double rate) {
    Rng rng(substream_seed(substream_seed(seed, id), j));
    return -std::log1p(-rng.uniform()) / rate;
}

}  // namespace

BirthLog simulate_ctbp(const BirthProcessSpec& spec, std::uint64_t seed,
                       const SimStop& stop) {
    if (stop.kind == SimStop::Kind::MaxIndividuals && stop.count < 1)
        throw std::invalid_argument("target population must be at least 1");
    if (stop.kind == SimStop::Kind::Horizon && stop.time < 0.0)
        throw std::invalid_argument("negative horizon");

    BirthLog log;
    log.spec = spec;
    log.seed = seed;
    log.stop = stop;
    log.individuals.push_back({1, 0, 0.0, 0, 0.0});

    const double budget = spec.aging.G_total();
    std::priority_queue<Event, std::vector<Event>, LaterEvent> queue;

    auto schedule = [&](std::uint64_t id) {
        const Individual& ind = log.individuals[id - 1];
        const double lam = spec.rates.value(ind.child_count);
        const double s = ind.internal_clock +
                         exponential_draw(seed, id, ind.child_count, lam);
        if (s >= budget) return;  // dormant
        queue.push({ind.birth_time + spec.aging.G_inverse(s), id, s});
    };

    schedule(1);
    bool exhausted = false;
    while (true) {
        if (stop.kind == SimStop::Kind::MaxIndividuals &&
            log.individuals.size() >= stop.count)
            break;
        if (queue.empty()) {
            exhausted = true;
            break;
        }
        const Event ev = queue.top();
        queue.pop();
        if (stop.kind == SimStop::Kind::Horizon && ev.time > stop.time) break;

        Individual& parent = log.individuals[ev.id - 1];
        parent.internal_clock = ev.internal;
        parent.child_count += 1;
        const std::uint64_t child_id = log.individuals.size() + 1;
        log.individuals.push_back({child_id, ev.id, ev.time, 0, 0.0});
        schedule(ev.id);
        schedule(child_id);
    }

    log.extinct = exhausted;
    log.horizon = (stop.kind == SimStop::Kind::Horizon && !exhausted)
                      ? stop.time
                      : log.individuals.back().birth_time;
    if (stop.kind == SimStop::Kind::Horizon && exhausted) log.horizon = stop.time;
    return log;
}

std::uint64_t population_at(const BirthLog& log, double t) {
    if (t < 0.0) throw std::invalid_argument("negative time");
    if (t > log.horizon) throw std::domain_error("time beyond the simulated horizon");
    auto it = std::upper_bound(
        log.individuals.begin(), log.individuals.end(), t,
        [](double value, const Individual& ind) { return value < ind.birth_time; });
    return static_cast<std::uint64_t>(it - log.individuals.begin());
}

std::vector<std::uint64_t> children_count_histogram(const BirthLog& log, double t) {
    const std::uint64_t n = population_at(log, t);
    std::vector<std::uint32_t> children(n, 0);
    for (std::uint64_t id = 2; id <= n; ++id)
        ++children[log.individuals[id - 1].parent_id - 1];
    std::uint32_t max_count = 0;
    for (std::uint32_t c : children) max_count = std::max(max_count, c);
    std::vector<std::uint64_t> hist(max_count + 1, 0);
    for (std::uint32_t c : children) ++hist[c];
    return hist;
}

std::vector<std::uint64_t> children_count_histogram(const BirthLog& log) {
    return children_count_histogram(log, log.horizon);
}

GrowthEstimate estimate_growth(const BirthLog& log, double alpha_star, double mu) {
    const std::uint64_t n = log.individuals.size();
    if (n < 1000) throw std::invalid_argument("population too small for a growth fit");

    const std::uint64_t lo = n / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(n - lo + 1);
    for (std::uint64_t i = lo; i <= n; ++i) {
        const double x = log.individuals[i - 1].birth_time;
        const double y = std::log(static_cast<double>(i));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = sxx - sx * sx / count;
    if (denom <= 0.0) throw std::runtime_error("degenerate birth times in fit window");

    GrowthEstimate est;
    est.alpha_hat = (sxy - sx * sy / count) / denom;
    est.theta_t = mu * alpha_star * std::exp(-alpha_star * log.horizon) *
                  static_cast<double>(n);
    est.fit_lo = lo;
    est.fit_hi = n;
    return est;
}

}  // namespace cbp
