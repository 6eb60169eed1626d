#include "cbp/discrete_pam.hpp"

#include <stdexcept>

#include "cbp/rng.hpp"

namespace cbp {
namespace detail {

AttachmentSampler::AttachmentSampler(double delta_over_m, std::uint64_t capacity)
    : unit_(1.0 + delta_over_m) {
    if (!(unit_ > 0.0)) throw std::invalid_argument("delta/m must exceed -1");
    parent_slots_.reserve(capacity);
}

void AttachmentSampler::add_individual() { ++alive_; }

void AttachmentSampler::record_birth(std::uint64_t parent) {
    parent_slots_.push_back(parent);
}

double AttachmentSampler::total_weight() const {
    return static_cast<double>(alive_) * unit_ +
           static_cast<double>(parent_slots_.size());
}

// Both draw paths locate the cell containing x = u * W inside the partition
// [alive_ cells of width unit_ | one unit cell per slot] using the same
// boundary expressions, so they agree bit for bit. The boundaries k * unit_
// are monotone in k, which makes the floor-then-fix search below land on the
// same cell as a left-to-right scan.
std::uint64_t AttachmentSampler::draw_fast(double u) const {
    const double a_block = static_cast<double>(alive_) * unit_;
    const double x = u * total_weight();
    if (parent_slots_.empty() || x < a_block) {
        std::uint64_t idx = static_cast<std::uint64_t>(x / unit_);
        if (idx >= alive_) idx = alive_ - 1;
        while (idx > 0 && x < static_cast<double>(idx) * unit_) --idx;
        while (idx + 1 < alive_ && x >= static_cast<double>(idx + 1) * unit_) ++idx;
        return idx + 1;
    }
    const double z = x - a_block;
    const std::uint64_t n_slots = parent_slots_.size();
    std::uint64_t j = static_cast<std::uint64_t>(z);
    if (j >= n_slots) j = n_slots - 1;
    while (j > 0 && z < static_cast<double>(j)) --j;
    while (j + 1 < n_slots && z >= static_cast<double>(j + 1)) ++j;
    return parent_slots_[j];
}

std::uint64_t AttachmentSampler::draw_linear(double u) const {
    const double a_block = static_cast<double>(alive_) * unit_;
    const double x = u * total_weight();
    if (parent_slots_.empty() || x < a_block) {
        std::uint64_t idx = 0;
        while (idx + 1 < alive_ && x >= static_cast<double>(idx + 1) * unit_) ++idx;
        return idx + 1;
    }
    const double z = x - a_block;
    std::uint64_t j = 0;
    while (j + 1 < parent_slots_.size() && z >= static_cast<double>(j + 1)) ++j;
    return parent_slots_[j];
}

}  // namespace detail

Multigraph generate_pam(unsigned m, double delta, std::uint64_t n,
                        std::uint64_t seed, const GenerateOptions& opt) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(delta > -static_cast<double>(m)))
        throw std::invalid_argument("delta must exceed -m");

    const std::uint64_t total = n * m;
    const CollapseMap map{m};
    detail::AttachmentSampler sampler(delta / m, total);
    sampler.add_individual();

    Rng rng(seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    pairs.reserve(total - 1);
    std::vector<std::uint64_t> vdeg;
    if (opt.validate) vdeg.assign(n, 0);

    for (std::uint64_t x = 2; x <= total; ++x) {
        const double u = rng.uniform();
        const std::uint64_t y =
            opt.use_linear_sampler ? sampler.draw_linear(u) : sampler.draw_fast(u);
        pairs.emplace_back(vertex_of(map, x).vertex, vertex_of(map, y).vertex);
        sampler.record_birth(y);
        sampler.add_individual();
        if (opt.validate) {
            ++vdeg[pairs.back().first - 1];
            ++vdeg[pairs.back().second - 1];
            std::uint64_t degsum = 0;
            for (std::uint64_t d : vdeg) degsum += d;
            if (degsum != 2 * pairs.size())
                throw std::logic_error("degree sum out of step with edge count");
        }
    }
    return multigraph_from_pairs(m, n, std::move(pairs));
}

Multigraph generate_rrg(unsigned m, std::uint64_t n, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (n < 1) throw std::invalid_argument("n must be at least 1");

    const std::uint64_t total = n * m;
    const CollapseMap map{m};
    Rng rng(seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    pairs.reserve(total - 1);
    for (std::uint64_t x = 2; x <= total; ++x) {
        // Uniform parent among the x-1 existing individuals.
        std::uint64_t y = 1 + static_cast<std::uint64_t>(
                                  rng.uniform() * static_cast<double>(x - 1));
        if (y > x - 1) y = x - 1;
        pairs.emplace_back(vertex_of(map, x).vertex, vertex_of(map, y).vertex);
    }
    return multigraph_from_pairs(m, n, std::move(pairs));
}

Multigraph generate_via_embedding(const BirthProcessSpec& spec, unsigned m,
                                  std::uint64_t n, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    BirthLog log = simulate_ctbp(spec, seed, SimStop::max_individuals(n * m));
    if (log.individuals.size() < n * m)
        throw std::runtime_error("process went dormant before reaching the requested size");
    return collapse(log, m);
}

}  // namespace cbp
