#pragma once

#include <cstdint>

#include "cbp/collapse.hpp"

namespace cbp {

struct GenerateOptions {
    bool use_linear_sampler = false;  // O(n) reference scan of the same weights
    bool validate = false;            // check sum D_h = 2 * edges after every edge
};

// Preferential attachment multigraph: n vertices, out-degree m, attachment
// weight degree + delta. Edges are added one at a time in (vertex, slot)
// order; a vertex's first edge can never self-loop. Sampling happens at the
// level of the underlying individuals (vertex v's j alive individuals carry
// weight child_count + 1 + delta/m each), which reproduces the collapsed
// branching construction exactly: complete vertices weigh degree + delta,
// the growing vertex weighs degree + (j/m) delta, and vertex 1 carries one
// extra unit because its first individual has no parent edge.
Multigraph generate_pam(unsigned m, double delta, std::uint64_t n,
                        std::uint64_t seed, const GenerateOptions& opt = {});

// Random recursive graph: the (j+1)-th edge of vertex v self-loops with
// probability (j/m) / ((v-1) + j/m), otherwise targets a uniform existing
// vertex. m = 1 gives the uniform random recursive tree.
Multigraph generate_rrg(unsigned m, std::uint64_t n, std::uint64_t seed);

// Simulate the branching population to exactly n*m individuals and collapse.
Multigraph generate_via_embedding(const BirthProcessSpec& spec, unsigned m,
                                  std::uint64_t n, std::uint64_t seed);

namespace detail {
// Proportional sampler over individual weights child_count + 1 + delta/m.
// The weight partition is [per-individual constants in id order | one slot per
// past birth holding the parent id]; the fast path indexes it in O(1), the
// linear path scans it, and both map identical uniforms to identical draws.
class AttachmentSampler {
public:
    AttachmentSampler(double delta_over_m, std::uint64_t capacity);
    void add_individual();                    // newborn, no children yet
    void record_birth(std::uint64_t parent);  // parent gains one child
    std::uint64_t alive() const { return alive_; }
    double total_weight() const;
    std::uint64_t draw_fast(double u) const;
    std::uint64_t draw_linear(double u) const;

private:
    double unit_;  // 1 + delta/m
    std::uint64_t alive_ = 0;
    std::vector<std::uint64_t> parent_slots_;
};
}  // namespace detail

}  // namespace cbp
