#pragma once

#include <cstdint>
#include <vector>

namespace cbp {

// Rate sequence lambda_k (k = 0, 1, ...) of a pure birth process. Every kind
// eventually becomes either an arithmetic progression or a repeated constant,
// which the analytic code exploits through tail_view().
class RateSequence {
public:
    enum class Kind { Constant, Affine, Explicit };
    enum class Tail { RepeatLast, Affine };

    RateSequence() = default;  // constant(1)

    // lambda_k = c
    static RateSequence constant(double c);
    // lambda_k = slope * k + intercept; slope 0 collapses to constant(intercept)
    static RateSequence affine(double slope, double intercept);
    // leading values given explicitly, continued per the tail rule
    static RateSequence explicit_list(std::vector<double> values, Tail tail,
                                      double tail_slope = 0.0);

    Kind kind() const { return kind_; }
    double slope() const { return a_; }
    double intercept() const { return b_; }
    const std::vector<double>& values() const { return values_; }
    Tail tail() const { return tail_; }
    double tail_slope() const { return tail_slope_; }

    double value(std::uint64_t k) const;

    // Description of the sequence from index `start` onward: either
    // lambda_{start+j} = rate for all j (geometric view) or
    // lambda_k = a*k + b for k >= start.
    struct TailView {
        bool geometric;
        double rate;         // geometric only
        double a, b;         // affine only
        std::uint64_t start; // first index covered
    };
    TailView tail_view() const;

private:
    Kind kind_ = Kind::Constant;
    double a_ = 0.0, b_ = 1.0;
    std::vector<double> values_;
    Tail tail_ = Tail::RepeatLast;
    double tail_slope_ = 0.0;
};

}  // namespace cbp
