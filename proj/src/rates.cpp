#include "cbp/rates.hpp"

#include <stdexcept>

namespace cbp {

RateSequence RateSequence::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("constant rate must be positive");
    RateSequence r;
    r.kind_ = Kind::Constant;
    r.a_ = 0.0;
    r.b_ = c;
    return r;
}

RateSequence RateSequence::affine(double slope, double intercept) {
    if (!(slope >= 0.0)) throw std::invalid_argument("rate slope must be nonnegative");
    if (!(intercept > 0.0)) throw std::invalid_argument("rate intercept must be positive");
    if (slope == 0.0) return constant(intercept);
    RateSequence r;
    r.kind_ = Kind::Affine;
    r.a_ = slope;
    r.b_ = intercept;
    return r;
}

RateSequence RateSequence::explicit_list(std::vector<double> values, Tail tail,
                                         double tail_slope) {
    if (values.empty()) throw std::invalid_argument("explicit rate list is empty");
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("rates must be positive");
    if (tail == Tail::Affine && !(tail_slope >= 0.0))
        throw std::invalid_argument("tail slope must be nonnegative");
    RateSequence r;
    r.kind_ = Kind::Explicit;
    r.values_ = std::move(values);
    r.tail_ = (tail == Tail::Affine && tail_slope == 0.0) ? Tail::RepeatLast : tail;
    r.tail_slope_ = tail_slope;
    return r;
}

double RateSequence::value(std::uint64_t k) const {
    switch (kind_) {
        case Kind::Constant:
            return b_;
        case Kind::Affine:
            return a_ * static_cast<double>(k) + b_;
        case Kind::Explicit:
            if (k < values_.size()) return values_[k];
            if (tail_ == Tail::RepeatLast) return values_.back();
            return values_.back() +
                   tail_slope_ * static_cast<double>(k - (values_.size() - 1));
    }
    return b_;
}

RateSequence::TailView RateSequence::tail_view() const {
    TailView t{};
    switch (kind_) {
        case Kind::Constant:
            t.geometric = true;
            t.rate = b_;
            t.start = 0;
            break;
        case Kind::Affine:
            t.geometric = false;
            t.a = a_;
            t.b = b_;
            t.start = 0;
            break;
        case Kind::Explicit: {
            const std::uint64_t last = values_.size() - 1;
            if (tail_ == Tail::RepeatLast) {
                t.geometric = true;
                t.rate = values_.back();
            } else {
                t.geometric = false;
                t.a = tail_slope_;
                t.b = values_.back() - tail_slope_ * static_cast<double>(last);
            }
            t.start = last;
            break;
        }
    }
    return t;
}

}  // namespace cbp
