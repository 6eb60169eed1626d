#pragma once

#include <cstddef>
#include <functional>

namespace cbp {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_segments = 20000;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});

// Vector-valued integrand: f(x, out) fills out[0..n-1]; the segment error is
// controlled in the max norm so every component meets the tolerance.
void integrate_vec(const std::function<void(double, double*)>& f, std::size_t n,
                   double a, double b, double* out, const QuadOptions& opt = {});

}  // namespace cbp
