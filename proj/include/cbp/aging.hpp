#pragma once

#include <vector>

namespace cbp {

// Deterministic time change of a birth process: g is the clock speed,
// G(t) = int_0^t g is the internal time consumed by calendar age t.
// Integrable g caps lifetime reproduction at internal budget G_total.
class AgingFunction {
public:
    enum class Kind { Identity, Exponential, Tabulated };
    enum class Beyond { Error, Zero };  // tabulated queries past the grid end

    static AgingFunction identity();
    static AgingFunction exponential(double c);  // g(t) = exp(-c t)
    static AgingFunction tabulated(std::vector<double> t, std::vector<double> g,
                                   Beyond beyond = Beyond::Error);

    Kind kind() const { return kind_; }
    double param_c() const { return c_; }
    Beyond beyond() const { return beyond_; }
    const std::vector<double>& grid_t() const { return grid_t_; }
    const std::vector<double>& grid_g() const { return grid_g_; }

    double g(double t) const;
    double G(double t) const;
    double G_total() const;  // +inf for identity
    double G_inverse(double s) const;  // defined on [0, G_total)
    double sup_g() const;
    bool integrable() const { return kind_ != Kind::Identity; }

private:
    AgingFunction() = default;
    Kind kind_ = Kind::Identity;
    double c_ = 1.0;
    Beyond beyond_ = Beyond::Error;
    std::vector<double> grid_t_, grid_g_, grid_G_;
};

}  // namespace cbp
