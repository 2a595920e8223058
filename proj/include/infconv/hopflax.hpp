#pragma once

#include <stdexcept>
#include <vector>

#include "infconv/funcrep.hpp"

namespace infconv {

struct InfimumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HopfLaxParams {
    double p = 2.0;
    double p_conj = 2.0;
    double t = 1.0;

    static HopfLaxParams make(double p, double t);
    // |d|^{p'} / (p' t^{p'-1})
    double cost(double d) const;
    double cost_coefficient() const;  // 1 / (p' t^{p'-1})
};

// Throws InfimumError when the tail lets the infimum run to -infinity.
void check_finiteness(const std::optional<TailBound>& tail, const HopfLaxParams& hp);
// t0 = (2 p' c2)^{1/(1-p')}; +inf without a decaying tail
double finiteness_horizon(const std::optional<TailBound>& tail, const HopfLaxParams& hp);
// Tail of Q_t g implied by the tail of g.
std::optional<TailBound> evolve_tail(const std::optional<TailBound>& tail, const HopfLaxParams& hp);

// Pointwise Q_t g.
double hopf_lax_at(const RadialFunction& g, double r, const HopfLaxParams& hp);
double hopf_lax_at(const CartesianFunction& g, Point x, const HopfLaxParams& hp);

// Lazy images (evaluated on demand).
RadialFunction hopf_lax(const RadialFunction& g, const HopfLaxParams& hp);
CartesianFunction hopf_lax(const CartesianFunction& g, const HopfLaxParams& hp);

// Grid-level solvers: Q_t g at every node of the input grid.
GridFunction inf_convolve_bruteforce(const GridFunction& g, const HopfLaxParams& hp);
RadialProfile inf_convolve_bruteforce(const RadialProfile& g, const HopfLaxParams& hp);
GridFunction inf_convolve_fast(const GridFunction& g, const HopfLaxParams& hp);
RadialProfile inf_convolve_fast(const RadialProfile& g, const HopfLaxParams& hp);
RadialProfile radial_inf_convolve(const RadialProfile& g, const HopfLaxParams& hp);

struct HJCheck {
    double limit;     // extrapolated d/dt Q_t g(x) at t = 0
    double analytic;  // -|grad g(x)|^p / p
    double order;     // fitted error order in t (NaN with < 3 ladder points)
    std::vector<double> quotients;  // (Q_t g(x) - g(x)) / t along the ladder
};

HJCheck hj_derivative_check(const RadialFunction& g, double r, const std::vector<double>& t_ladder, double p);
HJCheck hj_derivative_check(const CartesianFunction& g, Point x, const std::vector<double>& t_ladder, double p);

}  // namespace infconv
