#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace infconv {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Cached Gauss-Legendre rule with m points (Newton on P_m).
const GaussRule& gauss_legendre(int m);

// Adaptive Gauss-Legendre on [a, b]: an m-point panel is accepted when it agrees
// with the sum over its two halves to within abs_tol scaled by the panel share.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-13, int m = 15, int max_depth = 40);

// Same, over consecutive breakpoints.
double integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breaks,
                          double abs_tol = 1e-13, int m = 15, int max_depth = 40);

// Panel layout for a positive half-line integral on [0, R]: geometric panels
// shrinking towards 0, uniform panels beyond `knee`.
std::vector<double> graded_breaks(double R, double knee, int n_uniform, int n_geometric);

struct Minimum {
    double x;
    double f;
};

// Golden-section search on [a, b]; returns the best point seen including endpoints.
Minimum golden_section(const std::function<double(double)>& f, double a, double b,
                       double x_tol = 1e-12, int max_iter = 200);

// log(sum exp(v_i))
double log_sum_exp(std::span<const double> v);

}  // namespace infconv
