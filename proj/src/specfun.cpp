#include "infconv/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace infconv::specfun {

namespace {
void require_positive(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(who) + ": argument must be positive and finite");
}
}  // namespace

double gamma(double x) {
    require_positive(x, "gamma");
    if (x > 171.6) throw std::overflow_error("gamma: result overflows double");
    return std::tgamma(x);
}

double lgamma(double x) {
    require_positive(x, "lgamma");
    return std::lgamma(x);
}

double digamma(double x) {
    require_positive(x, "digamma");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series in 1/x^2 (Bernoulli numbers)
    const double r = 1.0 / (x * x);
    double s = r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
    return acc + std::log(x) - 0.5 / x - s;
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // Euler-Maclaurin tail of sum_{k>=0} 1/(x+k)^2
    const double r = 1.0 / (x * x);
    double s = 1.0 / x + 0.5 * r +
               r / x * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))));
    return acc + s;
}

double trigamma_h(double x, double q) {
    require_positive(x, "trigamma_h");
    require_positive(q, "trigamma_h");
    if (x == q) return x * x + x - q;
    return x * x + x - q - x * x * (x - q) * trigamma(x);
}

double log_unit_ball_volume(double n) {
    require_positive(n, "unit_ball_volume");
    return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

double unit_ball_volume(double n) { return std::exp(log_unit_ball_volume(n)); }

GeometricContext::GeometricContext(int dim) : n(dim), omega_n(0.0) {
    if (dim < 1) throw std::domain_error("GeometricContext: dimension must be >= 1");
    omega_n = unit_ball_volume(dim);
}

double log_power_exponential_integral(double n, double q, double M) {
    if (!(q > 1.0)) throw std::domain_error("power_exponential_integral: q must exceed 1");
    if (!(M > 0.0)) throw std::domain_error("power_exponential_integral: M must be positive");
    require_positive(n, "power_exponential_integral");
    return std::lgamma(n / q + 1.0) + log_unit_ball_volume(n) - (n / q) * std::log(M);
}

double power_exponential_integral(double n, double q, double M) {
    return std::exp(log_power_exponential_integral(n, q, M));
}

}  // namespace infconv::specfun
