#pragma once

namespace infconv::specfun {

double gamma(double x);
double lgamma(double x);
double digamma(double x);
double trigamma(double x);

// x^2 + x - q - x^2 (x - q) trigamma(x); positive for all x, q > 0.
double trigamma_h(double x, double q);

// Volume of the unit ball. Accepts real n so continuous-dimension formulas work.
double unit_ball_volume(double n);
double log_unit_ball_volume(double n);

struct GeometricContext {
    int n;
    double omega_n;
    explicit GeometricContext(int dim);
    double sphere_area() const { return n * omega_n; }
};

// \int_{R^n} exp(-M |x|^q) dx = Gamma(n/q + 1) omega_n M^{-n/q}
double power_exponential_integral(double n, double q, double M);
double log_power_exponential_integral(double n, double q, double M);

}  // namespace infconv::specfun
