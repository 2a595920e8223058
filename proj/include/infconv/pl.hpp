#pragma once

#include <cstdint>
#include <utility>

#include "infconv/deficits.hpp"
#include "infconv/funcrep.hpp"

namespace infconv {

// Prekopa-Leindler triple. u, v, w are exponents with respect to `measure`;
// the Lebesgue densities are e^{u + log dmeasure/dx} etc.
template <class F>
struct PLTriple {
    F u, v, w;
    Measure measure = Measure::lebesgue();
    int n = 1;
    double lambda = 0.5;
    double a = 1.0;       // \int u / \int v
    double theta0 = 0.0;  // HC triples
    bool complementary = false;
};

using RadialTriple = PLTriple<RadialFunction>;
using CartesianTriple = PLTriple<CartesianFunction>;

// complementary: 0 -> automatic (alpha > beta/2), 1 -> force on, -1 -> force off
RadialTriple build_hc_triple(const RadialFunction& g, const HCParams& hc, int complementary = 0);
CartesianTriple build_hc_triple(const CartesianFunction& g, const HCParams& hc, int complementary = 0);
RadialTriple build_gaussian_triple(const RadialFunction& g, double alpha, double t);
CartesianTriple build_gaussian_triple(const CartesianFunction& g, double alpha, double t);

// Equal-function triple (u = v = w = e^h, any lambda).
RadialTriple equal_triple(const RadialFunction& h, double lambda);

// Lebesgue log densities at a point of R^n (radial triples take |x|).
double log_u(const RadialTriple& T, double r);
double log_v(const RadialTriple& T, double r);
double log_w(const RadialTriple& T, double r);

struct HypothesisCheck {
    double worst = 0.0;        // max of lambda log u(x) + (1-lambda) log v(y) - log w(lambda x + (1-lambda) y)
    std::size_t pairs = 0;
};

HypothesisCheck check_pl_hypothesis(const RadialTriple& T, std::size_t budget = 10000, std::uint64_t seed = 1);
HypothesisCheck check_pl_hypothesis(const CartesianTriple& T, std::size_t budget = 10000, std::uint64_t seed = 1);

double pl_epsilon(const RadialTriple& T);
double pl_epsilon(const CartesianTriple& T);

// ( \int |u - a v(. - x0)|, a \int |a^{-lambda} w - v(. - y0)| )
std::pair<double, double> pl_conclusion_distances(const RadialTriple& T);
std::pair<double, double> pl_conclusion_distances(const CartesianTriple& T, Point x0, Point y0);

}  // namespace infconv
