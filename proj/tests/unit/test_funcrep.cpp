#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "infconv/funcrep.hpp"
#include "infconv/specfun.hpp"

using namespace infconv;
namespace sf = infconv::specfun;

namespace {

RadialFunction power(int n, double c, double q) {
    RadialFunction g;
    g.n = n;
    g.value = [c, q](double r) { return -c * std::pow(r, q); };
    g.slope = [c, q](double r) { return -c * q * std::pow(r, q - 1); };
    g.tail = TailBound{0, c, q};
    g.concave = true;
    return g;
}

RadialProfile sample(const RadialFunction& g, std::size_t N, double R, Interpolation in) {
    auto r = hybrid_radial_grid(N, R);
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = g.value(r[i]);
    return RadialProfile(g.n, r, v, g.tail, in);
}

}  // namespace

TEST_CASE("profile validation") {
    std::vector<double> r = hybrid_radial_grid(32, 5.0);
    std::vector<double> v(32, 0.0);
    CHECK_NOTHROW(RadialProfile(1, r, v));
    auto bad = r;
    bad[0] = 0.1;
    CHECK_THROWS(RadialProfile(1, bad, v));
    CHECK_THROWS(RadialProfile(1, std::vector<double>(r.begin(), r.begin() + 8), std::vector<double>(8, 0.0)));
    CHECK_THROWS(RadialProfile(1, r, v, TailBound{0, 1, 0.5}));
    CHECK_THROWS(GridFunction(1, {0, 0}, -1.0, {4, 1}, std::vector<double>(4, 0.0)));
}

TEST_CASE("radial_integral examples") {
    auto prof = sample(power(1, 1.0, 2.0), 4096, 12.0, Interpolation::Quintic);
    CHECK(std::abs(radial_integral(prof, Measure::lebesgue()) / std::sqrt(std::numbers::pi) - 1) < 1e-10);

    // indicator of the unit disk
    std::vector<double> r = hybrid_radial_grid(64, 1.0);
    RadialProfile disk(2, r, std::vector<double>(r.size(), 0.0));
    CHECK(radial_integral(disk, Measure::lebesgue()) == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    for (int n : {1, 2, 3}) {
        RadialFunction one;
        one.n = n;
        one.value = [](double) { return 0.0; };
        one.tail = TailBound{0, 0, 2};
        CHECK(std::abs(std::exp(log_integral_exp(one, 1.0, Measure::gaussian())) - 1) < 1e-10);
    }
}

TEST_CASE("divergence is signalled") {
    RadialFunction grow;
    grow.n = 1;
    grow.value = [](double r) { return r; };
    CHECK_THROWS_AS(log_integral_exp(grow, 1.0, Measure::lebesgue()), DivergenceError);
    grow.tail = TailBound{0, -1, 2};
    CHECK_THROWS_AS(log_integral_exp(grow, 1.0, Measure::lebesgue()), DivergenceError);
}

TEST_CASE("log_norm_alpha") {
    std::vector<double> r = hybrid_radial_grid(64, 1.0 / std::sqrt(std::numbers::pi));
    RadialProfile unit(2, r, std::vector<double>(r.size(), 0.0));
    CHECK(std::abs(log_norm_alpha(RadialFunction::from_profile(unit), 1.0, Measure::lebesgue())) < 1e-12);
    auto g = power(1, 1.0, 2.0);
    CHECK(log_norm_alpha(g, 1.0, Measure::lebesgue()) ==
          doctest::Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-12));
    for (double alpha : {0.5, 1.0, 3.0}) {
        const double a = log_norm_alpha(g, alpha, Measure::lebesgue());
        const double b = log_norm_alpha(g.plus_constant(1.7), alpha, Measure::lebesgue());
        CHECK(std::abs(b - a - 1.7) < 1e-12);
        const double ag = log_norm_alpha(g, alpha, Measure::gaussian());
        const double bg = log_norm_alpha(g.plus_constant(-0.4), alpha, Measure::gaussian());
        CHECK(std::abs(bg - ag + 0.4) < 1e-12);
    }
}

TEST_CASE("entropy") {
    std::vector<double> r = hybrid_radial_grid(64, 0.5);
    RadialProfile ind(1, r, std::vector<double>(r.size(), 0.0));  // [-1/2, 1/2]
    CHECK(std::abs(entropy(RadialFunction::from_profile(ind), Measure::lebesgue())) < 1e-12);

    for (int n : {1, 2, 3})
        for (double p : {2.0, 3.0}) {
            const double pc = p / (p - 1);
            const double wn = n * sf::unit_ball_volume(n);
            const double expect = -(wn / pc) * sf::gamma(1 + n / pc) -
                                  (wn / pc) * sf::gamma(n / pc) * std::log((wn / pc) * sf::gamma(n / pc));
            const double got = entropy(power(n, 1.0, pc), Measure::lebesgue());
            CHECK(std::abs(got / expect - 1) < 1e-10);
        }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.01, 10.0);
    auto g = power(2, 0.7, 1.5);
    const double e0 = entropy(g, Measure::lebesgue());
    const double eg = entropy(g, Measure::gaussian());
    for (int k = 0; k < 5; ++k) {
        const double c = U(rng);
        CHECK(std::abs(entropy(g.plus_constant(std::log(c)), Measure::lebesgue()) - c * e0) < 1e-10 * std::abs(c * e0));
        CHECK(std::abs(entropy(g.plus_constant(std::log(c)), Measure::gaussian()) - c * eg) <
              1e-10 * (1 + std::abs(c * eg)));
    }
}

TEST_CASE("grad_norm_p") {
    RadialFunction c;
    c.n = 2;
    c.value = [](double) { return 0.3; };
    c.slope = [](double) { return 0.0; };
    c.tail = TailBound{0.3, 0, 2};
    CHECK(grad_norm_p(c, 2.0, Measure::gaussian()) == 0.0);

    for (int n : {1, 2, 3})
        for (double p : {2.0, 3.0})
            for (double eps : {0.0, 0.1, 0.3}) {
                const double pc = p / (p - 1), s = pc - eps;
                auto logf = power(n, 1.0 / p, s);  // log f = -r^s / p
                const double expect = n * sf::unit_ball_volume(n) * std::pow(s, p - 1) / std::pow(p, p) *
                                      sf::gamma((p * (s - 1) + n) / s);
                CHECK(std::abs(grad_norm_p(logf, p, Measure::lebesgue()) / expect - 1) < 1e-9);
            }
    for (double eps : {0.01, 0.1, 0.2}) {
        auto logf = power(1, eps / 2, 2.0);
        CHECK(std::abs(grad_norm_p(logf, 2.0, Measure::gaussian()) / (eps * eps * std::pow(1 + 2 * eps, -1.5)) - 1) <
              1e-10);
    }
}

TEST_CASE("schwarz rearrangement") {
    // radial nonincreasing input is fixed
    auto g = power(2, 1.0, 2.0);
    auto prof = sample(g, 2048, 6.0, Interpolation::Linear);
    RadialProfile star = schwarz_rearrange(prof);
    double worst = 0;
    for (double r = 0; r < 4.0; r += 0.01) worst = std::max(worst, std::abs(star(r) - prof(r)));
    CHECK(worst < 1e-5);

    // shifted bump on a 1D grid: norms preserved, Dirichlet energy decreases
    const double h = 0.004;
    const std::size_t N = 3001;
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = -6 + h * i;
        v[i] = -std::pow(x - 0.8, 2) - 0.3 * std::sin(2 * x) * std::exp(-x * x) - 0.5 * std::pow(x - 0.8, 4) / 8;
    }
    GridFunction bump(1, {-6.0, 0.0}, h, {N, 1}, v);
    RadialProfile bs = schwarz_rearrange(bump);
    CartesianFunction fb = CartesianFunction::from_grid(bump);
    RadialFunction fs = RadialFunction::from_profile(bs);
    for (double q : {1.0, 2.0, 4.0}) {
        const double a = log_norm_alpha(fb, q, Measure::lebesgue());
        const double b = log_norm_alpha(fs, q, Measure::lebesgue());
        CHECK(std::abs(a - b) < 1e-6);
    }
    for (double p : {2.0, 3.0}) {
        const double Eb = log_grad_norm_p(
            [&] {
                CartesianFunction c = CartesianFunction::from_grid(bump);
                CartesianFunction d = c;
                d.value = [c, p](Point x) { return c.value(x) / p; };
                d.grid = nullptr;
                d.tail = TailBound{0, 1.0 / p, 2};
                return d;
            }(),
            p, Measure::lebesgue());
        RadialFunction ds = fs;
        ds.value = [fs, p](double r) { return fs.value(r) / p; };
        ds.slope = [fs, p](double r) { return fs.slope(r) / p; };
        const double Es = log_grad_norm_p(ds, p, Measure::lebesgue());
        CHECK(Es <= Eb);
    }
    // idempotence
    RadialProfile twice = schwarz_rearrange(bs);
    double wd = 0;
    for (double r = 0; r < 2.5; r += 0.01) wd = std::max(wd, std::abs(twice(r) - bs(r)));
    CHECK(wd < 1e-6);
}
