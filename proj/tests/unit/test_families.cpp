#include <cmath>

#include "doctest.h"
#include "infconv/families.hpp"
#include "infconv/hopflax.hpp"
#include "infconv/specfun.hpp"

using namespace infconv;

TEST_CASE("family spec round trip") {
    auto f = Family::parse("ExtremizerHC:n=2,p=3,alpha=1,beta=2.5,t=0.7,C=0.2,x0=0.5;-1");
    CHECK(f.kind == FamilyKind::ExtremizerHC);
    CHECK(f.n == 2);
    CHECK(f.x0[1] == -1.0);
    auto g = Family::parse(f.to_spec());
    CHECK(g.beta == 2.5);
    CHECK(g.x0[0] == 0.5);
    CHECK_THROWS(Family::parse("PowerHC:n=1,p=2,eps=0.3"));
    CHECK_THROWS(Family::parse("Nope:n=1"));
    CHECK_THROWS(Family::parse("GaussQuadratic:n=1,eps=0.3"));
}

TEST_CASE("closed forms match quadrature") {
    const auto leb = Measure::lebesgue(), gm = Measure::gaussian();
    for (auto [n, p] : std::vector<std::pair<int, double>>{{1, 2}, {2, 2}, {1, 3}, {3, 2}}) {
        auto f = Family::parse("PowerHC:n=" + std::to_string(n) + ",p=" + std::to_string(p) + ",eps=0.02");
        auto v = analytic_values(f);
        auto g = radial_member(f);
        CHECK(std::exp(log_integral_exp(g, 1.0, leb)) == doctest::Approx(v["norm1_g"]).epsilon(1e-10));
        auto q = hopf_lax(g, HopfLaxParams::make(p, 1.0));
        CHECK(std::exp(log_integral_exp(q, p, leb)) == doctest::Approx(v["normp_pow_p_Q1g"]).epsilon(1e-8));

        auto s = Family::parse("StretchLSI:n=" + std::to_string(n) + ",p=" + std::to_string(p) + ",eps=0.1");
        auto sv = analytic_values(s);
        auto sg = radial_member(s);
        CHECK(std::exp(log_integral_exp(sg, 1.0, leb)) == doctest::Approx(sv["normp_pow_p"]).epsilon(1e-10));
        RadialFunction logf = sg;
        logf.value = [sg, p](double r) { return sg.value(r) / p; };
        logf.slope = [sg, p](double r) { return sg.slope(r) / p; };
        CHECK(grad_norm_p(logf, p, leb) == doctest::Approx(sv["grad_norm_p"]).epsilon(1e-8));
        CHECK(entropy(sg, leb) == doctest::Approx(sv["entropy"]).epsilon(1e-9));
        CHECK(sv["lsi_deficit"] == doctest::Approx(sv["lsi_deficit_closed"]).epsilon(1e-12));
        const double pc = p / (p - 1);
        const double C1 = pc * std::pow(n / p, pc - 1) * std::pow(sv["normp_pow_p"], pc / p) * std::pow(sv["grad_norm_p"], 1 - pc);
        CHECK(sv["C1"] == doctest::Approx(C1).epsilon(1e-12));

        auto e = Family::parse("ExtremizerHC:n=" + std::to_string(n) + ",p=" + std::to_string(p) + ",alpha=1,beta=2,t=0.5,C=0.3");
        auto ev = analytic_values(e);
        auto eg = radial_member(e);
        CHECK(std::exp(log_integral_exp(eg, 1.0, leb)) == doctest::Approx(ev["norm_alpha_pow_alpha"]).epsilon(1e-10));
        auto eq = hopf_lax(eg, HopfLaxParams::make(p, 0.5));
        CHECK(eq(0.9) == doctest::Approx(0.3 - ev["Qt_coefficient"] * std::pow(0.9, pc)).epsilon(1e-10));
    }
    for (int n : {1, 2, 3}) {
        auto f = Family::parse("GaussQuadratic:n=" + std::to_string(n) + ",eps=0.05");
        auto v = analytic_values(f);
        auto g = radial_member(f);
        CHECK(std::exp(log_integral_exp(g, 1.0, gm)) == doctest::Approx(v["norm1_mu"]).epsilon(1e-11));
        auto q = hopf_lax(g, HopfLaxParams::make(2.0, 1.0));
        CHECK(q(1.3) == doctest::Approx(-v["Q1_coefficient"] * 1.69).epsilon(1e-10));
        CHECK(std::exp(0.5 * log_integral_exp(q, 2.0, gm)) == doctest::Approx(v["norm2_mu_Q1g"]).epsilon(1e-10));
    }
}

TEST_CASE("first variation constants") {
    // independent high-precision values
    CHECK(hc_sharpness_constant(1, 2) == doctest::Approx(1.71553).epsilon(1e-5));
    CHECK(hc_sharpness_constant(2, 2) == doctest::Approx(9.24582).epsilon(1e-5));
    CHECK(hc_sharpness_constant(1, 3) == doctest::Approx(0.78362).epsilon(1e-5));
    CHECK(hc_sharpness_constant(3, 2) == doctest::Approx(41.2093).epsilon(1e-5));
    CHECK(lsi_sharpness_constant(1, 2) == doctest::Approx(0.168719).epsilon(1e-5));
    CHECK(lsi_sharpness_constant(2, 2) == doctest::Approx(0.201224).epsilon(1e-5));
    CHECK(lsi_sharpness_constant(1, 3) == doctest::Approx(0.244987).epsilon(1e-5));
    CHECK(lsi_sharpness_constant(3, 2) == doctest::Approx(0.214261).epsilon(1e-5));
    // int |1 - x^2| dmu in 1D = 4 phi(1)
    CHECK(gauss_sharpness_constant(1) == doctest::Approx(4 * std::exp(-0.5) / std::sqrt(2 * M_PI)).epsilon(1e-11));
}

TEST_CASE("sampled members") {
    auto f = Family::parse("PowerHC:n=2,p=2,eps=0.01");
    auto prof = sample_radial(f, {2048, 0.0, Interpolation::Quintic});
    auto v = analytic_values(f);
    CHECK(radial_integral(prof, Measure::lebesgue()) == doctest::Approx(v["norm1_g"]).epsilon(1e-9));
    auto e = Family::parse("ExtremizerHC:n=1,p=2,alpha=1,beta=2,t=1,C=0,x0=0.7");
    auto grid = sample_grid(e, {801, 0.0, Interpolation::Quintic});
    CHECK(grid(0.7) == doctest::Approx(0.0));
    CHECK_THROWS(radial_member(Family::parse("GaussLinear:n=1,x0=1")));
}
