#include <cmath>
#include <random>

#include "doctest.h"
#include "infconv/families.hpp"
#include "infconv/pl.hpp"
#include "infconv/specfun.hpp"

using namespace infconv;

TEST_CASE("hc triple") {
    const Measure leb = Measure::lebesgue();
    for (auto [n, p] : std::vector<std::pair<int, double>>{{1, 2}, {2, 2}, {1, 3}, {3, 2}}) {
        Family f;
        f.kind = FamilyKind::PowerHC;
        f.n = n;
        f.p = p;
        f.eps = 0.04;
        auto g = radial_member(f);
        const double pc = p / (p - 1);
        for (HCParams hc : {HCParams{p, 1, 1, 3}, HCParams{p, 0.8, 2, 3}}) {
            auto T = build_hc_triple(g, hc, -1);
            const double theta = hc.alpha * std::pow((hc.beta - hc.alpha) / (hc.beta * hc.t), pc - 1);
            CHECK(T.theta0 == doctest::Approx(std::pow(hc.beta / hc.alpha, pc) * theta).epsilon(1e-13));
            CHECK(std::exp(log_integral_exp(T.w, 1, leb)) ==
                  doctest::Approx(std::pow(hc.alpha / hc.beta, n) * std::exp(log_integral_exp(g, hc.alpha, leb))).epsilon(1e-10));
            CHECK(std::exp(log_integral_exp(T.v, 1, leb)) ==
                  doctest::Approx(specfun::power_exponential_integral(n, pc, T.theta0 / pc)).epsilon(1e-10));
            const double d = hc_deficit(g, hc).deficit;
            CHECK(pl_epsilon(T) == doctest::Approx(d).epsilon(1e-8));
            auto C = build_hc_triple(g, hc, 1);
            CHECK(C.complementary);
            CHECK(C.lambda == doctest::Approx(1 - hc.alpha / hc.beta));
            CHECK(pl_epsilon(C) == doctest::Approx(d).epsilon(1e-8));
            CHECK(check_pl_hypothesis(T, 2000).worst <= 1e-6);
            CHECK(check_pl_hypothesis(C, 2000).worst <= 1e-6);
        }
    }
}

TEST_CASE("gaussian triple") {
    for (int n : {1, 2}) {
        Family f;
        f.kind = FamilyKind::GaussQuadratic;
        f.n = n;
        f.eps = 0.07;
        auto g = radial_member(f);
        auto T = build_gaussian_triple(g, 1.0, 0.6);
        CHECK(T.lambda == doctest::Approx(1 / 1.6));
        CHECK(std::exp(log_integral_exp(T.v, 1, T.measure)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(T.a == doctest::Approx(std::exp(log_integral_exp(T.u, 1, Measure::gaussian()))));
        CHECK(pl_epsilon(T) == doctest::Approx(ghc_deficit(g, 1.0, 0.6).deficit).epsilon(1e-8));
        CHECK(check_pl_hypothesis(T, 2000).worst <= 1e-6);
    }
    // |lambda x + (1-lambda) y|^2 identity
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0, 2);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const double a = 0.1 + std::abs(N(rng)), t = 0.1 + std::abs(N(rng));
        const double l = a / (a + t);
        const double x0 = N(rng), x1 = N(rng), y0 = N(rng), y1 = N(rng);
        const double z0 = l * x0 + (1 - l) * y0, z1 = l * x1 + (1 - l) * y1;
        const double lhs = z0 * z0 + z1 * z1;
        const double rhs = l * (x0 * x0 + x1 * x1) + (1 - l) * (y0 * y0 + y1 * y1) -
                           a * t / ((a + t) * (a + t)) * ((x0 - y0) * (x0 - y0) + (x1 - y1) * (x1 - y1));
        worst = std::max(worst, std::abs(lhs - rhs) / (1 + lhs));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("equal triples") {
    Family f;
    f.kind = FamilyKind::StretchLSI;
    f.n = 2;
    f.p = 2;
    f.eps = 0.3;
    auto T = equal_triple(radial_member(f), 0.3);
    CHECK(std::abs(pl_epsilon(T)) < 1e-12);
    auto h = check_pl_hypothesis(T, 4000);
    CHECK(h.worst <= 1e-12);
    auto d = pl_conclusion_distances(T);
    CHECK(d.first < 1e-12);
    CHECK(d.second < 1e-12);
}

TEST_CASE("conclusion distances") {
    Family x;
    x.kind = FamilyKind::ExtremizerHC;
    x.n = 2;
    x.p = 2;
    x.alpha = 1;
    x.beta = 3;
    x.t = 0.5;
    x.x0 = {0.3, -0.2};
    const HCParams hc{2, 0.5, 1, 3};
    auto T = build_hc_triple(cartesian_member(x), hc);
    auto d = pl_conclusion_distances(T, {0.3, -0.2}, {0.1, -0.2 / 3});
    CHECK(d.first < 1e-6);
    CHECK(d.second < 1e-6);
    // shifting u with x0 leaves the first term unchanged
    auto S = T;
    S.u = T.u.translated({0.25, 0.1});
    auto ds = pl_conclusion_distances(S, {0.55, -0.1}, {0.1, -0.2 / 3});
    CHECK(std::abs(ds.first - d.first) < 1e-6);
    // PowerHC: second term over sqrt(eps) stays bounded along a ladder
    double lo = 1e300, hi = 0;
    for (int k = 4; k <= 10; k += 2) {
        Family f;
        f.kind = FamilyKind::PowerHC;
        f.n = 1;
        f.p = 2;
        f.eps = std::ldexp(1.0, -k);
        auto R = build_hc_triple(radial_member(f), {2, 1, 1, 2});
        const double ratio = pl_conclusion_distances(R).second / std::sqrt(pl_epsilon(R));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 2.0);
}
