#include <cmath>

#include "doctest.h"
#include "infconv/extremizer.hpp"
#include "infconv/families.hpp"

using namespace infconv;

namespace {

Family fam(FamilyKind k, int n, double p, double eps) {
    Family f;
    f.kind = k;
    f.n = n;
    f.p = p;
    f.eps = eps;
    return f;
}

const std::vector<std::pair<int, double>> kMatrix{{1, 2}, {2, 2}, {1, 3}, {3, 2}};

}  // namespace

TEST_CASE("hc parameters") {
    for (auto [n, p] : kMatrix) {
        auto f = fam(FamilyKind::PowerHC, n, p, 0.03);
        auto e = hc_params(radial_member(f), {p, 1, 1, p});
        const double pc = p / (p - 1);
        CHECK(e.theta == doctest::Approx(std::pow(pc, 1 - pc)).epsilon(1e-14));
        CHECK(e.a == doctest::Approx(analytic_values(f)["a"]).epsilon(1e-9));
        for (HCParams hc : {HCParams{p, 1, 1, p}, HCParams{p, 0.6, 1.5, 2.2}}) {
            Family x;
            x.kind = FamilyKind::ExtremizerHC;
            x.n = n;
            x.p = p;
            x.alpha = hc.alpha;
            x.beta = hc.beta;
            x.t = hc.t;
            auto g = radial_member(x);
            auto ex = hc_params(g, hc);
            CHECK(l1_model_distance(g, ex) < 1e-8);
        }
    }
}

TEST_CASE("lsi parameters") {
    for (auto [n, p] : kMatrix) {
        auto f0 = affine_exponent(radial_member(fam(FamilyKind::StretchLSI, n, p, 0.0)), 1 / p);
        auto e0 = lsi_params(f0, p);
        CHECK(e0.c1 == doctest::Approx(p).epsilon(1e-10));
        CHECK(l1_model_distance(f0, e0) < 1e-8);
        auto s = fam(FamilyKind::StretchLSI, n, p, 0.15);
        auto lf = affine_exponent(radial_member(s), 1 / p);
        auto e = lsi_params(lf, p);
        CHECK(e.c1 == doctest::Approx(analytic_values(s)["C1"]).epsilon(1e-9));
        CHECK(e.c2 == doctest::Approx(analytic_values(s)["C2"]).epsilon(1e-9));
        auto e2 = lsi_params(lf.plus_constant(1.3), p);
        CHECK(e2.c1 == doctest::Approx(e.c1).epsilon(1e-11));
        CHECK(e2.c2 == doctest::Approx(e.c2).epsilon(1e-11));
    }
    RadialFunction flat;
    flat.n = 1;
    flat.value = [](double) { return 0.0; };
    flat.slope = [](double) { return 0.0; };
    flat.extent = 1.0;
    CHECK_THROWS(lsi_params(flat, 2.0));
}

TEST_CASE("first-variation limits") {
    for (int n : {1, 2, 3}) {
        const double e = std::ldexp(1.0, -14);
        auto g = radial_member(fam(FamilyKind::GaussQuadratic, n, 2.0, e));
        auto gp = ghc_params(g, 1, 1);
        CHECK(l1_model_distance(g, gp) / e == doctest::Approx(gauss_sharpness_constant(n)).epsilon(2e-3));
    }
    for (auto [n, p] : kMatrix) {
        auto f = fam(FamilyKind::PowerHC, n, p, std::ldexp(1.0, -14));
        auto g = radial_member(f);
        auto e = hc_params(g, {p, 1, 1, p});
        CHECK(l1_model_distance(g, e) / (f.z() - 1) == doctest::Approx(hc_sharpness_constant(n, p)).epsilon(5e-3));
    }
}

TEST_CASE("translation fitting") {
    // planted translation in 1D and 2D
    Family x;
    x.kind = FamilyKind::ExtremizerHC;
    x.n = 1;
    x.p = 2;
    x.alpha = 1;
    x.beta = 2;
    x.t = 1;
    x.x0 = {0.37, 0};
    auto grid = sample_grid(x, {321, 8.0, Interpolation::Quintic});
    auto g = CartesianFunction::from_grid(grid);
    const HCParams hc{2, 1, 1, 2};
    auto e = hc_params(g, hc);
    auto fit = fit_translation(g, e);
    CHECK(std::abs(fit.x0[0] - 0.37) <= grid.spacing() / 64 + 1e-12);
    CHECK(fit.distance < 1e-5);
    CHECK(fit.distance <= fit.distance_at_zero);

    x.n = 2;
    x.x0 = {-0.52, 0.81};
    auto grid2 = sample_grid(x, {41, 5.0, Interpolation::Quintic});
    auto g2 = CartesianFunction::from_grid(grid2);
    auto e2 = hc_params(g2, hc);
    auto fit2 = fit_translation(g2, e2);
    CHECK(std::abs(fit2.x0[0] + 0.52) <= grid2.spacing() / 64 + 1e-12);
    CHECK(std::abs(fit2.x0[1] - 0.81) <= grid2.spacing() / 64 + 1e-12);
    CHECK(fit2.distance < 1e-5);

    // radial input: x0 = 0
    auto r = radial_member(fam(FamilyKind::PowerHC, 2, 2.0, 0.02));
    auto fr = fit_translation(r, hc_params(r, hc));
    CHECK(fr.x0[0] == 0.0);
    CHECK(fr.x0[1] == 0.0);

    // asymmetric bump: never worse than x0 = 0
    CartesianFunction bump;
    bump.dim = 1;
    bump.value = [](Point z) { return -0.25 * z[0] * z[0] + 0.3 * std::exp(-(z[0] - 1) * (z[0] - 1)); };
    bump.tail = TailBound{0, 0.25, 2};
    bump.scale = 2;
    auto eb = hc_params(bump, hc);
    auto fb = fit_translation(bump, eb);
    CHECK(fb.distance <= fb.distance_at_zero);
    CHECK(fb.distance < fb.distance_at_zero);
}

TEST_CASE("gaussian tilt fitting") {
    Family lin;
    lin.kind = FamilyKind::GaussLinear;
    lin.n = 2;
    lin.x0 = {0.5, -0.25};
    lin.C = 0.3;
    auto g = cartesian_member(lin);
    auto e = ghc_params(g, 1.0, 1.0);
    CHECK(l1_model_distance(g, e, {0.5, -0.25}) < 1e-8);
    FitOptions opt;
    opt.spacing = 0.125;
    opt.half_width = 1.5;
    auto fit = fit_translation(g, e, opt);
    CHECK(fit.distance < 1e-5);
    CHECK(std::abs(fit.x0[0] - 0.5) < 1e-9);
    CHECK(std::abs(fit.x0[1] + 0.25) < 1e-9);
}
