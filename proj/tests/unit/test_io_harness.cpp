#include <cmath>
#include <sstream>

#include "doctest.h"
#include "infconv/harness.hpp"
#include "infconv/io.hpp"

using namespace infconv;

TEST_CASE("function file round trip, radial") {
    std::vector<double> r, g;
    for (int i = 0; i < 20; ++i) {
        r.push_back(0.1 * i * i);
        g.push_back(-r.back() * r.back() / 3.0);
    }
    RadialProfile prof(3, r, g, TailBound{0.1, 1.0, 2.0}, Interpolation::Quintic);
    std::stringstream s;
    write_function(s, prof, 2.5);
    FunctionFile f = parse_function_text(s);
    REQUIRE(f.is_radial());
    CHECK(f.n == 3);
    CHECK(f.p == 2.5);
    REQUIRE(f.tail);
    CHECK(f.tail->c1 == 0.1);
    CHECK(f.tail->q == 2.0);
    CHECK(f.radial().r() == r);
    CHECK(f.radial().logvals() == g);
    CHECK(f.radial().interpolation() == Interpolation::Quintic);
}

TEST_CASE("function file round trip, 2D grid") {
    std::vector<double> v;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 4; ++i) v.push_back(-0.1 * i * i - 0.3 * j + 1.0 / 3.0);
    GridFunction gf(2, {-1.5, -1.0}, 0.5, {4, 3}, v);
    std::stringstream s;
    write_function(s, gf, 2.0);
    FunctionFile f = parse_function_text(s);
    REQUIRE_FALSE(f.is_radial());
    CHECK(f.grid().dim() == 2);
    CHECK(f.grid().logvals() == v);
    CHECK(f.grid().at(3, 2) == v[3 + 4 * 2]);
    CHECK_FALSE(f.tail);
}

TEST_CASE("function file layout detection and errors") {
    std::istringstream one("# n=1 p=2 tail=none\n-1 -1\n0 0\n1 -1\n");
    FunctionFile f = parse_function_text(one);
    CHECK_FALSE(f.is_radial());
    std::string text = "# n=2 p=3 tail=0,1,1.5\n";
    for (int i = 0; i < 16; ++i) text += format_number(0.25 * i) + " " + format_number(-std::pow(0.25 * i, 1.5)) + "\n";
    std::istringstream rad(text);
    CHECK(parse_function_text(rad).is_radial());
    std::istringstream few("# n=2 p=3\n0 0\n1 -1\n");
    CHECK_THROWS(parse_function_text(few));
    std::istringstream bad("# n=2 p=2\n0 0 0\n1 0\n");
    CHECK_THROWS(parse_function_text(bad));
}

TEST_CASE("config parsing") {
    std::istringstream in("top = 1\n[family]\nkind = PowerHC  # comment\nn = 1, 2,3\n; full line comment\n[params]\nbeta = p\n");
    Config c = Config::parse(in);
    CHECK(c.get("", "top", "") == "1");
    CHECK(c.get("family", "kind", "") == "PowerHC");
    CHECK(c.numbers("family", "n", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.number("params", "alpha", 0.5) == 0.5);
    CHECK_THROWS(c.require("params", "t"));
    CHECK(c.has("params", "beta"));
}

TEST_CASE("csv writer and number format") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-kInf) == "-inf");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    std::ostringstream out;
    CsvWriter w(out, {"a", "b"});
    w.row({"x,y", "2"});
    CHECK_THROWS(w.row({"1"}));
    CHECK(out.str() == "a,b\n\"x,y\",2\n");
}

TEST_CASE("ladders and experiment config") {
    auto L = geometric_ladder(0.0625, std::ldexp(1.0, -12), 0.5);
    CHECK(L.size() == 9);
    CHECK(L.back() == std::ldexp(1.0, -12));
    std::istringstream in("[experiment]\nkind = sharpness\n[family]\nkind = GaussQuadratic\nn = 1,2\np = 2,3\n[ladder]\nvalues = 0.1,0.05\n");
    const Config cfg = Config::parse(in);
    CHECK_THROWS(ExperimentConfig::from(cfg));  // ladder too short
    Config ok = cfg;
    ok.set("ladder", "values", "0.1,0.05,0.025,0.0125,0.00625,0.003125");
    ExperimentConfig c = ExperimentConfig::from(ok);
    CHECK(c.ladder.size() == 6);
    CHECK(c.expand().size() == 2);  // gaussian families only run p = 2
    CHECK(c.deficit_kind() == "ghc");
    c.ladder = {0.1, 0.2, 0.05, 0.02, 0.01, 0.005};
    CHECK_THROWS(c.validate());
}

TEST_CASE("rate fit window") {
    // distance = 3 deficit^{1/2} exactly; first two points dropped, noise-level points dropped
    std::vector<RatePoint> pts;
    for (int k = 0; k < 10; ++k) {
        const double e = std::ldexp(1.0, -k - 2);
        const double d = k < 8 ? e * e : 1e-12;
        pts.push_back({e, d, 3 * std::sqrt(d), e, ""});
    }
    pts[4].error = "failed";
    RateFit f = fit_rate(pts, 1e-12);
    CHECK(f.window_first == 2);
    CHECK(f.window_size == 5);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_FALSE(f.flagged);
    CHECK(f.distance_constant == doctest::Approx(3.0));

    std::vector<RatePoint> few(pts.begin(), pts.begin() + 5);
    CHECK(fit_rate(few, 1e-12).flagged);
}

TEST_CASE("sharpness run is deterministic") {
    ExperimentConfig c;
    c.kind = ExperimentKind::Sharpness;
    c.family.kind = FamilyKind::GaussQuadratic;
    c.family.p = 2;
    c.ns = {1};
    c.ps = {2};
    c.ladder = geometric_ladder(0.0625, std::ldexp(1.0, -10), 0.5);
    RateFit a = run_sharpness(c), b = run_sharpness(c);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].deficit == b.points[i].deficit);
        CHECK(a.points[i].distance == b.points[i].distance);
    }
    CHECK(a.slope == doctest::Approx(0.5).epsilon(0.02));
}
