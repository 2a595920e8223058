#include "infconv/pl.hpp"

#include <cmath>
#include <random>

#include "infconv/hopflax.hpp"
#include "infconv/parallel.hpp"
#include "infconv/specfun.hpp"

namespace infconv {

namespace {

RadialFunction radial_power(int n, double c, double q) {
    RadialFunction f;
    f.n = n;
    f.value = [c, q](double r) { return -c * std::pow(r, q); };
    f.slope = [c, q](double r) { return r == 0.0 ? 0.0 : -c * q * std::pow(r, q - 1); };
    f.tail = TailBound{0.0, c, q};
    f.concave = true;
    f.scale = std::pow(1.0 / c, 1.0 / q);
    return f;
}

RadialFunction radial_zero(int n) {
    RadialFunction f;
    f.n = n;
    f.value = [](double) { return 0.0; };
    f.slope = [](double) { return 0.0; };
    f.concave = true;
    return f;
}

CartesianFunction cartesian_zero(int d) {
    CartesianFunction f;
    f.dim = d;
    f.value = [](Point) { return 0.0; };
    f.gradient = [](Point) { return Point{0.0, 0.0}; };
    f.concave = true;
    return f;
}

template <class F>
F power_like(const F&, int n, double c, double q);
template <>
RadialFunction power_like(const RadialFunction&, int n, double c, double q) {
    return radial_power(n, c, q);
}
template <>
CartesianFunction power_like(const CartesianFunction&, int n, double c, double q) {
    return CartesianFunction::from_radial(radial_power(n, c, q));
}

int dim_of(const RadialFunction& g) { return g.n; }
int dim_of(const CartesianFunction& g) { return g.dim; }

template <class F>
PLTriple<F> hc_triple(const F& g, const HCParams& hc, int complementary) {
    hc.validate();
    const int n = dim_of(g);
    const double pc = hc.p_conj();
    PLTriple<F> T;
    T.n = n;
    T.theta0 = hc.beta * std::pow((hc.beta - hc.alpha) / (hc.alpha * hc.t), pc - 1);
    T.u = affine_exponent(hopf_lax(g, HopfLaxParams::make(hc.p, hc.t)), hc.beta);
    T.v = power_like(g, n, T.theta0 / pc, pc);
    T.w = affine_exponent(g, hc.alpha, 0.0, hc.beta / hc.alpha);
    T.lambda = hc.lambda();
    T.complementary = complementary > 0 || (complementary == 0 && hc.alpha > 0.5 * hc.beta);
    if (T.complementary) {
        std::swap(T.u, T.v);
        T.lambda = 1.0 - T.lambda;
    }
    const Measure leb = Measure::lebesgue();
    T.a = std::exp(log_integral_exp(T.u, 1.0, leb) - log_integral_exp(T.v, 1.0, leb));
    return T;
}

template <class F>
PLTriple<F> gaussian_triple(const F& g, double alpha, double t, F zero) {
    if (!(alpha > 0) || !(t > 0)) throw std::invalid_argument("gaussian triple: alpha and t must be positive");
    PLTriple<F> T;
    T.n = dim_of(g);
    T.measure = Measure::gaussian();
    T.u = affine_exponent(hopf_lax(g, HopfLaxParams::make(2.0, t)), alpha + t);
    T.v = std::move(zero);
    T.w = affine_exponent(g, alpha);
    T.lambda = alpha / (alpha + t);
    T.a = std::exp(log_integral_exp(T.u, 1.0, T.measure));
    return T;
}

template <class F>
double epsilon_impl(const PLTriple<F>& T) {
    const double lw = log_integral_exp(T.w, 1.0, T.measure);
    const double lu = log_integral_exp(T.u, 1.0, T.measure);
    const double lv = log_integral_exp(T.v, 1.0, T.measure);
    return std::expm1(lw - T.lambda * lu - (1 - T.lambda) * lv);
}

double norm(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// radius beyond which e^{L(r)} r^{n-1} is 40 below its running peak
double mass_radius(const std::function<double(double)>& L, int n, double start) {
    double R = std::max(start, 1e-3), peak = -kInf;
    for (int it = 0; it < 200; ++it) {
        for (int j = 1; j <= 32; ++j) {
            const double r = R * j / 32.0;
            const double v = L(r) + (n - 1) * std::log(r);
            if (std::isfinite(v)) peak = std::max(peak, v);
        }
        const double vr = L(R) + (n - 1) * std::log(R);
        if (std::isfinite(peak) && !(vr > peak - 40)) return R;
        R *= 1.5;
    }
    return R;
}

template <class EvalU, class EvalV, class EvalW>
HypothesisCheck sample_pairs(int n, double lambda, double Su, double Sv, Point cu, Point cv, std::size_t budget,
                             std::uint64_t seed, EvalU lu, EvalV lv, EvalW lw) {
    // pairs are drawn serially (deterministic), evaluated in parallel
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::vector<double>> xs, ys;
    auto ball = [&](double S, Point c) {
        std::vector<double> z(n);
        for (double& v : z) v = N01(rng);
        const double r = S * std::pow(U(rng), 1.0 / n) / std::max(norm(z), 1e-300);
        for (int i = 0; i < n; ++i) z[i] *= r;
        for (int i = 0; i < std::min(n, 2); ++i) z[i] += c[i];
        return z;
    };
    const std::size_t slices = std::min<std::size_t>(budget / 10, 1000);
    for (std::size_t k = 0; k + 2 * slices < budget; ++k) {
        xs.push_back(ball(Su, cu));
        ys.push_back(ball(Sv, cv));
    }
    // diagonal and first-axis slices
    for (std::size_t k = 0; k < slices; ++k) {
        auto x = ball(std::max(Su, Sv), cu);
        xs.push_back(x);
        ys.push_back(x);
        std::vector<double> a(n, 0.0), b(n, 0.0);
        a[0] = cu[0] + Su * (2 * U(rng) - 1);
        b[0] = cv[0] + Sv * (2 * U(rng) - 1);
        xs.push_back(a);
        ys.push_back(b);
    }
    std::vector<double> viol(xs.size());
    parallel_for(xs.size(), [&](std::size_t k) {
        std::vector<double> z(n);
        for (int i = 0; i < n; ++i) z[i] = lambda * xs[k][i] + (1 - lambda) * ys[k][i];
        const double lhs = lambda * lu(xs[k]) + (1 - lambda) * lv(ys[k]);
        viol[k] = std::isfinite(lhs) ? lhs - lw(z) : -kInf;
    });
    HypothesisCheck out;
    out.pairs = xs.size();
    out.worst = -kInf;
    for (double v : viol) out.worst = std::max(out.worst, v);
    return out;
}

}  // namespace

RadialTriple build_hc_triple(const RadialFunction& g, const HCParams& hc, int complementary) {
    return hc_triple(g, hc, complementary);
}
CartesianTriple build_hc_triple(const CartesianFunction& g, const HCParams& hc, int complementary) {
    return hc_triple(g, hc, complementary);
}
RadialTriple build_gaussian_triple(const RadialFunction& g, double alpha, double t) {
    return gaussian_triple(g, alpha, t, radial_zero(g.n));
}
CartesianTriple build_gaussian_triple(const CartesianFunction& g, double alpha, double t) {
    return gaussian_triple(g, alpha, t, cartesian_zero(g.dim));
}

RadialTriple equal_triple(const RadialFunction& h, double lambda) {
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("equal_triple: lambda must lie in (0,1)");
    RadialTriple T;
    T.n = h.n;
    T.u = T.v = T.w = h;
    T.lambda = lambda;
    T.a = 1.0;
    return T;
}

double log_u(const RadialTriple& T, double r) { return T.u(r) + T.measure.log_weight(r * r, T.n); }
double log_v(const RadialTriple& T, double r) { return T.v(r) + T.measure.log_weight(r * r, T.n); }
double log_w(const RadialTriple& T, double r) { return T.w(r) + T.measure.log_weight(r * r, T.n); }

HypothesisCheck check_pl_hypothesis(const RadialTriple& T, std::size_t budget, std::uint64_t seed) {
    const int n = T.n;
    const double Su = mass_radius([&](double r) { return log_u(T, r); }, n, T.u.scale);
    const double Sv = mass_radius([&](double r) { return log_v(T, r); }, n, T.v.scale);
    return sample_pairs(
        n, T.lambda, Su, Sv, {0, 0}, {0, 0}, budget, seed, [&](const std::vector<double>& x) { return log_u(T, norm(x)); },
        [&](const std::vector<double>& y) { return log_v(T, norm(y)); },
        [&](const std::vector<double>& z) { return log_w(T, norm(z)); });
}

HypothesisCheck check_pl_hypothesis(const CartesianTriple& T, std::size_t budget, std::uint64_t seed) {
    const int d = T.n;
    auto ld = [&](const CartesianFunction& f, const std::vector<double>& x) {
        const Point p{x[0], d == 2 ? x[1] : 0.0};
        return f(p) + T.measure.log_weight(p[0] * p[0] + p[1] * p[1], d);
    };
    auto radius = [&](const CartesianFunction& f) {
        // scan outward from the center along the first axis and its reverse
        const Point c = f.center;
        auto L = [&](double r) {
            std::vector<double> a{c[0] + r, c[1]}, b{c[0] - r, c[1]};
            return std::max(ld(f, a), ld(f, b));
        };
        return mass_radius(L, 1, f.scale);
    };
    const double Su = radius(T.u), Sv = radius(T.v);
    return sample_pairs(
        d, T.lambda, Su, Sv, T.u.center, T.v.center, budget, seed,
        [&](const std::vector<double>& x) { return ld(T.u, x); }, [&](const std::vector<double>& y) { return ld(T.v, y); },
        [&](const std::vector<double>& z) { return ld(T.w, z); });
}

double pl_epsilon(const RadialTriple& T) { return epsilon_impl(T); }
double pl_epsilon(const CartesianTriple& T) { return epsilon_impl(T); }

std::pair<double, double> pl_conclusion_distances(const RadialTriple& T) {
    const double la = std::log(T.a);
    const double scale = std::max({T.u.scale, T.v.scale, T.w.scale});
    const double d1 = radial_l1_distance([&](double r) { return T.u(r); }, [&](double r) { return la + T.v(r); }, T.n,
                                         T.measure, scale);
    const double d2 = radial_l1_distance([&](double r) { return T.w(r) - T.lambda * la; },
                                         [&](double r) { return T.v(r); }, T.n, T.measure, scale);
    return {d1, T.a * d2};
}

std::pair<double, double> pl_conclusion_distances(const CartesianTriple& T, Point x0, Point y0) {
    const int d = T.n;
    const double la = std::log(T.a);
    const Measure& m = T.measure;
    // translations act on Lebesgue densities; fold the weight in and integrate in dx
    auto dens = [&](const CartesianFunction& f, Point x) {
        return f(x) + m.log_weight(x[0] * x[0] + (d == 2 ? x[1] * x[1] : 0.0), d);
    };
    auto geometry = [&](const CartesianFunction& f, const CartesianFunction& h, Point shift) {
        CartesianFunction gm;
        gm.dim = d;
        gm.center = {0.5 * (f.center[0] + h.center[0] + shift[0]), 0.5 * (f.center[1] + h.center[1] + shift[1])};
        gm.scale = std::max(f.scale, h.scale) + std::hypot(shift[0], shift[1]);
        if (f.grid) gm.grid = f.grid;
        // a loose common bound so the box search has a decay model
        double c1 = 0, c2 = 0.5, q = 2;
        if (f.tail && h.tail && !m.is_gaussian()) {
            q = std::min(f.tail->q, h.tail->q);
            c2 = std::min(f.tail->c2, h.tail->c2);
            c1 = std::max(f.tail->c1, h.tail->c1);
        }
        gm.tail = TailBound{c1, c2, q};
        return gm;
    };
    const Point xs{x0[0], d == 2 ? x0[1] : 0.0}, ys{y0[0], d == 2 ? y0[1] : 0.0};
    const double d1 = cartesian_l1_distance(
        [&](Point x) { return dens(T.u, x); }, [&](Point x) { return la + dens(T.v, {x[0] - xs[0], x[1] - xs[1]}); },
        geometry(T.u, T.v, xs), Measure::lebesgue());
    const double d2 = cartesian_l1_distance(
        [&](Point x) { return dens(T.w, x) - T.lambda * la; },
        [&](Point x) { return dens(T.v, {x[0] - ys[0], x[1] - ys[1]}); }, geometry(T.w, T.v, ys),
        Measure::lebesgue());
    return {d1, T.a * d2};
}

}  // namespace infconv
