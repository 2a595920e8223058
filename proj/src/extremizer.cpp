#include "infconv/extremizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "infconv/hopflax.hpp"
#include "infconv/parallel.hpp"
#include "infconv/quadrature.hpp"
#include "infconv/specfun.hpp"

namespace infconv {

namespace sf = specfun;

std::string to_string(ExtremizerKind k) {
    switch (k) {
        case ExtremizerKind::HC: return "hc";
        case ExtremizerKind::LSI: return "lsi";
        case ExtremizerKind::GaussianHC: return "ghc";
    }
    return "?";
}

ExtremizerKind extremizer_kind_from_string(std::string_view s) {
    if (s == "hc") return ExtremizerKind::HC;
    if (s == "lsi") return ExtremizerKind::LSI;
    if (s == "ghc") return ExtremizerKind::GaussianHC;
    throw std::invalid_argument("unknown extremizer kind: " + std::string(s));
}

std::string ExtremizerParams::to_record() const {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string s = "extremizer.kind = " + to_string(kind) + "\n";
    s += "extremizer.n = " + std::to_string(n) + "\n";
    switch (kind) {
        case ExtremizerKind::HC:
            s += "extremizer.p = " + num(p) + "\nextremizer.theta = " + num(theta) + "\nextremizer.a = " + num(a) + "\n";
            break;
        case ExtremizerKind::LSI:
            s += "extremizer.p = " + num(p) + "\nextremizer.c1 = " + num(c1) + "\nextremizer.c2 = " + num(c2) + "\n";
            break;
        case ExtremizerKind::GaussianHC:
            s += "extremizer.a = " + num(a) + "\nextremizer.k = " + num(k()) + "\n";
            break;
    }
    s += "extremizer.x0 = " + num(x0[0]) + ";" + num(x0[1]) + "\n";
    return s;
}

namespace {

template <class F>
ExtremizerParams hc_params_impl(const F& g, int n, const HCParams& hc) {
    hc.validate();
    ExtremizerParams e;
    e.kind = ExtremizerKind::HC;
    e.n = n;
    e.p = hc.p;
    e.alpha = hc.alpha;
    e.beta = hc.beta;
    e.t = hc.t;
    const double pc = hc.p_conj();
    e.theta = hc.alpha * std::pow((hc.beta - hc.alpha) / (hc.beta * hc.t), pc - 1);
    const double lq = log_integral_exp(hopf_lax(g, HopfLaxParams::make(hc.p, hc.t)), hc.beta, Measure::lebesgue());
    const double M = e.theta * std::pow(hc.beta / hc.alpha, pc) / pc;
    e.log_a = lq - sf::log_power_exponential_integral(n, pc, M);
    e.a = std::exp(e.log_a);
    return e;
}

template <class F>
ExtremizerParams lsi_params_impl(const F& logf, int n, double p) {
    ExtremizerParams e;
    e.kind = ExtremizerKind::LSI;
    e.n = n;
    e.p = p;
    const double pc = p / (p - 1);
    const double lm = log_integral_exp(logf, p, Measure::lebesgue());
    const double lg = log_grad_norm_p(logf, p, Measure::lebesgue());
    if (!std::isfinite(lg)) throw std::domain_error("lsi_params: zero gradient, C1 is infinite");
    const double lc1 = std::log(pc) + (pc - 1) * std::log(static_cast<double>(n) / p) + pc / p * lm + (1 - pc) * lg;
    e.c1 = std::exp(lc1);
    e.c2 = std::exp(-(n / pc * (lc1 - std::log(p)) + sf::lgamma(n / pc + 1) + sf::log_unit_ball_volume(n)));
    e.log_a = lm;  // log ||f||_p^p
    e.a = std::exp(lm);
    return e;
}

template <class F>
ExtremizerParams ghc_params_impl(const F& g, int n, double alpha, double t) {
    if (!(alpha > 0) || !(t > 0)) throw std::invalid_argument("ghc_params: alpha and t must be positive");
    ExtremizerParams e;
    e.kind = ExtremizerKind::GaussianHC;
    e.n = n;
    e.p = 2.0;
    e.alpha = alpha;
    e.t = t;
    e.log_a = log_integral_exp(hopf_lax(g, HopfLaxParams::make(2.0, t)), alpha + t, Measure::gaussian());
    e.a = std::exp(e.log_a);
    return e;
}

Measure measure_of(const ExtremizerParams& e) {
    return e.kind == ExtremizerKind::GaussianHC ? Measure::gaussian() : Measure::lebesgue();
}

// exponent (w.r.t. the kind's measure) of the normalized input, given the raw input value v
double input_exponent(const ExtremizerParams& e, double v) {
    switch (e.kind) {
        case ExtremizerKind::HC: return e.alpha * v - e.alpha / e.beta * e.log_a;
        case ExtremizerKind::LSI: return e.p * v - e.log_a;
        case ExtremizerKind::GaussianHC: return e.alpha * v - e.alpha / (e.alpha + e.t) * e.log_a;
    }
    return 0.0;
}

}  // namespace

ExtremizerParams hc_params(const RadialFunction& g, const HCParams& hc) { return hc_params_impl(g, g.n, hc); }
ExtremizerParams hc_params(const CartesianFunction& g, const HCParams& hc) { return hc_params_impl(g, g.dim, hc); }
ExtremizerParams lsi_params(const RadialFunction& logf, double p) { return lsi_params_impl(logf, logf.n, p); }
ExtremizerParams lsi_params(const CartesianFunction& logf, double p) { return lsi_params_impl(logf, logf.dim, p); }
ExtremizerParams ghc_params(const RadialFunction& g, double alpha, double t) {
    return ghc_params_impl(g, g.n, alpha, t);
}
ExtremizerParams ghc_params(const CartesianFunction& g, double alpha, double t) {
    return ghc_params_impl(g, g.dim, alpha, t);
}

double log_model(const ExtremizerParams& e, Point x) {
    const double dx = x[0] - e.x0[0], dy = x[1] - e.x0[1];
    const double r = std::sqrt(dx * dx + dy * dy);
    const double pc = e.p / (e.p - 1);
    switch (e.kind) {
        case ExtremizerKind::HC: return -e.theta * std::pow(r, pc) / pc;
        case ExtremizerKind::LSI: return std::log(e.c2) - e.p * std::pow(r, pc) / e.c1;
        case ExtremizerKind::GaussianHC:
            return -0.5 * (e.x0[0] * e.x0[0] + e.x0[1] * e.x0[1]) + x[0] * e.x0[0] + x[1] * e.x0[1];
    }
    return 0.0;
}

double l1_model_distance(const RadialFunction& input, const ExtremizerParams& e0) {
    ExtremizerParams e = e0;
    e.x0 = {0.0, 0.0};
    std::vector<double> br;
    if (input.nodes) br = *input.nodes;
    if (std::isfinite(input.extent)) br.push_back(input.extent);
    // the integrand is a difference of O(1) densities: cancellation noise sits near 1e-16
    return radial_l1_distance([&](double r) { return input_exponent(e, input.value(r)); },
                              [&](double r) { return log_model(e, {r, 0.0}); }, input.n, measure_of(e), input.scale,
                              std::move(br), 1e-13);
}

double l1_model_distance(const CartesianFunction& input, const ExtremizerParams& e0, Point x0) {
    ExtremizerParams e = e0;
    e.x0 = {x0[0], input.dim == 2 ? x0[1] : 0.0};
    CartesianFunction geom = input;
    if (input.tail) {
        TailBound tb = *input.tail;
        const double mult = e.kind == ExtremizerKind::LSI ? e.p : e.alpha;
        tb.c1 = input_exponent(e, tb.c1);
        tb.c2 *= mult;
        geom.tail = tb;
    }
    return cartesian_l1_distance([&](Point x) { return input_exponent(e, input.value(x)); },
                                 [&](Point x) { return log_model(e, x); }, geom, measure_of(e));
}

FitResult fit_translation(const RadialFunction& input, const ExtremizerParams& e) {
    FitResult r;
    r.distance = l1_model_distance(input, e);
    r.distance_at_zero = r.distance;
    r.candidates = 1;
    return r;
}

FitResult fit_translation(const CartesianFunction& input, const ExtremizerParams& e, const FitOptions& opt) {
    const int d = input.dim;
    const Measure m = measure_of(e);
    double h = opt.spacing;
    if (!(h > 0)) h = input.grid ? input.grid->spacing() : input.scale / 8.0;
    Point c = input.center;
    double W = opt.half_width;
    std::vector<Point> cand;
    auto density = [&](Point x) {
        const double r2 = x[0] * x[0] + (d == 2 ? x[1] * x[1] : 0.0);
        return input_exponent(e, input.value(x)) + m.log_weight(r2, d);
    };
    if (input.grid && !(W > 0)) {
        for (std::size_t k = 0; k < input.grid->size(); ++k) cand.push_back(input.grid->node_point(k));
        if (!(opt.spacing > 0)) h = input.grid->spacing();
    } else {
        if (!(W > 0)) W = 4.0 * input.scale;
        const int K = static_cast<int>(std::ceil(W / h));
        for (int j = (d == 2 ? -K : 0); j <= (d == 2 ? K : 0); ++j)
            for (int i = -K; i <= K; ++i) cand.push_back({c[0] + i * h, d == 2 ? c[1] + j * h : 0.0});
    }
    // for the tilt model the density peak sits where the tilt does
    std::vector<double> dens(cand.size());
    double peak = -kInf;
    for (std::size_t k = 0; k < cand.size(); ++k) {
        dens[k] = density(cand[k]);
        if (std::isfinite(dens[k])) peak = std::max(peak, dens[k]);
    }
    std::vector<Point> keep;
    for (std::size_t k = 0; k < cand.size(); ++k)
        if (dens[k] >= peak + std::log(1e-3)) keep.push_back(cand[k]);
    // screening: one rule for the input exponent, values cached, only the model moves
    CartesianFunction geomA = input;
    geomA.value = [&](Point x) { return input_exponent(e, input.value(x)); };
    geomA.gradient = nullptr;
    if (input.tail) {
        TailBound tb = *input.tail;
        tb.c1 = input_exponent(e, tb.c1);
        tb.c2 *= e.kind == ExtremizerKind::LSI ? e.p : e.alpha;
        geomA.tail = tb;
    }
    geomA.grid = nullptr;
    if (input.grid && !input.tail) geomA.grid = input.grid;  // keep the support box
    const LogRule rule = cartesian_rule(geomA, m);
    std::vector<double> A(rule.x.size());
    parallel_for(A.size(), [&](std::size_t i) {
        const Point x = rule.x[i];
        A[i] = geomA.value(x) + rule.logw[i];
    });
    auto screen = [&](Point x0) {
        ExtremizerParams em = e;
        em.x0 = {x0[0], d == 2 ? x0[1] : 0.0};
        double s = 0.0;
        for (std::size_t i = 0; i < A.size(); ++i) {
            s += std::abs(std::exp(A[i]) - std::exp(log_model(em, rule.x[i]) + rule.logw[i]));
        }
        return s;
    };
    std::vector<double> dist(keep.size());
    parallel_for(keep.size(), [&](std::size_t k) { dist[k] = screen(keep[k]); });

    auto norm = [](Point x) { return std::hypot(x[0], x[1]); };
    std::size_t best = 0;
    for (std::size_t k = 1; k < keep.size(); ++k) {
        const double tol = 1e-12 * std::max(dist[k], dist[best]);
        if (dist[k] < dist[best] - tol || (std::abs(dist[k] - dist[best]) <= tol && norm(keep[k]) < norm(keep[best])))
            best = k;
    }
    FitResult r;
    r.candidates = keep.size();
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const double cheb = std::max(std::abs(keep[k][0] - keep[best][0]), std::abs(keep[k][1] - keep[best][1]));
        if (cheb > 1.5 * h && dist[k] <= 1.01 * dist[best]) r.multimodal = true;
    }
    Point x = keep.empty() ? Point{0.0, 0.0} : keep[best];
    double f = keep.empty() ? kInf : dist[best];
    for (double step = h / 2; step >= h / std::ldexp(1.0, opt.refine_levels) * 0.999; step /= 2) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (int a = 0; a < d; ++a)
                for (double s : {-step, step}) {
                    Point y = x;
                    y[a] += s;
                    const double fy = screen(y);
                    if (fy < f) {
                        f = fy;
                        x = y;
                        moved = true;
                    }
                }
        }
    }
    f = keep.empty() ? kInf : l1_model_distance(input, e, x);
    r.distance_at_zero = l1_model_distance(input, e, {0.0, 0.0});
    if (r.distance_at_zero <= f) {
        x = {0.0, 0.0};
        f = r.distance_at_zero;
    }
    r.x0 = x;
    r.distance = f;
    return r;
}

}  // namespace infconv
