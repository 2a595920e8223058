#include "infconv/deficits.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "infconv/hopflax.hpp"
#include "infconv/parallel.hpp"
#include "infconv/quadrature.hpp"
#include "infconv/specfun.hpp"

namespace infconv {

namespace sf = specfun;

void HCParams::validate() const {
    if (!(p > 1.0)) throw std::invalid_argument("HCParams: p must exceed 1");
    if (!(t > 0.0)) throw std::invalid_argument("HCParams: t must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("HCParams: alpha must be positive");
    if (!(beta > alpha)) throw std::invalid_argument("HCParams: beta must exceed alpha");
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finalize(DeficitReport& r) {
    if (std::isnan(r.deficit)) throw std::runtime_error(r.kind + " deficit: NaN");
    if (r.deficit < 0) {
        if (r.deficit < -kDeficitClamp)
            throw NegativeDeficitError(r.kind + " deficit " + num(r.deficit) + " is below -1e-9");
        r.warnings.push_back("clamped negative deficit " + num(r.deficit) + " to 0");
        r.norms["raw_deficit"] = r.deficit;
        r.deficit = 0.0;
    }
}

void put_hc(DeficitReport& r, int n, const HCParams& hc) {
    r.params["n"] = n;
    r.params["p"] = hc.p;
    r.params["t"] = hc.t;
    r.params["alpha"] = hc.alpha;
    r.params["beta"] = hc.beta;
    r.params["lambda"] = hc.lambda();
    r.params["tau"] = hc.tau();
}

template <class F>
DeficitReport hc_assemble(const F& g, const F& q, int n, const HCParams& hc) {
    DeficitReport r;
    r.kind = "hc";
    put_hc(r, n, hc);
    const double logC = log_hc_optimal_constant(n, hc);
    const double la = log_integral_exp(g, hc.alpha, Measure::lebesgue());
    const double lb = log_integral_exp(q, hc.beta, Measure::lebesgue());
    r.constant_used = std::exp(logC);
    r.norms["log_C"] = logC;
    r.norms["log_int_exp_alpha_g"] = la;
    r.norms["log_int_exp_beta_Qtg"] = lb;
    r.deficit = std::expm1(hc.alpha * logC + la - hc.alpha / hc.beta * lb);
    finalize(r);
    return r;
}

template <class F>
DeficitReport lsi_assemble(const F& logf, int n, double p) {
    DeficitReport r;
    r.kind = "lsi";
    r.params["n"] = n;
    r.params["p"] = p;
    const Measure leb = Measure::lebesgue();
    const double L = lsi_optimal_constant(n, p);
    const double lm = log_integral_exp(logf, p, leb);
    const double lg = log_grad_norm_p(logf, p, leb);
    const double er = entropy_ratio(affine_exponent(logf, p), leb);
    r.constant_used = L;
    r.norms["log_normp_pow_p"] = lm;
    r.norms["log_grad_norm_p"] = lg;
    r.norms["entropy_ratio"] = er;
    r.deficit = n / p * (std::log(L) + lg - lm) - er;
    finalize(r);
    return r;
}

template <class F>
DeficitReport ghc_assemble(const F& g, const F& q, int n, double alpha, double t) {
    DeficitReport r;
    r.kind = "ghc";
    r.params["n"] = n;
    r.params["alpha"] = alpha;
    r.params["t"] = t;
    r.constant_used = 1.0;
    const Measure gm = Measure::gaussian();
    const double la = log_integral_exp(g, alpha, gm);
    const double lb = log_integral_exp(q, alpha + t, gm);
    r.norms["log_int_exp_alpha_g_mu"] = la;
    r.norms["log_int_exp_alpha_t_Qtg_mu"] = lb;
    r.deficit = std::expm1(la - alpha / (alpha + t) * lb);
    finalize(r);
    return r;
}

template <class F>
DeficitReport glsi_assemble(const F& logf, int n) {
    DeficitReport r;
    r.kind = "glsi";
    r.params["n"] = n;
    r.constant_used = 2.0;
    const Measure gm = Measure::gaussian();
    const double lm = log_integral_exp(logf, 2.0, gm);
    const double lg = log_grad_norm_p(logf, 2.0, gm);
    const double er = entropy_ratio(affine_exponent(logf, 2.0), gm);
    r.norms["log_norm2_mu_sq"] = lm;
    r.norms["log_grad_norm2_mu"] = lg;
    r.norms["entropy_ratio_mu"] = er;
    r.deficit = 2.0 * std::exp(lg - lm) - er;
    finalize(r);
    return r;
}

}  // namespace

std::string DeficitReport::to_record() const {
    std::string s = "kind = " + kind + "\n";
    s += "deficit = " + num(deficit) + "\n";
    s += "constant_used = " + num(constant_used) + "\n";
    for (const auto& [k, v] : params) s += "param." + k + " = " + num(v) + "\n";
    for (const auto& [k, v] : norms) s += "norm." + k + " = " + num(v) + "\n";
    for (std::size_t i = 0; i < warnings.size(); ++i) s += "warning." + std::to_string(i) + " = " + warnings[i] + "\n";
    return s;
}

double log_hc_optimal_constant(int n, const HCParams& hc) {
    const double a = hc.alpha, b = hc.beta, p = hc.p, pc = hc.p_conj(), t = hc.t;
    if (!(p > 1) || !(t > 0) || !(a > 0) || !(b >= a)) throw std::invalid_argument("hc_optimal_constant: bad parameters");
    if (a == b) return 0.0;
    const double ab = a * b;
    const double lg = n / pc * std::log(pc) + sf::lgamma(n / pc + 1) + sf::log_unit_ball_volume(n);
    return n / p * ((b - a) / ab) * std::log((b - a) / t) + n / ab * (a / p + b / pc) * std::log(a) -
           n / ab * (b / p + a / pc) * std::log(b) + (a - b) / ab * lg;
}

double hc_optimal_constant(int n, const HCParams& hc) { return std::exp(log_hc_optimal_constant(n, hc)); }

double lsi_optimal_constant(double n, double p) {
    if (!(n >= 1) || !(p > 1)) throw std::invalid_argument("lsi_optimal_constant: need n >= 1, p > 1");
    const double pc = p / (p - 1);
    return p / n * std::pow((p - 1) / std::numbers::e, p - 1) *
           std::exp(-p / n * (sf::lgamma(n / pc + 1) + sf::log_unit_ball_volume(n)));
}

DeficitReport hc_deficit(const RadialFunction& g, const HCParams& hc) {
    hc.validate();
    return hc_assemble(g, hopf_lax(g, HopfLaxParams::make(hc.p, hc.t)), g.n, hc);
}

DeficitReport hc_deficit(const CartesianFunction& g, const HCParams& hc) {
    hc.validate();
    return hc_assemble(g, hopf_lax(g, HopfLaxParams::make(hc.p, hc.t)), g.dim, hc);
}

DeficitReport hc_deficit(const RadialProfile& g, const HCParams& hc) {
    hc.validate();
    const RadialProfile q = radial_inf_convolve(g, HopfLaxParams::make(hc.p, hc.t));
    return hc_assemble(RadialFunction::from_profile(g), RadialFunction::from_profile(q), g.dim(), hc);
}

DeficitReport lsi_deficit(const RadialFunction& logf, double p) { return lsi_assemble(logf, logf.n, p); }
DeficitReport lsi_deficit(const CartesianFunction& logf, double p) { return lsi_assemble(logf, logf.dim, p); }

double y_value_gradient_form(const RadialFunction& g, double p) {
    const RadialFunction logf = affine_exponent(g, 1.0 / p);
    const Measure leb = Measure::lebesgue();
    return std::pow(p, p) / g.n * std::exp(log_grad_norm_p(logf, p, leb) - log_integral_exp(g, 1.0, leb));
}

double y_value(const RadialFunction& g, double p) {
    // direct quadrature of e^g |g'|^p, shifted by g(0)
    const double g0 = g.value(0.0);
    const int n = g.n;
    double R = std::max(g.scale, 1e-3);
    for (int it = 0; it < 200; ++it) {
        if (std::isfinite(g.extent) && R >= g.extent) {
            R = g.extent;
            break;
        }
        if (g.value(R) - g0 + (n - 1) * std::log(R) + std::log(R) < -60 &&
            g.value(2 * R) - g0 + n * std::log(2 * R) < -60)
            break;
        R *= 1.5;
    }
    auto h = [&](double r) {
        const double d = std::abs(g.derivative(r));
        return d > 0 ? std::exp(g.value(r) - g0) * std::pow(d, p) : 0.0;
    };
    std::vector<double> br;
    if (g.nodes)
        for (double r : *g.nodes)
            if (r < R) br.push_back(r);
    const double num_int = radial_integral(h, n, Measure::lebesgue(), R, br, 1e-15);
    const double lden = log_integral_exp(g, 1.0, Measure::lebesgue()) - g0;
    return num_int / std::exp(lden) / n;
}

double y_value(const CartesianFunction& g, double p) {
    const CartesianFunction logf = affine_exponent(g, 1.0 / p);
    const Measure leb = Measure::lebesgue();
    return std::pow(p, p) / g.dim * std::exp(log_grad_norm_p(logf, p, leb) - log_integral_exp(g, 1.0, leb));
}

DeficitReport ghc_deficit(const RadialFunction& g, double alpha, double t) {
    if (!(alpha > 0) || !(t > 0)) throw std::invalid_argument("ghc_deficit: alpha and t must be positive");
    return ghc_assemble(g, hopf_lax(g, HopfLaxParams::make(2.0, t)), g.n, alpha, t);
}

DeficitReport ghc_deficit(const CartesianFunction& g, double alpha, double t) {
    if (!(alpha > 0) || !(t > 0)) throw std::invalid_argument("ghc_deficit: alpha and t must be positive");
    return ghc_assemble(g, hopf_lax(g, HopfLaxParams::make(2.0, t)), g.dim, alpha, t);
}

DeficitReport glsi_deficit(const RadialFunction& logf) { return glsi_assemble(logf, logf.n); }
DeficitReport glsi_deficit(const CartesianFunction& logf) { return glsi_assemble(logf, logf.dim); }

double extrapolate_first_order(const std::vector<double>& ts, const std::vector<double>& v, double* err) {
    const std::size_t K = ts.size();
    if (K == 0 || v.size() != K) throw std::invalid_argument("extrapolate: empty or mismatched ladder");
    if (K == 1) {
        if (err) *err = std::nan("");
        return v[0];
    }
    const double t1 = ts[K - 2], t2 = ts[K - 1];
    const double lin = (t1 * v[K - 1] - t2 * v[K - 2]) / (t1 - t2);
    if (err) {
        if (K >= 3) {
            // quadratic through the last three points, evaluated at 0
            const double a = ts[K - 3], b = t1, c = t2;
            const double quad = v[K - 3] * (b * c) / ((a - b) * (a - c)) + v[K - 2] * (a * c) / ((b - a) * (b - c)) +
                                v[K - 1] * (a * b) / ((c - a) * (c - b));
            *err = std::abs(quad - lin);
        } else {
            *err = std::abs(lin - v[K - 1]);
        }
    }
    return lin;
}

namespace {

void validate_t_ladder(const std::vector<double>& ts) {
    if (ts.size() < 2) throw std::invalid_argument("limit check: ladder needs at least 2 points");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0)) throw std::invalid_argument("limit check: ladder must be positive");
        if (i && !(ts[i] < ts[i - 1])) throw std::invalid_argument("limit check: ladder must decrease");
    }
}

}  // namespace

LimitResult hc_lsi_limit(const RadialFunction& g, double p, const std::vector<double>& ts) {
    validate_t_ladder(ts);
    LimitResult out;
    out.ts = ts;
    out.y = y_value(g, p);
    out.target = out.y * lsi_deficit(affine_exponent(g, 1.0 / p), p).deficit;
    const double t0 = finiteness_horizon(g.tail, HopfLaxParams::make(p, 1.0));
    if (ts.front() > 0.9 * t0) throw InfimumError("limit check: ladder enters t >= 0.9 t0");
    out.ratios.resize(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
        const HCParams hc{p, ts[k], 1.0, 1.0 + out.y * ts[k]};
        out.ratios[k] = hc_deficit(g, hc).deficit / ts[k];
    });
    out.limit = extrapolate_first_order(ts, out.ratios, &out.extrapolation_error);
    return out;
}

namespace {

template <class F>
LimitResult gauss_limit(const F& g, const std::vector<double>& ts) {
    validate_t_ladder(ts);
    LimitResult out;
    out.ts = ts;
    out.y = 1.0;
    out.target = glsi_deficit(affine_exponent(g, 0.5)).deficit;
    out.ratios.resize(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) { out.ratios[k] = ghc_deficit(g, 1.0, ts[k]).deficit / ts[k]; });
    out.limit = extrapolate_first_order(ts, out.ratios, &out.extrapolation_error);
    return out;
}

}  // namespace

LimitResult ghc_glsi_limit(const RadialFunction& g, const std::vector<double>& ts) { return gauss_limit(g, ts); }
LimitResult ghc_glsi_limit(const CartesianFunction& g, const std::vector<double>& ts) { return gauss_limit(g, ts); }

}  // namespace infconv
