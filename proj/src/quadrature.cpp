#include "infconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace infconv {

const GaussRule& gauss_legendre(int m) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.x.resize(m);
    rule.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = m * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < m; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        dp = m * (z * p0 - p1) / (z * z - 1.0);
        rule.x[i] = -z;
        rule.x[m - 1 - i] = z;
        rule.w[i] = rule.w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return cache.emplace(m, std::move(rule)).first->second;
}

namespace {

struct PanelSum {
    double value;
    double magnitude;  // sum of |w f|, for the round-off floor
};

PanelSum panel(const std::function<double(double)>& f, double a, double b, const GaussRule& g) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double v = g.w[i] * f(c + h * g.x[i]);
        s += v;
        m += std::abs(v);
    }
    return {s * h, m * h};
}

// budget caps the number of panel splits (noisy integrands otherwise split without end)
double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol,
             const GaussRule& g, int depth, long& budget) {
    const double m = 0.5 * (a + b);
    const PanelSum left = panel(f, a, m, g), right = panel(f, m, b, g);
    const double diff = std::abs(left.value + right.value - whole);
    const double floor = 64 * std::numeric_limits<double>::epsilon() * (left.magnitude + right.magnitude);
    if (depth <= 0 || --budget <= 0 || diff <= tol || diff <= floor || !(b - a > 1e-15 * std::abs(m)))
        return left.value + right.value;
    return adapt(f, a, m, left.value, 0.5 * tol, g, depth - 1, budget) +
           adapt(f, m, b, right.value, 0.5 * tol, g, depth - 1, budget);
}

constexpr long kSplitBudget = 200000;

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int m, int max_depth) {
    if (a == b) return 0.0;
    const GaussRule& g = gauss_legendre(m);
    long budget = kSplitBudget;
    return adapt(f, a, b, panel(f, a, b, g).value, abs_tol, g, max_depth, budget);
}

double integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breaks,
                          double abs_tol, int m, int max_depth) {
    if (breaks.size() < 2) return 0.0;
    const double span = breaks.back() - breaks.front();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double share = span > 0 ? (breaks[i + 1] - breaks[i]) / span : 1.0;
        s += integrate_adaptive(f, breaks[i], breaks[i + 1], abs_tol * std::max(share, 1e-3), m, max_depth);
    }
    return s;
}

std::vector<double> graded_breaks(double R, double knee, int n_uniform, int n_geometric) {
    std::vector<double> b;
    knee = std::min(knee, R);
    b.push_back(0.0);
    for (int k = n_geometric; k >= 1; --k) b.push_back(knee * std::ldexp(1.0, -k));
    b.push_back(knee);
    if (R > knee) {
        const int nu = std::max(1, n_uniform);
        for (int i = 1; i <= nu; ++i) b.push_back(knee + (R - knee) * i / nu);
    }
    return b;
}

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol,
                       int max_iter) {
    if (a > b) std::swap(a, b);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    Minimum best{a, f(a)};
    const double fb = f(b);
    if (fb < best.f) best = {b, fb};
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::abs(c)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    if (fc < best.f) best = {c, fc};
    if (fd < best.f) best = {d, fd};
    return best;
}

double log_sum_exp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace infconv
