#include "infconv/funcrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infconv/quadrature.hpp"
#include "infconv/specfun.hpp"

namespace infconv {

double Measure::log_weight(double r2, int n) const {
    if (kind == MeasureKind::Lebesgue) return 0.0;
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * r2;
}

// ---- interpolation helpers ----------------------------------------------

namespace {

// Lagrange interpolation through xs[lo..lo+k) at x, value and derivative.
void lagrange(const double* xs, const double* ys, int k, double x, double& val, double& der) {
    val = 0.0;
    der = 0.0;
    for (int i = 0; i < k; ++i) {
        double li = 1.0, dli = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            const double denom = xs[i] - xs[j];
            double prod = 1.0 / denom;
            for (int m = 0; m < k; ++m) {
                if (m == i || m == j) continue;
                prod *= (x - xs[m]) / (xs[i] - xs[m]);
            }
            dli += prod;
            li *= (x - xs[j]) / denom;
        }
        val += ys[i] * li;
        der += ys[i] * dli;
    }
}

std::size_t locate(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
}

}  // namespace

// ---- RadialProfile ------------------------------------------------------

RadialProfile::RadialProfile(int n, std::vector<double> r, std::vector<double> logvals,
                             std::optional<TailBound> tail, Interpolation interp)
    : n_(n), r_(std::move(r)), g_(std::move(logvals)), tail_(tail), interp_(interp) {
    if (n_ < 1) throw std::invalid_argument("RadialProfile: dimension must be >= 1");
    if (r_.size() != g_.size()) throw std::invalid_argument("RadialProfile: size mismatch");
    if (r_.size() < 16) throw std::invalid_argument("RadialProfile: need at least 16 nodes");
    if (r_[0] != 0.0) throw std::invalid_argument("RadialProfile: grid must start at r = 0");
    for (std::size_t i = 1; i < r_.size(); ++i)
        if (!(r_[i] > r_[i - 1])) throw std::invalid_argument("RadialProfile: radii must increase strictly");
    for (double v : g_)
        if (!std::isfinite(v)) throw std::invalid_argument("RadialProfile: non-finite exponent value");
    if (tail_) {
        if (!(tail_->q > 1.0)) throw std::invalid_argument("RadialProfile: tail exponent must exceed 1");
        const double R = r_.back();
        const double bound = tail_->c1 - tail_->c2 * std::pow(R, tail_->q);
        if (g_.back() < bound - 1e-8 * (1.0 + std::abs(bound)))
            throw std::invalid_argument("RadialProfile: last sample violates the tail bound");
    }
    const std::size_t N = r_.size();
    dg_.resize(N);
    dg_[0] = (g_[1] - g_[0]) / r_[1];
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double h0 = r_[i] - r_[i - 1], h1 = r_[i + 1] - r_[i];
        dg_[i] = (-h1 / (h0 * (h0 + h1))) * g_[i - 1] + ((h1 - h0) / (h0 * h1)) * g_[i] +
                 (h0 / (h1 * (h0 + h1))) * g_[i + 1];
    }
    dg_[N - 1] = tail_ ? -tail_->c2 * tail_->q * std::pow(r_[N - 1], tail_->q - 1.0)
                       : (g_[N - 1] - g_[N - 2]) / (r_[N - 1] - r_[N - 2]);
}

double RadialProfile::operator()(double r) const {
    const double R = r_.back();
    if (r > R) {
        if (tail_) return g_.back() - tail_->c2 * (std::pow(r, tail_->q) - std::pow(R, tail_->q));
        if (r <= R * (1.0 + 1e-14)) return g_.back();
        return -kInf;
    }
    if (r <= 0.0) return g_[0];
    const std::size_t i = locate(r_, r);
    if (interp_ == Interpolation::Linear) {
        const double w = (r - r_[i]) / (r_[i + 1] - r_[i]);
        return g_[i] + w * (g_[i + 1] - g_[i]);
    }
    const int k = std::min<int>(6, static_cast<int>(r_.size()));
    long lo = static_cast<long>(i) - 2;
    lo = std::clamp(lo, 0L, static_cast<long>(r_.size()) - k);
    double v, d;
    lagrange(&r_[lo], &g_[lo], k, r, v, d);
    return v;
}

double RadialProfile::slope(double r) const {
    const double R = r_.back();
    if (r > R) {
        if (tail_) return -tail_->c2 * tail_->q * std::pow(r, tail_->q - 1.0);
        return 0.0;
    }
    if (r <= 0.0) return dg_[0];
    const std::size_t i = locate(r_, r);
    if (interp_ == Interpolation::Linear) {
        const double w = (r - r_[i]) / (r_[i + 1] - r_[i]);
        return dg_[i] + w * (dg_[i + 1] - dg_[i]);
    }
    const int k = std::min<int>(6, static_cast<int>(r_.size()));
    long lo = static_cast<long>(i) - 2;
    lo = std::clamp(lo, 0L, static_cast<long>(r_.size()) - k);
    double v, d;
    lagrange(&r_[lo], &g_[lo], k, r, v, d);
    return d;
}

std::vector<double> hybrid_radial_grid(std::size_t N, double R) {
    if (N < 16) throw std::invalid_argument("hybrid_radial_grid: need N >= 16");
    if (!(R > 0)) throw std::invalid_argument("hybrid_radial_grid: R must be positive");
    const std::size_t G = std::min<std::size_t>(30, N / 16);
    const std::size_t U = N - 1 - G;
    const double h = R / static_cast<double>(U);
    std::vector<double> r;
    r.reserve(N);
    r.push_back(0.0);
    for (std::size_t k = G; k >= 1; --k) r.push_back(h * std::ldexp(1.0, -static_cast<int>(k)));
    for (std::size_t i = 1; i <= U; ++i) r.push_back(h * static_cast<double>(i));
    r.back() = R;
    return r;
}

// ---- GridFunction -------------------------------------------------------

GridFunction::GridFunction(int dim, Point origin, double spacing, std::array<std::size_t, 2> shape,
                           std::vector<double> logvals, std::optional<TailBound> tail, Point tail_center,
                           Interpolation interp)
    : dim_(dim), origin_(origin), h_(spacing), shape_(shape), g_(std::move(logvals)), tail_(tail),
      center_(tail_center), interp_(interp) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("GridFunction: dim must be 1 or 2");
    if (!(h_ > 0)) throw std::invalid_argument("GridFunction: spacing must be positive");
    if (dim_ == 1) shape_[1] = 1;
    if (shape_[0] < 2 || (dim_ == 2 && shape_[1] < 2))
        throw std::invalid_argument("GridFunction: need at least two nodes per axis");
    if (g_.size() != shape_[0] * shape_[1]) throw std::invalid_argument("GridFunction: shape mismatch");
    for (double v : g_)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite exponent value");
    if (tail_ && !(tail_->q > 1.0)) throw std::invalid_argument("GridFunction: tail exponent must exceed 1");
}

Point GridFunction::node_point(std::size_t k) const {
    const std::size_t i = k % shape_[0], j = k / shape_[0];
    return {node(i, 0), dim_ == 2 ? node(j, 1) : 0.0};
}

Point GridFunction::hi() const {
    return {node(shape_[0] - 1, 0), dim_ == 2 ? node(shape_[1] - 1, 1) : origin_[1]};
}

bool GridFunction::inside(Point x) const {
    const Point h = hi();
    const double eps = 1e-12 * h_;
    for (int a = 0; a < dim_; ++a)
        if (x[a] < origin_[a] - eps || x[a] > h[a] + eps) return false;
    return true;
}

double GridFunction::interp_inside(Point x) const {
    auto cell = [&](double xa, int axis, double& frac) {
        const std::size_t n = shape_[axis];
        double s = (xa - origin_[axis]) / h_;
        s = std::clamp(s, 0.0, static_cast<double>(n - 1));
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), n - 2);
        frac = s - static_cast<double>(i);
        return i;
    };
    if (interp_ == Interpolation::Linear) {
        double fx;
        const std::size_t i = cell(x[0], 0, fx);
        if (dim_ == 1) return g_[i] + fx * (g_[i + 1] - g_[i]);
        double fy;
        const std::size_t j = cell(x[1], 1, fy);
        const double a = at(i, j), b = at(i + 1, j), c = at(i, j + 1), d = at(i + 1, j + 1);
        return (1 - fx) * (1 - fy) * a + fx * (1 - fy) * b + (1 - fx) * fy * c + fx * fy * d;
    }
    // tensor 6-point Lagrange in local coordinates
    auto stencil = [&](double xa, int axis, long& lo, int& k) {
        const long n = static_cast<long>(shape_[axis]);
        k = static_cast<int>(std::min<long>(6, n));
        double frac;
        const long i = static_cast<long>(cell(xa, axis, frac));
        lo = std::clamp(i - 2, 0L, n - k);
        return (xa - origin_[axis]) / h_ - static_cast<double>(lo);
    };
    long lx, ly = 0;
    int kx, ky = 1;
    const double sx = stencil(x[0], 0, lx, kx);
    double xs[6] = {0, 1, 2, 3, 4, 5};
    double v, d;
    if (dim_ == 1) {
        lagrange(xs, &g_[lx], kx, sx, v, d);
        return v;
    }
    const double sy = stencil(x[1], 1, ly, ky);
    double col[6];
    for (int b = 0; b < ky; ++b) {
        double row[6];
        for (int a = 0; a < kx; ++a) row[a] = at(lx + a, ly + b);
        lagrange(xs, row, kx, sx, col[b], d);
    }
    lagrange(xs, col, ky, sy, v, d);
    return v;
}

double GridFunction::operator()(Point x) const {
    if (inside(x)) return interp_inside(x);
    if (!tail_) return -kInf;
    const Point lo = origin_, h = hi();
    Point xb = x;
    for (int a = 0; a < dim_; ++a) xb[a] = std::clamp(x[a], lo[a], h[a]);
    auto dist = [&](Point y) {
        double s = 0;
        for (int a = 0; a < dim_; ++a) s += (y[a] - center_[a]) * (y[a] - center_[a]);
        return std::sqrt(s);
    };
    const double dx = dist(x), db = dist(xb);
    const double base = interp_inside(xb);
    if (dx <= db) return base;
    return base - tail_->c2 * (std::pow(dx, tail_->q) - std::pow(db, tail_->q));
}

// ---- RadialFunction / CartesianFunction ----------------------------------

double RadialFunction::derivative(double r) const {
    if (slope) return slope(r);
    const double h = 1e-6 * (scale + r);
    if (r < h) return (value(r + h) - value(r)) / h;
    return (value(r + h) - value(r - h)) / (2 * h);
}

RadialFunction RadialFunction::from_profile(const RadialProfile& prof) {
    auto sp = std::make_shared<const RadialProfile>(prof);
    RadialFunction f;
    f.n = prof.dim();
    f.value = [sp](double r) { return (*sp)(r); };
    f.slope = [sp](double r) { return sp->slope(r); };
    f.tail = prof.tail();
    f.extent = prof.extent();
    f.nodes = std::make_shared<const std::vector<double>>(prof.r());
    f.scale = std::max(prof.r().back() / 16.0, 1e-6);
    return f;
}

RadialFunction RadialFunction::plus_constant(double c) const {
    RadialFunction f = *this;
    auto v = value;
    f.value = [v, c](double r) { return v(r) + c; };
    if (f.tail) f.tail->c1 += c;
    return f;
}

Point CartesianFunction::grad(Point x) const {
    if (gradient) return gradient(x);
    Point g{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const double h = 1e-6 * (scale + std::abs(x[a]));
        Point xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        g[a] = (value(xp) - value(xm)) / (2 * h);
    }
    return g;
}

CartesianFunction CartesianFunction::from_grid(const GridFunction& gf) {
    auto sp = std::make_shared<const GridFunction>(gf);
    CartesianFunction f;
    f.dim = gf.dim();
    f.value = [sp](Point x) { return (*sp)(x); };
    f.tail = gf.tail();
    f.grid = sp;
    std::size_t best = 0;
    for (std::size_t k = 1; k < gf.size(); ++k)
        if (gf.logvals()[k] > gf.logvals()[best]) best = k;
    f.center = gf.node_point(best);
    f.scale = gf.spacing() * 8;
    return f;
}

CartesianFunction CartesianFunction::from_radial(const RadialFunction& g, Point c) {
    CartesianFunction f;
    const int d = g.n;
    if (d != 1 && d != 2) throw std::invalid_argument("CartesianFunction: radial source must have n <= 2");
    f.dim = d;
    auto v = g.value;
    f.value = [v, c, d](Point x) {
        const double dx = x[0] - c[0], dy = d == 2 ? x[1] - c[1] : 0.0;
        return v(std::sqrt(dx * dx + dy * dy));
    };
    if (g.slope) {
        auto s = g.slope;
        f.gradient = [s, c, d](Point x) {
            const double dx = x[0] - c[0], dy = d == 2 ? x[1] - c[1] : 0.0;
            const double r = std::sqrt(dx * dx + dy * dy);
            if (r == 0.0) return Point{0.0, 0.0};
            const double k = s(r) / r;
            return Point{k * dx, k * dy};
        };
    }
    f.tail = g.tail;
    f.center = c;
    f.concave = g.concave;
    f.scale = g.scale;
    f.radial = std::make_shared<const RadialFunction>(g);
    return f;
}

CartesianFunction CartesianFunction::translated(Point v) const {
    CartesianFunction f = *this;
    auto val = value;
    f.value = [val, v](Point x) { return val({x[0] - v[0], x[1] - v[1]}); };
    if (gradient) {
        auto gr = gradient;
        f.gradient = [gr, v](Point x) { return gr({x[0] - v[0], x[1] - v[1]}); };
    }
    f.center = {center[0] + v[0], center[1] + (dim == 2 ? v[1] : 0.0)};
    if (grid) {
        const GridFunction& g = *grid;
        Point o = g.origin();
        o[0] += v[0];
        if (dim == 2) o[1] += v[1];
        Point tc = g.tail_center();
        tc[0] += v[0];
        if (dim == 2) tc[1] += v[1];
        auto sp = std::make_shared<const GridFunction>(g.dim(), o, g.spacing(), g.shape(), g.logvals(), g.tail(),
                                                       tc, g.interpolation());
        f.grid = sp;
        f.value = [sp](Point x) { return (*sp)(x); };
    }
    return f;
}

CartesianFunction CartesianFunction::plus_constant(double c) const {
    CartesianFunction f = *this;
    auto v = value;
    f.value = [v, c](Point x) { return v(x) + c; };
    if (f.tail) f.tail->c1 += c;
    if (radial) f.radial = std::make_shared<const RadialFunction>(radial->plus_constant(c));
    if (grid) {
        std::vector<double> vals = grid->logvals();
        for (double& x : vals) x += c;
        auto sp = std::make_shared<const GridFunction>(grid->dim(), grid->origin(), grid->spacing(), grid->shape(),
                                                       std::move(vals), f.tail, grid->tail_center(),
                                                       grid->interpolation());
        f.grid = sp;
        f.value = [sp](Point x) { return (*sp)(x); };
    }
    return f;
}

RadialFunction affine_exponent(const RadialFunction& g, double mult, double add, double s) {
    if (!(mult > 0) || !(s > 0)) throw std::invalid_argument("affine_exponent: mult and arg_scale must be positive");
    RadialFunction f = g;
    auto v = g.value;
    f.value = [v, mult, add, s](double r) { return mult * v(s * r) + add; };
    if (g.slope) {
        auto sl = g.slope;
        f.slope = [sl, mult, s](double r) { return mult * s * sl(s * r); };
    }
    if (f.tail) {
        f.tail->c1 = mult * f.tail->c1 + add;
        f.tail->c2 *= mult * std::pow(s, f.tail->q);
    }
    f.extent = g.extent / s;
    f.scale = g.scale / s;
    if (g.nodes) {
        auto nodes = std::make_shared<std::vector<double>>(*g.nodes);
        for (double& r : *nodes) r /= s;
        f.nodes = nodes;
    }
    return f;
}

CartesianFunction affine_exponent(const CartesianFunction& g, double mult, double add, double s) {
    if (!(mult > 0) || !(s > 0)) throw std::invalid_argument("affine_exponent: mult and arg_scale must be positive");
    if (g.radial) {
        const Point c{g.center[0] / s, g.center[1] / s};
        return CartesianFunction::from_radial(affine_exponent(*g.radial, mult, add, s), c);
    }
    CartesianFunction f = g;
    auto v = g.value;
    f.value = [v, mult, add, s](Point x) { return mult * v({s * x[0], s * x[1]}) + add; };
    if (g.gradient) {
        auto gr = g.gradient;
        f.gradient = [gr, mult, s](Point x) {
            const Point d = gr({s * x[0], s * x[1]});
            return Point{mult * s * d[0], mult * s * d[1]};
        };
    }
    if (f.tail) {
        f.tail->c1 = mult * f.tail->c1 + add;
        f.tail->c2 *= mult * std::pow(s, f.tail->q);
    }
    f.center = {g.center[0] / s, g.center[1] / s};
    f.scale = g.scale / s;
    if (g.grid) {
        const GridFunction& gf = *g.grid;
        std::vector<double> vals = gf.logvals();
        for (double& x : vals) x = mult * x + add;
        auto sp = std::make_shared<const GridFunction>(gf.dim(), Point{gf.origin()[0] / s, gf.origin()[1] / s},
                                                       gf.spacing() / s, gf.shape(), std::move(vals), f.tail,
                                                       Point{gf.tail_center()[0] / s, gf.tail_center()[1] / s},
                                                       gf.interpolation());
        f.grid = sp;
        f.value = [sp](Point x) { return (*sp)(x); };
    }
    return f;
}

// ---- rules ----------------------------------------------------------------

double log_tail_mass_bound(int n, double L_R, double c2, double q, double R) {
    if (!(c2 > 0) || !(R > 0)) return kInf;
    const double s = n / q;
    const double x = c2 * std::pow(R, q);
    const double sm1 = std::max(s - 1.0, 0.0);
    if (!(x > sm1)) return kInf;
    // Gamma(s, x) <= x^{s-1} e^{-x} * x / (x - max(s-1, 0))
    const double log_gamma_upper = (s - 1.0) * std::log(x) - x + std::log(x / (x - sm1));
    return std::log(n * specfun::unit_ball_volume(n)) + L_R + x - std::log(q) - s * std::log(c2) + log_gamma_upper;
}

namespace {

constexpr double kDrop = 46.0;  // e^-46 ~ 1e-20

void append_panels(LogRule& rule, std::span<const double> breaks, int m_uniform, int m_geometric,
                   double knee, const std::function<double(double)>& logjac) {
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (!(b > a)) continue;
        const GaussRule& g = gauss_legendre(b <= knee * (1 + 1e-12) ? m_geometric : m_uniform);
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double r = c + h * g.x[i];
            rule.x.push_back({r, 0.0});
            rule.logw.push_back(std::log(g.w[i] * h) + logjac(r));
        }
    }
}

struct Decay {
    bool known = false;
    double c2 = 0, q = 2;
};

Decay effective_decay(const std::optional<TailBound>& tail, const Measure& m) {
    Decay d;
    if (!tail) {
        if (m.is_gaussian()) d = {true, 0.5, 2.0};
        return d;
    }
    const double c2 = tail->c2, q = tail->q;
    if (!m.is_gaussian()) {
        if (!(c2 > 0)) throw DivergenceError("tail does not decay: integral diverges");
        return {true, c2, q};
    }
    if (q > 2) {
        if (!(c2 > 0)) throw DivergenceError("tail grows faster than the Gaussian weight");
        return {true, c2, q};
    }
    if (q == 2) {
        if (!(c2 + 0.5 > 0)) throw DivergenceError("tail not dominated by the Gaussian weight");
        return {true, c2 + 0.5, 2.0};
    }
    if (c2 >= 0) return {true, 0.5, 2.0};
    return {false, 0, 2};
}

}  // namespace

LogRule radial_rule(const RadialFunction& D, const Measure& m) {
    const int n = D.n;
    const double log_area = std::log(n * specfun::unit_ball_volume(n));
    const Decay decay = effective_decay(D.tail, m);
    if (!D.tail && !std::isfinite(D.extent) && !m.is_gaussian())
        throw DivergenceError("radial integral: no tail descriptor and unbounded support");

    auto L = [&](double r) { return D.value(r) + m.log_weight(r * r, n); };
    auto mass = [&](double r) {
        const double v = L(r) + n * std::log(r) + log_area;
        return std::isnan(v) ? -kInf : v;
    };
    double peak = -kInf;
    double R = std::max(D.scale, 1e-3);
    if (std::isfinite(D.extent)) R = std::min(R, D.extent);
    bool done = false;
    for (int iter = 0; iter < 400 && !done; ++iter) {
        for (int j = 1; j <= 64; ++j) peak = std::max(peak, mass(R * j / 64.0));
        if (std::isfinite(D.extent) && R >= D.extent) {
            R = D.extent;
            break;
        }
        if (std::isfinite(peak) && mass(R) < peak - kDrop && mass(1.5 * R) < peak - kDrop &&
            mass(2.0 * R) < peak - kDrop)
            break;
        R *= 1.5;
        if (std::isfinite(D.extent) && R > D.extent) R = D.extent;
        if (R > 1e7) throw DivergenceError("radial integral: integrand does not decay");
    }
    if (!std::isfinite(peak)) throw DivergenceError("radial integral: integrand is zero or undefined");

    auto logjac = [&](double r) { return log_area + (n - 1) * std::log(r) + m.log_weight(r * r, n); };
    auto build = [&](double Rc) {
        LogRule rule;
        if (D.nodes && !D.nodes->empty()) {
            std::vector<double> br;
            for (double r : *D.nodes)
                if (r < Rc) br.push_back(r);
            br.push_back(std::min(Rc, std::max(D.nodes->back(), br.back())));
            append_panels(rule, br, 3, 3, 0.0, logjac);
            if (Rc > D.nodes->back()) {
                const double a = D.nodes->back();
                std::vector<double> ext;
                for (int i = 0; i <= 32; ++i) ext.push_back(a + (Rc - a) * i / 32.0);
                append_panels(rule, ext, 16, 16, 0.0, logjac);
            }
        } else {
            const double knee = Rc / 48.0;
            auto br = graded_breaks(Rc, knee, 47, 30);
            append_panels(rule, br, 16, 10, knee, logjac);
        }
        return rule;
    };
    LogRule rule = build(R);
    if (decay.known && !std::isfinite(D.extent)) {
        for (int iter = 0; iter < 40; ++iter) {
            std::vector<double> v(rule.x.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = rule.logw[i] + D.value(rule.x[i][0]);
            const double logI = log_sum_exp(v);
            const double LR = L(R) + 0.0;
            const double bound = log_tail_mass_bound(n, LR, decay.c2, decay.q, R);
            if (bound < logI - 32.0) break;
            R *= 1.25;
            rule = build(R);
        }
    }
    return rule;
}

LogRule cartesian_rule(const CartesianFunction& D, const Measure& m) {
    const int d = D.dim;
    const Point c = D.center;
    const Decay decay = effective_decay(D.tail, m);
    (void)decay;
    auto L = [&](Point x) {
        const double r2 = x[0] * x[0] + (d == 2 ? x[1] * x[1] : 0.0);
        const double v = D.value(x) + m.log_weight(r2, d);
        return std::isnan(v) ? -kInf : v;
    };
    const bool bounded = D.grid && !D.tail;
    if (!D.tail && !bounded && !m.is_gaussian())
        throw DivergenceError("cartesian integral: no tail descriptor and unbounded support");

    // boundary maximum of the log integrand on the box c +- R (with a log-perimeter factor)
    auto boundary_max = [&](double R) {
        double best = -kInf;
        if (d == 1) {
            best = std::max(L({c[0] - R, 0.0}), L({c[0] + R, 0.0}));
        } else {
            for (int k = 0; k <= 32; ++k) {
                const double s = -R + 2.0 * R * k / 32.0;
                best = std::max({best, L({c[0] + s, c[1] - R}), L({c[0] + s, c[1] + R}),
                                 L({c[0] - R, c[1] + s}), L({c[0] + R, c[1] + s})});
            }
            best += std::log(8.0 * R);
        }
        return best + std::log(R);
    };
    double peak = -kInf;
    double R = std::max(D.scale, 1e-3);
    Point lo{c[0], c[1]}, hi{c[0], c[1]};
    if (!bounded) {
        for (int iter = 0; iter < 400; ++iter) {
            for (int j = 1; j <= 32; ++j) {
                const double s = R * j / 32.0;
                if (d == 1) {
                    peak = std::max({peak, L({c[0] - s, 0.0}) + std::log(s), L({c[0] + s, 0.0}) + std::log(s)});
                } else {
                    for (int k = 0; k < 8; ++k) {
                        const double ang = 2 * std::numbers::pi * k / 8.0;
                        peak = std::max(peak, L({c[0] + s * std::cos(ang), c[1] + s * std::sin(ang)}) + 2 * std::log(s));
                    }
                }
            }
            if (std::isfinite(peak) && boundary_max(R) < peak - kDrop && boundary_max(1.5 * R) < peak - kDrop &&
                boundary_max(2 * R) < peak - kDrop)
                break;
            R *= 1.5;
            if (R > 1e6) throw DivergenceError("cartesian integral: integrand does not decay");
        }
        for (int a = 0; a < d; ++a) {
            lo[a] = c[a] - R;
            hi[a] = c[a] + R;
        }
    }

    // per-axis 1D rule (nodes, weights)
    auto axis_rule = [&](int a, std::vector<double>& xs, std::vector<double>& ws) {
        std::vector<double> br;
        int m_u, m_g;
        double knee_len;
        if (D.grid) {
            const GridFunction& g = *D.grid;
            const double glo = g.lo()[a], ghi = g.hi()[a];
            const double a0 = bounded ? glo : std::min(glo, lo[a]);
            const double a1 = bounded ? ghi : std::max(ghi, hi[a]);
            if (a0 < glo)
                for (int i = 0; i < 24; ++i) br.push_back(a0 + (glo - a0) * i / 24.0);
            for (std::size_t i = 0; i < g.shape()[a]; ++i) br.push_back(g.node(i, a));
            if (a1 > ghi)
                for (int i = 1; i <= 24; ++i) br.push_back(ghi + (a1 - ghi) * i / 24.0);
            m_u = m_g = 3;
            knee_len = 0.0;
        } else {
            const int nu = d == 1 ? 40 : 12, ng = d == 1 ? 24 : 6;
            const double Rl = c[a] - lo[a], Rr = hi[a] - c[a];
            auto left = graded_breaks(Rl, Rl / (nu + 1), nu, ng);
            auto right = graded_breaks(Rr, Rr / (nu + 1), nu, ng);
            for (auto it = left.rbegin(); it != left.rend(); ++it) br.push_back(c[a] - *it);
            for (std::size_t i = 1; i < right.size(); ++i) br.push_back(c[a] + right[i]);
            m_u = d == 1 ? 16 : 10;
            m_g = d == 1 ? 10 : 5;
            knee_len = std::max(Rl, Rr) / (nu + 1);
        }
        for (std::size_t k = 0; k + 1 < br.size(); ++k) {
            const double x0 = br[k], x1 = br[k + 1];
            if (!(x1 > x0)) continue;
            const bool near = !D.grid && std::min(std::abs(x0 - c[a]), std::abs(x1 - c[a])) < knee_len * 0.999;
            const GaussRule& g = gauss_legendre(near ? m_g : m_u);
            const double mid = 0.5 * (x0 + x1), h = 0.5 * (x1 - x0);
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                xs.push_back(mid + h * g.x[i]);
                ws.push_back(g.w[i] * h);
            }
        }
    };
    std::vector<double> x0s, w0s, x1s, w1s;
    axis_rule(0, x0s, w0s);
    if (d == 2) axis_rule(1, x1s, w1s);
    LogRule rule;
    if (d == 1) {
        for (std::size_t i = 0; i < x0s.size(); ++i) {
            rule.x.push_back({x0s[i], 0.0});
            rule.logw.push_back(std::log(w0s[i]) + m.log_weight(x0s[i] * x0s[i], 1));
        }
    } else {
        rule.x.reserve(x0s.size() * x1s.size());
        for (std::size_t j = 0; j < x1s.size(); ++j)
            for (std::size_t i = 0; i < x0s.size(); ++i) {
                rule.x.push_back({x0s[i], x1s[j]});
                rule.logw.push_back(std::log(w0s[i] * w1s[j]) +
                                    m.log_weight(x0s[i] * x0s[i] + x1s[j] * x1s[j], 2));
            }
    }
    return rule;
}

// ---- integrals -------------------------------------------------------------

namespace {

RadialFunction scaled(const RadialFunction& g, double alpha) {
    RadialFunction f = g;
    auto v = g.value;
    f.value = [v, alpha](double r) { return alpha * v(r); };
    if (g.slope) {
        auto s = g.slope;
        f.slope = [s, alpha](double r) { return alpha * s(r); };
    }
    if (f.tail) {
        f.tail->c1 *= alpha;
        f.tail->c2 *= alpha;
    }
    return f;
}

CartesianFunction scaled(const CartesianFunction& g, double alpha) {
    CartesianFunction f = g;
    auto v = g.value;
    f.value = [v, alpha](Point x) { return alpha * v(x); };
    f.gradient = nullptr;
    f.radial = nullptr;
    if (f.tail) {
        f.tail->c1 *= alpha;
        f.tail->c2 *= alpha;
    }
    return f;
}

double rule_log_sum(const LogRule& rule, const std::function<double(const Point&)>& h) {
    std::vector<double> v(rule.x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rule.logw[i] + h(rule.x[i]);
    return log_sum_exp(v);
}

// sum_i w_i e^{g_i} (g_i) / sum_i w_i e^{g_i} - log sum_i w_i e^{g_i}
double rule_entropy_ratio(const LogRule& rule, const std::function<double(const Point&)>& g) {
    const std::size_t N = rule.x.size();
    std::vector<double> gv(N), lv(N);
    double S = -kInf;
    for (std::size_t i = 0; i < N; ++i) {
        gv[i] = g(rule.x[i]);
        lv[i] = rule.logw[i] + gv[i];
        S = std::max(S, lv[i]);
    }
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(lv[i])) continue;
        const double w = std::exp(lv[i] - S);
        m0 += w;
        m1 += w * gv[i];
    }
    return m1 / m0 - (S + std::log(m0));
}

}  // namespace

double log_integral_exp(const RadialFunction& g, double alpha, const Measure& m) {
    const RadialFunction D = scaled(g, alpha);
    const LogRule rule = radial_rule(D, m);
    return rule_log_sum(rule, [&](const Point& x) { return D.value(x[0]); });
}

double log_integral_exp(const CartesianFunction& g, double alpha, const Measure& m) {
    const CartesianFunction D = scaled(g, alpha);
    const LogRule rule = cartesian_rule(D, m);
    return rule_log_sum(rule, [&](const Point& x) { return D.value(x); });
}

double log_norm_alpha(const RadialFunction& g, double alpha, const Measure& m) {
    if (!(alpha > 0)) throw std::invalid_argument("log_norm_alpha: alpha must be positive");
    return log_integral_exp(g, alpha, m) / alpha;
}

double log_norm_alpha(const CartesianFunction& g, double alpha, const Measure& m) {
    if (!(alpha > 0)) throw std::invalid_argument("log_norm_alpha: alpha must be positive");
    return log_integral_exp(g, alpha, m) / alpha;
}

double log_radial_integral(const RadialProfile& h, const Measure& m) {
    return log_integral_exp(RadialFunction::from_profile(h), 1.0, m);
}

double radial_integral(const RadialProfile& h, const Measure& m) { return std::exp(log_radial_integral(h, m)); }

double radial_integral(const std::function<double(double)>& h, int n, const Measure& m, double R,
                       std::vector<double> extra_breaks, double abs_tol) {
    const double area = n * specfun::unit_ball_volume(n);
    auto f = [&](double r) { return h(r) * area * std::pow(r, n - 1) * std::exp(m.log_weight(r * r, n)); };
    std::vector<double> br = graded_breaks(R, R / 32.0, 31, 30);
    for (double b : extra_breaks)
        if (b > 0 && b < R) br.push_back(b);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return integrate_adaptive(f, br, abs_tol);
}

double entropy_ratio(const RadialFunction& g, const Measure& m) {
    const LogRule rule = radial_rule(g, m);
    return rule_entropy_ratio(rule, [&](const Point& x) { return g.value(x[0]); });
}

double entropy_ratio(const CartesianFunction& g, const Measure& m) {
    const LogRule rule = cartesian_rule(g, m);
    return rule_entropy_ratio(rule, [&](const Point& x) { return g.value(x); });
}

double entropy(const RadialFunction& g, const Measure& m) {
    return entropy_ratio(g, m) * std::exp(log_integral_exp(g, 1.0, m));
}

double log_grad_norm_p(const RadialFunction& logf, double p, const Measure& m) {
    if (!(p > 1)) throw std::invalid_argument("grad_norm_p: p must exceed 1");
    const RadialFunction D = scaled(logf, p);
    const LogRule rule = radial_rule(D, m);
    return rule_log_sum(rule, [&](const Point& x) {
        const double d = std::abs(logf.derivative(x[0]));
        return d > 0 ? D.value(x[0]) + p * std::log(d) : -kInf;
    });
}

double log_grad_norm_p(const CartesianFunction& logf, double p, const Measure& m) {
    if (!(p > 1)) throw std::invalid_argument("grad_norm_p: p must exceed 1");
    const CartesianFunction D = scaled(logf, p);
    const LogRule rule = cartesian_rule(D, m);
    return rule_log_sum(rule, [&](const Point& x) {
        const Point gr = logf.grad(x);
        const double d = std::sqrt(gr[0] * gr[0] + gr[1] * gr[1]);
        return d > 0 ? D.value(x) + p * std::log(d) : -kInf;
    });
}

double grad_norm_p(const RadialFunction& logf, double p, const Measure& m) {
    return std::exp(log_grad_norm_p(logf, p, m));
}

// ---- L1 distances ------------------------------------------------------------

namespace {

double abs_exp_diff(double A, double B) {
    const double M = std::max(A, B);
    if (!std::isfinite(M)) return 0.0;
    return std::exp(M) * -std::expm1(std::min(A, B) - M);
}

}  // namespace

double radial_l1_distance(const std::function<double(double)>& A, const std::function<double(double)>& B, int n,
                          const Measure& m, double scale, std::vector<double> br, double abs_tol) {
    auto lead = [&](double r) {
        const double v = std::max(A(r), B(r)) + m.log_weight(r * r, n) + n * std::log(r);
        return std::isnan(v) ? -kInf : v;
    };
    double peak = -kInf;
    double R = std::max(scale, 1e-3);
    for (int it = 0; it < 400; ++it) {
        for (int j = 1; j <= 64; ++j) peak = std::max(peak, lead(R * j / 64.0));
        if (std::isfinite(peak) && lead(R) < peak - 50 && lead(1.5 * R) < peak - 50 && lead(2 * R) < peak - 50) break;
        R *= 1.5;
        if (R > 1e7) throw DivergenceError("l1 distance: integrand does not decay");
    }
    auto diff = [&](double r) { return A(r) - B(r); };
    const int M = 2000;
    double prev = diff(0.0);
    for (int i = 1; i <= M; ++i) {
        const double r = R * i / M;
        const double cur = diff(r);
        if (std::isfinite(cur) && std::isfinite(prev) && (cur > 0) != (prev > 0)) {
            double lo = R * (i - 1) / M, hi = r;
            const bool lo_pos = prev > 0;
            for (int k = 0; k < 80; ++k) {
                const double mid = 0.5 * (lo + hi);
                if ((diff(mid) > 0) == lo_pos) lo = mid;
                else hi = mid;
            }
            br.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    std::erase_if(br, [R](double b) { return !(b > 0 && b < R); });
    return radial_integral([&](double r) { return abs_exp_diff(A(r), B(r)); }, n, m, R, br, abs_tol);
}

double cartesian_l1_distance(const std::function<double(Point)>& A, const std::function<double(Point)>& B,
                             const CartesianFunction& geometry, const Measure& m) {
    CartesianFunction D = geometry;
    D.value = [&](Point x) { return std::max(A(x), B(x)); };
    D.gradient = nullptr;
    D.radial = nullptr;
    const LogRule rule = cartesian_rule(D, m);
    std::vector<double> terms(rule.x.size());
    bool any = false;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double a = A(rule.x[i]), b = B(rule.x[i]);
        const double M = std::max(a, b);
        const double lo = std::min(a, b);
        if (!std::isfinite(M) || lo == M) {
            terms[i] = -kInf;
            continue;
        }
        terms[i] = rule.logw[i] + M + std::log(-std::expm1(lo - M));
        any = true;
    }
    return any ? std::exp(log_sum_exp(terms)) : 0.0;
}

// ---- Schwarz rearrangement ------------------------------------------------

namespace {

// Layer cake: cells [a_k, b_k] carrying linear exponent from ga_k to gb_k;
// vol(a, b) gives the measure of the shell/segment.
RadialProfile layer_cake(int n, const std::vector<double>& xs, const std::vector<double>& gs,
                         const std::function<double(double, double)>& vol, std::optional<TailBound> tail) {
    const double omega = specfun::unit_ball_volume(n);
    std::vector<double> levels = gs;
    std::sort(levels.begin(), levels.end(), std::greater<double>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<double> rho, lam;
    for (double lv : levels) {
        double mu = 0.0;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            const double a = xs[k], b = xs[k + 1], ga = gs[k], gb = gs[k + 1];
            if (ga > lv && gb > lv) {
                mu += vol(a, b);
            } else if (ga > lv || gb > lv) {
                const double s = a + (lv - ga) / (gb - ga) * (b - a);
                mu += ga > lv ? vol(a, s) : vol(s, b);
            }
        }
        const double r = std::pow(mu / omega, 1.0 / n);
        if (!rho.empty() && !(r > rho.back() * (1 + 1e-13) + 1e-300)) continue;
        rho.push_back(r);
        lam.push_back(lv);
    }
    if (rho.empty() || rho[0] != 0.0) {
        rho.insert(rho.begin(), 0.0);
        lam.insert(lam.begin(), levels.front());
    }
    while (rho.size() < 16) {
        // refine sparse outputs (e.g. step functions) by midpoint insertion
        std::vector<double> r2, l2;
        for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
            r2.push_back(rho[i]);
            l2.push_back(lam[i]);
            r2.push_back(0.5 * (rho[i] + rho[i + 1]));
            l2.push_back(0.5 * (lam[i] + lam[i + 1]));
        }
        r2.push_back(rho.back());
        l2.push_back(lam.back());
        rho.swap(r2);
        lam.swap(l2);
    }
    if (tail) {
        const double bound = tail->c1 - tail->c2 * std::pow(rho.back(), tail->q);
        if (lam.back() < bound) tail->c1 = lam.back() + tail->c2 * std::pow(rho.back(), tail->q);
    }
    return RadialProfile(n, rho, lam, tail, Interpolation::Linear);
}

}  // namespace

RadialProfile schwarz_rearrange(const RadialProfile& g) {
    if (g.tail() && !(g.tail()->c2 > 0)) throw DivergenceError("schwarz_rearrange: tail does not decay");
    const int n = g.dim();
    const double omega = specfun::unit_ball_volume(n);
    auto vol = [&](double a, double b) { return omega * (std::pow(b, n) - std::pow(a, n)); };
    return layer_cake(n, g.r(), g.logvals(), vol, g.tail());
}

RadialProfile schwarz_rearrange(const GridFunction& g) {
    if (g.dim() != 1) throw std::invalid_argument("schwarz_rearrange: only 1D grids are supported");
    if (g.tail() && !(g.tail()->c2 > 0)) throw DivergenceError("schwarz_rearrange: tail does not decay");
    std::vector<double> xs(g.shape()[0]);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.node(i);
    auto vol = [](double a, double b) { return b - a; };
    return layer_cake(1, xs, g.logvals(), vol, std::nullopt);
}

}  // namespace infconv
