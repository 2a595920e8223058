#include "infconv/hopflax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infconv/parallel.hpp"
#include "infconv/quadrature.hpp"

namespace infconv {

HopfLaxParams HopfLaxParams::make(double p, double t) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("HopfLaxParams: p must exceed 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("HopfLaxParams: t must be >= 0");
    return {p, p / (p - 1.0), t};
}

double HopfLaxParams::cost_coefficient() const { return 1.0 / (p_conj * std::pow(t, p_conj - 1.0)); }

double HopfLaxParams::cost(double d) const { return std::pow(std::abs(d), p_conj) * cost_coefficient(); }

void check_finiteness(const std::optional<TailBound>& tail, const HopfLaxParams& hp) {
    if (!tail || hp.t == 0.0 || !(tail->c2 > 0)) return;
    if (tail->q > hp.p_conj * (1 + 1e-14))
        throw InfimumError("Hopf-Lax: tail decays faster than |x|^{p'}, infimum is -infinity");
    if (tail->q >= hp.p_conj * (1 - 1e-14) && tail->c2 * hp.p_conj * std::pow(hp.t, hp.p_conj - 1.0) >= 1.0)
        throw InfimumError("Hopf-Lax: t beyond the finiteness threshold, infimum is -infinity");
}

double finiteness_horizon(const std::optional<TailBound>& tail, const HopfLaxParams& hp) {
    if (!tail || !(tail->c2 > 0)) return kInf;
    if (tail->q > hp.p_conj * (1 + 1e-14)) return 0.0;
    // slower decay: every c2 > 0 bounds it in the p' form, so no finite horizon
    if (tail->q < hp.p_conj * (1 - 1e-14)) return kInf;
    return std::pow(2.0 * hp.p_conj * tail->c2, 1.0 / (1.0 - hp.p_conj));
}

std::optional<TailBound> evolve_tail(const std::optional<TailBound>& tail, const HopfLaxParams& hp) {
    if (!tail || hp.t == 0.0 || !(tail->c2 > 0)) return tail;
    TailBound out = *tail;
    if (std::abs(tail->q - hp.p_conj) <= 1e-14 * hp.p_conj) {
        const double k = hp.t * std::pow(hp.p_conj * tail->c2, hp.p - 1.0);
        out.c2 = tail->c2 / std::pow(1.0 - k, hp.p_conj - 1.0);
    }
    return out;
}

// ---- scalar minimization helpers ------------------------------------------

namespace {

// Minimize a convex function on [lo, +inf) (lo may be -inf) starting near x0.
Minimum convex_min(const std::function<double(double)>& phi, double x0, double step, double lo = -kInf) {
    x0 = std::max(x0, lo);
    step = std::max(step, 1e-8);
    const double f0 = phi(x0);
    double right = x0 + step;
    double fr = phi(right);
    double left = std::max(lo, x0 - step);
    double fl = left < x0 ? phi(left) : f0;
    double a, b;
    if (fr < f0) {
        // descend to the right
        double prev = x0, cur = right, fcur = fr;
        for (int it = 0; it < 200; ++it) {
            step *= 2;
            const double nxt = cur + step;
            const double fn = phi(nxt);
            if (fn >= fcur) {
                a = prev;
                b = nxt;
                return golden_section(phi, a, b, 1e-13);
            }
            prev = cur;
            cur = nxt;
            fcur = fn;
        }
        throw InfimumError("Hopf-Lax: minimizing sequence escapes to infinity");
    }
    if (fl < f0) {
        double prev = x0, cur = left, fcur = fl;
        for (int it = 0; it < 200; ++it) {
            if (cur <= lo) return golden_section(phi, lo, prev, 1e-13);
            step *= 2;
            const double nxt = std::max(lo, cur - step);
            const double fn = phi(nxt);
            if (fn >= fcur) return golden_section(phi, nxt, prev, 1e-13);
            prev = cur;
            cur = nxt;
            fcur = fn;
        }
        throw InfimumError("Hopf-Lax: minimizing sequence escapes to infinity");
    }
    return golden_section(phi, left, right, 1e-13);
}

// Node scan plus golden refinement around the best node; nodes sorted.
Minimum scan_refine(const std::function<double(double)>& phi, const std::vector<double>& nodes) {
    std::size_t best = 0;
    double fb = kInf;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double f = phi(nodes[j]);
        if (f < fb) {
            fb = f;
            best = j;
        }
    }
    const double a = nodes[best == 0 ? 0 : best - 1];
    const double b = nodes[std::min(best + 1, nodes.size() - 1)];
    Minimum m = golden_section(phi, a, b, 1e-13);
    if (fb < m.f) m = {nodes[best], fb};
    return m;
}

// Minimizer of the extrapolated tail model beyond `edge` on the side given by dir (+1/-1).
Minimum tail_side_min(const std::function<double(double)>& phi, double edge, double dir, double step) {
    double prev = edge, cur = edge + dir * step, fprev = phi(edge), fcur = phi(cur);
    if (fcur >= fprev) return golden_section(phi, std::min(prev, cur), std::max(prev, cur), 1e-13);
    double before = prev;
    for (int it = 0; it < 200; ++it) {
        step *= 2;
        const double nxt = cur + dir * step;
        const double fn = phi(nxt);
        if (fn >= fcur) return golden_section(phi, std::min(before, nxt), std::max(before, nxt), 1e-13);
        before = cur;
        cur = nxt;
        fcur = fn;
    }
    throw InfimumError("Hopf-Lax: minimizing sequence escapes to infinity");
}

}  // namespace

// ---- pointwise evaluation ---------------------------------------------------

double hopf_lax_at(const RadialFunction& g, double r, const HopfLaxParams& hp) {
    if (hp.t == 0.0) return g.value(r);
    check_finiteness(g.tail, hp);
    const double cc = hp.cost_coefficient(), pc = hp.p_conj;
    auto phi = [&](double s) { return g.value(s) + cc * std::pow(std::abs(r - s), pc); };
    if (g.nodes && !g.nodes->empty()) {
        std::vector<double> cand;
        for (double s : *g.nodes)
            if (s <= g.extent) cand.push_back(s);
        Minimum m = scan_refine(phi, cand);
        if (g.tail && !std::isfinite(g.extent)) {
            const double edge = g.nodes->back();
            Minimum mt = tail_side_min(phi, edge, +1.0, std::max(edge - (*g.nodes)[g.nodes->size() - 2], 1e-3));
            if (mt.f < m.f) m = mt;
        }
        return m.f;
    }
    if (g.concave) {
        Minimum m = convex_min(phi, r, std::max(0.25 * r, 0.25 * g.scale), 0.0);
        return m.f;
    }
    // generic: scan a hybrid grid out to where the objective grows
    double S = std::max(2.0 * r, 4.0 * g.scale);
    if (std::isfinite(g.extent)) S = std::min(S, g.extent);
    else
        for (int it = 0; it < 60 && phi(2 * S) < phi(S); ++it) S *= 2;
    if (!std::isfinite(g.extent)) S *= 2;
    const std::vector<double> cand = hybrid_radial_grid(1024, S);
    return scan_refine(phi, cand).f;
}

double hopf_lax_at(const CartesianFunction& g, Point x, const HopfLaxParams& hp) {
    if (hp.t == 0.0) return g.value(x);
    check_finiteness(g.tail, hp);
    if (g.radial) {
        const double dx = x[0] - g.center[0], dy = g.dim == 2 ? x[1] - g.center[1] : 0.0;
        return hopf_lax_at(*g.radial, std::sqrt(dx * dx + dy * dy), hp);
    }
    const double cc = hp.cost_coefficient(), pc = hp.p_conj;
    const int d = g.dim;
    auto phi2 = [&](Point y) {
        const double dx = x[0] - y[0], dy = d == 2 ? x[1] - y[1] : 0.0;
        const double dist = std::sqrt(dx * dx + dy * dy);
        return g.value(y) + cc * std::pow(dist, pc);
    };
    if (g.grid) {
        const GridFunction& gf = *g.grid;
        const double h = gf.spacing();
        // discrete scan over nodes (leftmost / lowest index wins ties)
        std::size_t best = 0;
        double fb = kInf;
        for (std::size_t k = 0; k < gf.size(); ++k) {
            const Point y = gf.node_point(k);
            const double dx = x[0] - y[0], dy = d == 2 ? x[1] - y[1] : 0.0;
            const double f = gf.logvals()[k] + cc * std::pow(std::sqrt(dx * dx + dy * dy), pc);
            if (f < fb) {
                fb = f;
                best = k;
            }
        }
        Point y = gf.node_point(best);
        double f = fb;
        const Point lo = gf.lo(), hi = gf.hi();
        if (d == 1) {
            auto phi = [&](double s) { return phi2({s, 0.0}); };
            Minimum m = golden_section(phi, std::max(lo[0], y[0] - h), std::min(hi[0], y[0] + h), 1e-13);
            f = std::min(f, m.f);
            if (gf.tail()) {
                f = std::min(f, tail_side_min(phi, lo[0], -1.0, h).f);
                f = std::min(f, tail_side_min(phi, hi[0], +1.0, h).f);
            }
        } else {
            for (int sweep = 0; sweep < 4; ++sweep) {
                for (int a = 0; a < 2; ++a) {
                    auto phi = [&](double s) {
                        Point z = y;
                        z[a] = s;
                        return phi2(z);
                    };
                    Minimum m = golden_section(phi, std::max(lo[a], y[a] - h), std::min(hi[a], y[a] + h), 1e-13);
                    if (m.f < f) {
                        f = m.f;
                        y[a] = m.x;
                    }
                }
            }
            if (gf.tail()) {
                // minimizer may sit in the tail extension: unconstrained descent from y and from x
                for (Point z : {y, x}) {
                    double fz = phi2(z);
                    for (int sweep = 0; sweep < 200; ++sweep) {
                        const double fbefore = fz;
                        for (int a = 0; a < 2; ++a) {
                            auto phi = [&](double s) {
                                Point w = z;
                                w[a] = s;
                                return phi2(w);
                            };
                            Minimum m = convex_min(phi, z[a], h);
                            if (m.f <= fz) {
                                fz = m.f;
                                z[a] = m.x;
                            }
                        }
                        if (fbefore - fz <= 1e-15 * (1 + std::abs(fz))) break;
                    }
                    f = std::min(f, fz);
                }
            }
        }
        return f;
    }
    if (d == 1) {
        auto phi = [&](double s) { return phi2({s, 0.0}); };
        if (g.concave) return convex_min(phi, x[0], 0.25 * g.scale + 0.25 * std::abs(x[0] - g.center[0])).f;
        const double S = 8.0 * g.scale + 2.0 * std::abs(x[0] - g.center[0]);
        std::vector<double> cand(2049);
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = x[0] - S + 2 * S * i / 2048.0;
        return scan_refine(phi, cand).f;
    }
    // 2D analytic: cyclic coordinate descent on the convex objective
    Point y = x;
    double f = phi2(y);
    for (int sweep = 0; sweep < 400; ++sweep) {
        const Point before = y;
        const double fbefore = f;
        for (int a = 0; a < 2; ++a) {
            auto phi = [&](double s) {
                Point z = y;
                z[a] = s;
                return phi2(z);
            };
            Minimum m = convex_min(phi, y[a], 0.25 * g.scale);
            if (m.f <= f) {
                f = m.f;
                y[a] = m.x;
            }
        }
        const double move = std::abs(y[0] - before[0]) + std::abs(y[1] - before[1]);
        if (move <= 1e-12 * (1 + std::abs(y[0]) + std::abs(y[1])) || fbefore - f <= 1e-16 * (1 + std::abs(f))) break;
    }
    return f;
}

RadialFunction hopf_lax(const RadialFunction& g, const HopfLaxParams& hp) {
    check_finiteness(g.tail, hp);
    if (hp.t == 0.0) return g;
    RadialFunction q = g;
    auto src = std::make_shared<const RadialFunction>(g);
    q.value = [src, hp](double r) { return hopf_lax_at(*src, r, hp); };
    q.slope = nullptr;
    q.tail = evolve_tail(g.tail, hp);
    return q;
}

CartesianFunction hopf_lax(const CartesianFunction& g, const HopfLaxParams& hp) {
    check_finiteness(g.tail, hp);
    if (hp.t == 0.0) return g;
    if (g.radial) return CartesianFunction::from_radial(hopf_lax(*g.radial, hp), g.center);
    if (g.grid) {
        // node solve, then interpolate; the evolved tail covers the exterior
        CartesianFunction q = CartesianFunction::from_grid(inf_convolve_bruteforce(*g.grid, hp));
        q.center = g.center;
        q.scale = g.scale;
        q.concave = g.concave;
        return q;
    }
    CartesianFunction q = g;
    auto src = std::make_shared<const CartesianFunction>(g);
    q.value = [src, hp](Point x) { return hopf_lax_at(*src, x, hp); };
    q.gradient = nullptr;
    q.grid = nullptr;
    q.tail = evolve_tail(g.tail, hp);
    if (g.grid) {
        // keep a bounded support box for quadrature when the source had none
        q.scale = std::max(g.scale, g.grid->spacing() * 8);
    }
    return q;
}

// ---- grid-level solvers -----------------------------------------------------

namespace {

// 1D node problem: nodes xs (sorted), values gs, continuous interpolant G on
// [xs.front(), xs.back()], optional tail model outside. Outputs at every node.
struct Line1D {
    const std::vector<double>& xs;
    const std::vector<double>& gs;
    std::function<double(double)> G;  // interpolant including tail extension
    bool tail_left = false, tail_right = false;
};

double finish_node(const Line1D& L, std::size_t i, std::size_t j, double fj, const HopfLaxParams& hp) {
    const double x = L.xs[i];
    const double cc = hp.cost_coefficient(), pc = hp.p_conj;
    auto phi = [&](double y) { return L.G(y) + cc * std::pow(std::abs(x - y), pc); };
    const std::size_t N = L.xs.size();
    const double a = L.xs[j == 0 ? 0 : j - 1], b = L.xs[std::min(j + 1, N - 1)];
    double f = std::min(fj, golden_section(phi, a, b, 1e-13).f);
    const double h0 = L.xs[1] - L.xs[0], h1 = L.xs[N - 1] - L.xs[N - 2];
    if (L.tail_left) f = std::min(f, tail_side_min(phi, L.xs.front(), -1.0, h0).f);
    if (L.tail_right) f = std::min(f, tail_side_min(phi, L.xs.back(), +1.0, h1).f);
    return f;
}

std::vector<double> solve_line(const Line1D& L, const HopfLaxParams& hp, bool fast) {
    const std::size_t N = L.xs.size();
    std::vector<double> out(N);
    if (hp.t == 0.0) return L.gs;
    const double cc = hp.cost_coefficient(), pc = hp.p_conj;
    auto entry = [&](std::size_t i, std::size_t j) { return L.gs[j] + cc * std::pow(std::abs(L.xs[i] - L.xs[j]), pc); };
    std::vector<std::size_t> arg(N);
    std::vector<double> val(N);
    if (!fast) {
        parallel_for(N, [&](std::size_t i) {
            std::size_t best = 0;
            double fb = kInf;
            for (std::size_t j = 0; j < N; ++j) {
                const double f = entry(i, j);
                if (f < fb) {
                    fb = f;
                    best = j;
                }
            }
            arg[i] = best;
            val[i] = fb;
        });
    } else {
        // divide and conquer over rows; leftmost row minima are monotone for convex costs
        struct Task {
            std::size_t lo, hi, olo, ohi;
        };
        std::vector<Task> stack{{0, N - 1, 0, N - 1}};
        while (!stack.empty()) {
            Task tk = stack.back();
            stack.pop_back();
            const std::size_t mid = tk.lo + (tk.hi - tk.lo) / 2;
            std::size_t best = tk.olo;
            double fb = kInf;
            for (std::size_t j = tk.olo; j <= tk.ohi; ++j) {
                const double f = entry(mid, j);
                if (f < fb) {
                    fb = f;
                    best = j;
                }
            }
            arg[mid] = best;
            val[mid] = fb;
            if (mid > tk.lo) stack.push_back({tk.lo, mid - 1, tk.olo, best});
            if (mid < tk.hi) stack.push_back({mid + 1, tk.hi, best, tk.ohi});
        }
    }
    parallel_for(N, [&](std::size_t i) { out[i] = finish_node(L, i, arg[i], val[i], hp); });
    return out;
}

RadialProfile solve_radial(const RadialProfile& g, const HopfLaxParams& hp, bool fast) {
    check_finiteness(g.tail(), hp);
    if (hp.t == 0.0) return g;
    Line1D L{g.r(), g.logvals(), [&g](double y) { return g(y); }, false, g.tail().has_value()};
    std::vector<double> q = solve_line(L, hp, fast);
    auto tail = evolve_tail(g.tail(), hp);
    if (tail) {
        const double R = g.r().back();
        tail->c1 = std::min(tail->c1, q.back() + tail->c2 * std::pow(R, tail->q));
    }
    return RadialProfile(g.dim(), g.r(), std::move(q), tail, g.interpolation());
}

GridFunction solve_grid2d(const GridFunction& g, const HopfLaxParams& hp) {
    CartesianFunction f = CartesianFunction::from_grid(g);
    std::vector<double> q(g.size());
    parallel_for(g.size(), [&](std::size_t k) { q[k] = hopf_lax_at(f, g.node_point(k), hp); });
    auto tail = evolve_tail(g.tail(), hp);
    if (tail) {
        const auto [nx, ny] = g.shape();
        const Point c = g.tail_center();
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                if (i != 0 && j != 0 && i + 1 != nx && j + 1 != ny) continue;
                const Point y = g.node_point(i + nx * j);
                const double d = std::hypot(y[0] - c[0], y[1] - c[1]);
                tail->c1 = std::min(tail->c1, q[i + nx * j] + tail->c2 * std::pow(d, tail->q));
            }
    }
    return GridFunction(2, g.origin(), g.spacing(), g.shape(), std::move(q), tail, g.tail_center(), g.interpolation());
}

GridFunction solve_grid1d(const GridFunction& g, const HopfLaxParams& hp, bool fast) {
    check_finiteness(g.tail(), hp);
    if (hp.t == 0.0) return g;
    std::vector<double> xs(g.shape()[0]);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.node(i);
    const bool tl = g.tail().has_value();
    Line1D L{xs, g.logvals(), [&g](double y) { return g(y); }, tl, tl};
    std::vector<double> q = solve_line(L, hp, fast);
    auto tail = evolve_tail(g.tail(), hp);
    if (tail) {
        // keep the descriptor a valid bound at both grid ends
        for (std::size_t i : {std::size_t{0}, xs.size() - 1}) {
            const double d = std::abs(xs[i] - g.tail_center()[0]);
            tail->c1 = std::min(tail->c1, q[i] + tail->c2 * std::pow(d, tail->q));
        }
    }
    return GridFunction(1, g.origin(), g.spacing(), g.shape(), std::move(q), tail, g.tail_center(), g.interpolation());
}

}  // namespace

GridFunction inf_convolve_bruteforce(const GridFunction& g, const HopfLaxParams& hp) {
    if (g.dim() == 2) {
        check_finiteness(g.tail(), hp);
        if (hp.t == 0.0) return g;
        return solve_grid2d(g, hp);
    }
    return solve_grid1d(g, hp, false);
}

GridFunction inf_convolve_fast(const GridFunction& g, const HopfLaxParams& hp) {
    if (g.dim() != 1) throw std::invalid_argument("inf_convolve_fast: 1D input required (use radial reduction)");
    return solve_grid1d(g, hp, true);
}

RadialProfile inf_convolve_bruteforce(const RadialProfile& g, const HopfLaxParams& hp) {
    return solve_radial(g, hp, false);
}

RadialProfile inf_convolve_fast(const RadialProfile& g, const HopfLaxParams& hp) { return solve_radial(g, hp, true); }

RadialProfile radial_inf_convolve(const RadialProfile& g, const HopfLaxParams& hp) {
    return solve_radial(g, hp, true);
}

// ---- Hamilton-Jacobi derivative check ----------------------------------------

namespace {

HJCheck finish_hj(const std::vector<double>& ts, std::vector<double> qs, double grad_norm, double p) {
    HJCheck out;
    out.analytic = -std::pow(grad_norm, p) / p;
    out.quotients = qs;
    const std::size_t K = ts.size();
    if (K == 1) {
        out.limit = qs[0];
    } else {
        const double t1 = ts[K - 2], t2 = ts[K - 1], q1 = qs[K - 2], q2 = qs[K - 1];
        out.limit = (t1 * q2 - t2 * q1) / (t1 - t2);
    }
    out.order = std::nan("");
    if (K >= 3) {
        const double d1 = qs[K - 3] - qs[K - 2], d2 = qs[K - 2] - qs[K - 1];
        const double s1 = ts[K - 3] - ts[K - 2], s2 = ts[K - 2] - ts[K - 1];
        if (d1 != 0.0 && d2 != 0.0) out.order = std::log(std::abs(d1 / d2)) / std::log(s1 / s2);
    }
    return out;
}

void validate_ladder(const std::vector<double>& ts, const std::optional<TailBound>& tail, double p) {
    if (ts.empty()) throw std::invalid_argument("hj_derivative_check: empty ladder");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0)) throw std::invalid_argument("hj_derivative_check: ladder must be positive");
        if (i && !(ts[i] < ts[i - 1])) throw std::invalid_argument("hj_derivative_check: ladder must decrease");
    }
    const double t0 = finiteness_horizon(tail, HopfLaxParams::make(p, 1.0));
    if (ts.front() > 0.9 * t0) throw InfimumError("hj_derivative_check: ladder enters t >= 0.9 t0");
}

}  // namespace

HJCheck hj_derivative_check(const RadialFunction& g, double r, const std::vector<double>& ts, double p) {
    validate_ladder(ts, g.tail, p);
    const double g0 = g.value(r);
    std::vector<double> qs(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
        qs[k] = (hopf_lax_at(g, r, HopfLaxParams::make(p, ts[k])) - g0) / ts[k];
    });
    return finish_hj(ts, std::move(qs), std::abs(g.derivative(r)), p);
}

HJCheck hj_derivative_check(const CartesianFunction& g, Point x, const std::vector<double>& ts, double p) {
    validate_ladder(ts, g.tail, p);
    const double g0 = g.value(x);
    std::vector<double> qs(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
        qs[k] = (hopf_lax_at(g, x, HopfLaxParams::make(p, ts[k])) - g0) / ts[k];
    });
    const Point gr = g.grad(x);
    return finish_hj(ts, std::move(qs), std::sqrt(gr[0] * gr[0] + gr[1] * gr[1]), p);
}

}  // namespace infconv
