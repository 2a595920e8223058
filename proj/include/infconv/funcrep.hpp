#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace infconv {

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MeasureKind { Lebesgue, Gaussian };

struct Measure {
    MeasureKind kind = MeasureKind::Lebesgue;
    static Measure lebesgue() { return {MeasureKind::Lebesgue}; }
    static Measure gaussian() { return {MeasureKind::Gaussian}; }
    // log of the density w.r.t. Lebesgue at a point with |x|^2 = r2 in R^n
    double log_weight(double r2, int n) const;
    bool is_gaussian() const { return kind == MeasureKind::Gaussian; }
};

// g(x) >= c1 - c2 |x - center|^q outside the sampled region; also used as the
// extrapolation model past the last sample.
struct TailBound {
    double c1 = 0.0;
    double c2 = 0.0;
    double q = 2.0;
};

enum class Interpolation { Linear, Quintic };

using Point = std::array<double, 2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial exponent sampled on 0 = r_0 < r_1 < ... ; density is e^g.
class RadialProfile {
public:
    RadialProfile(int n, std::vector<double> r, std::vector<double> logvals,
                  std::optional<TailBound> tail = std::nullopt,
                  Interpolation interp = Interpolation::Linear);

    int dim() const { return n_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& logvals() const { return g_; }
    const std::optional<TailBound>& tail() const { return tail_; }
    Interpolation interpolation() const { return interp_; }
    std::size_t size() const { return r_.size(); }
    double extent() const { return tail_ ? kInf : r_.back(); }

    double operator()(double r) const;
    // central differences at nodes, interpolated in between (one-sided at r = 0)
    double slope(double r) const;

private:
    int n_;
    std::vector<double> r_, g_, dg_;
    std::optional<TailBound> tail_;
    Interpolation interp_;
};

// Hybrid grid: geometric refinement near 0, uniform up to R; exactly N nodes.
std::vector<double> hybrid_radial_grid(std::size_t N, double R);

// Uniform 1D or 2D grid, x fastest: index = i + nx * j.
class GridFunction {
public:
    GridFunction(int dim, Point origin, double spacing, std::array<std::size_t, 2> shape,
                 std::vector<double> logvals, std::optional<TailBound> tail = std::nullopt,
                 Point tail_center = {0.0, 0.0}, Interpolation interp = Interpolation::Linear);

    int dim() const { return dim_; }
    Point origin() const { return origin_; }
    double spacing() const { return h_; }
    std::array<std::size_t, 2> shape() const { return shape_; }
    const std::vector<double>& logvals() const { return g_; }
    const std::optional<TailBound>& tail() const { return tail_; }
    Point tail_center() const { return center_; }
    Interpolation interpolation() const { return interp_; }
    std::size_t size() const { return g_.size(); }

    double node(std::size_t i, int axis = 0) const { return origin_[axis] + h_ * static_cast<double>(i); }
    Point node_point(std::size_t k) const;
    double at(std::size_t i, std::size_t j = 0) const { return g_[i + shape_[0] * j]; }
    Point lo() const { return origin_; }
    Point hi() const;
    bool inside(Point x) const;

    double operator()(Point x) const;
    double operator()(double x) const { return (*this)(Point{x, 0.0}); }

private:
    double interp_inside(Point x) const;
    int dim_;
    Point origin_;
    double h_;
    std::array<std::size_t, 2> shape_;
    std::vector<double> g_;
    std::optional<TailBound> tail_;
    Point center_;
    Interpolation interp_;
};

// Continuous radial exponent g(|x|) on R^n.
struct RadialFunction {
    int n = 1;
    std::function<double(double)> value;
    std::function<double(double)> slope;  // optional; finite differences otherwise
    std::optional<TailBound> tail;
    double extent = kInf;                 // support radius when there is no tail
    std::shared_ptr<const std::vector<double>> nodes;  // sample nodes (profiles)
    bool concave = false;
    double scale = 1.0;                   // characteristic length

    double operator()(double r) const { return value(r); }
    double derivative(double r) const;

    static RadialFunction from_profile(const RadialProfile& prof);
    RadialFunction plus_constant(double c) const;
};

// Continuous exponent on R^1 or R^2 (Cartesian experiments).
struct CartesianFunction {
    int dim = 1;
    std::function<double(Point)> value;
    std::function<Point(Point)> gradient;  // optional
    std::optional<TailBound> tail;         // about `center`
    Point center{0.0, 0.0};                // peak / kink location
    bool concave = false;
    double scale = 1.0;
    // sampled source (grid scans, support box)
    std::shared_ptr<const GridFunction> grid;
    // set when the function is radial about `center`
    std::shared_ptr<const RadialFunction> radial;

    double operator()(Point x) const { return value(x); }
    Point grad(Point x) const;

    static CartesianFunction from_grid(const GridFunction& gf);
    static CartesianFunction from_radial(const RadialFunction& g, Point center = {0.0, 0.0});
    CartesianFunction translated(Point v) const;  // x -> g(x - v)
    CartesianFunction plus_constant(double c) const;
};

// x -> mult * g(arg_scale * x) + add  (mult > 0, arg_scale > 0)
RadialFunction affine_exponent(const RadialFunction& g, double mult, double add = 0.0, double arg_scale = 1.0);
CartesianFunction affine_exponent(const CartesianFunction& g, double mult, double add = 0.0, double arg_scale = 1.0);

// ---- integrals ----------------------------------------------------------

// Quadrature nodes with log-weights (Jacobian and measure folded in).
struct LogRule {
    std::vector<Point> x;    // radial rules use x[i][0] = r
    std::vector<double> logw;
};

LogRule radial_rule(const RadialFunction& density_exponent, const Measure& m);
LogRule cartesian_rule(const CartesianFunction& density_exponent, const Measure& m);

// \int e^{h} dm for a profile storing h.
double radial_integral(const RadialProfile& h, const Measure& m);
double log_radial_integral(const RadialProfile& h, const Measure& m);
// \int h dm for a plain (non log-domain) radial integrand on [0, R]
double radial_integral(const std::function<double(double)>& h, int n, const Measure& m, double R,
                       std::vector<double> extra_breaks = {}, double abs_tol = 1e-13);

// log \int e^{alpha g} dm
double log_integral_exp(const RadialFunction& g, double alpha, const Measure& m);
double log_integral_exp(const CartesianFunction& g, double alpha, const Measure& m);

// log ||e^g||_alpha
double log_norm_alpha(const RadialFunction& g, double alpha, const Measure& m);
double log_norm_alpha(const CartesianFunction& g, double alpha, const Measure& m);

// Ent(e^g) and Ent(e^g) / \int e^g
double entropy(const RadialFunction& g, const Measure& m);
double entropy_ratio(const RadialFunction& g, const Measure& m);
double entropy_ratio(const CartesianFunction& g, const Measure& m);

// \int |grad f|^p dm with f = e^{logf}; log form avoids overflow
double grad_norm_p(const RadialFunction& logf, double p, const Measure& m);
double log_grad_norm_p(const RadialFunction& logf, double p, const Measure& m);
double log_grad_norm_p(const CartesianFunction& logf, double p, const Measure& m);

// \int |e^A - e^B| dm for radial exponents A, B on R^n. Breaks are placed at sign
// changes of A - B (located on a scan) plus `extra_breaks`.
double radial_l1_distance(const std::function<double(double)>& A, const std::function<double(double)>& B, int n,
                          const Measure& m, double scale, std::vector<double> extra_breaks = {},
                          double abs_tol = 1e-13);
// Cartesian version; `geometry` supplies center, scale, grid and a tail bound valid for max(A, B).
double cartesian_l1_distance(const std::function<double(Point)>& A, const std::function<double(Point)>& B,
                             const CartesianFunction& geometry, const Measure& m);

// Symmetric decreasing rearrangement of e^g (layer cake on the exponent).
RadialProfile schwarz_rearrange(const RadialProfile& g);
RadialProfile schwarz_rearrange(const GridFunction& g);

// Tail mass bound: \int_{|x|>R} exp(L_R - c2 (|x|^q - R^q)) dx in R^n, in log form.
double log_tail_mass_bound(int n, double L_R, double c2, double q, double R);

}  // namespace infconv
