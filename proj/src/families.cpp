#include "infconv/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "infconv/quadrature.hpp"
#include "infconv/specfun.hpp"

namespace infconv {

namespace sf = specfun;

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::ExtremizerHC: return "ExtremizerHC";
        case FamilyKind::PowerHC: return "PowerHC";
        case FamilyKind::StretchLSI: return "StretchLSI";
        case FamilyKind::GaussQuadratic: return "GaussQuadratic";
        case FamilyKind::GaussLinear: return "GaussLinear";
    }
    return "?";
}

FamilyKind family_kind_from_string(std::string_view s) {
    for (FamilyKind k : {FamilyKind::ExtremizerHC, FamilyKind::PowerHC, FamilyKind::StretchLSI,
                         FamilyKind::GaussQuadratic, FamilyKind::GaussLinear})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown family kind: " + std::string(s));
}

double Family::b_eps() const {
    const double pc = p_conj();
    return pc * (std::pow(pc, -pc) + eps);
}

double Family::z() const { return p_conj() * std::pow(b_eps(), p - 1.0); }

double Family::dz_deps() const {
    const double pc = p_conj();
    return pc * pc * (p - 1.0) * std::pow(pc, (1.0 - pc) * (p - 2.0));
}

double Family::power_coefficient() const {
    const double pc = p_conj();
    switch (kind) {
        case FamilyKind::ExtremizerHC: return std::pow((beta - alpha) / (beta * t), pc - 1.0) / pc;
        case FamilyKind::PowerHC: return std::pow(pc, -pc) + eps;
        case FamilyKind::StretchLSI: return 1.0;
        case FamilyKind::GaussQuadratic: return eps;
        case FamilyKind::GaussLinear: return 0.0;
    }
    return 0.0;
}

double Family::exponent() const {
    switch (kind) {
        case FamilyKind::StretchLSI: return p_conj() - eps;
        case FamilyKind::GaussQuadratic:
        case FamilyKind::GaussLinear: return 2.0;
        default: return p_conj();
    }
}

bool Family::radial() const { return kind != FamilyKind::GaussLinear && x0[0] == 0.0 && x0[1] == 0.0; }

void Family::validate() const {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("family " + to_string(kind) + ": " + why);
    };
    if (n < 1) fail("n must be >= 1");
    if (!(p > 1.0)) fail("p must exceed 1");
    const double pc = p_conj();
    switch (kind) {
        case FamilyKind::ExtremizerHC:
            if (!(alpha > 0 && beta > alpha)) fail("need 0 < alpha < beta");
            if (!(t > 0)) fail("need t > 0");
            break;
        case FamilyKind::PowerHC:
            if (!(eps >= 0 && eps < 1.0 / pc - std::pow(pc, -pc))) fail("eps outside [0, 1/p' - (p')^{-p'})");
            break;
        case FamilyKind::StretchLSI:
            if (!(eps >= 0 && eps < pc - 1.0)) fail("eps outside [0, p' - 1)");
            break;
        case FamilyKind::GaussQuadratic:
            if (!(eps >= 0 && eps < 0.25)) fail("eps outside [0, 1/4)");
            if (p != 2.0) fail("Gaussian families use p = 2");
            break;
        case FamilyKind::GaussLinear:
            if (p != 2.0) fail("Gaussian families use p = 2");
            break;
    }
}

namespace {

double parse_double(std::string_view v) {
    std::string s(v);
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number: " + s);
    return d;
}

// shortest round-trip form
std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Family Family::parse(std::string_view spec) {
    Family f;
    const auto colon = spec.find(':');
    f.kind = family_kind_from_string(spec.substr(0, colon));
    if (f.kind == FamilyKind::GaussQuadratic || f.kind == FamilyKind::GaussLinear) {
        f.p = 2.0;
        f.t = 1.0;
    }
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            std::string_view kv = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = kv.find('=');
            if (eq == std::string_view::npos) throw std::invalid_argument("family spec: expected key=value");
            const std::string_view k = kv.substr(0, eq), v = kv.substr(eq + 1);
            if (k == "n") f.n = static_cast<int>(parse_double(v));
            else if (k == "p") f.p = parse_double(v);
            else if (k == "eps") f.eps = parse_double(v);
            else if (k == "alpha") f.alpha = parse_double(v);
            else if (k == "beta") f.beta = parse_double(v);
            else if (k == "t") f.t = parse_double(v);
            else if (k == "C") f.C = parse_double(v);
            else if (k == "x0") {
                const auto semi = v.find(';');
                f.x0[0] = parse_double(v.substr(0, semi));
                if (semi != std::string_view::npos) f.x0[1] = parse_double(v.substr(semi + 1));
            } else
                throw std::invalid_argument("family spec: unknown key " + std::string(k));
        }
    }
    f.validate();
    return f;
}

std::string Family::to_spec() const {
    std::string s = to_string(kind) + ":n=" + std::to_string(n) + ",p=" + fmt(p);
    switch (kind) {
        case FamilyKind::ExtremizerHC:
            s += ",alpha=" + fmt(alpha) + ",beta=" + fmt(beta) + ",t=" + fmt(t) + ",C=" + fmt(C) + ",x0=" + fmt(x0[0]) +
                 ";" + fmt(x0[1]);
            break;
        case FamilyKind::GaussLinear: s += ",C=" + fmt(C) + ",x0=" + fmt(x0[0]) + ";" + fmt(x0[1]); break;
        default: s += ",eps=" + fmt(eps);
    }
    return s;
}

RadialFunction radial_member(const Family& f) {
    f.validate();
    if (!f.radial()) throw std::invalid_argument("radial_member: family member is not radial about 0");
    const double c = f.power_coefficient(), q = f.exponent();
    const double C = f.kind == FamilyKind::ExtremizerHC ? f.C : 0.0;
    RadialFunction g;
    g.n = f.n;
    g.value = [c, q, C](double r) { return C - c * std::pow(r, q); };
    g.slope = [c, q](double r) { return r == 0.0 ? 0.0 : -c * q * std::pow(r, q - 1.0); };
    g.tail = TailBound{C, c, q};
    g.concave = true;
    g.scale = c > 0 ? std::min(std::pow(1.0 / c, 1.0 / q), 1e3) : 1.0;
    return g;
}

CartesianFunction cartesian_member(const Family& f) {
    f.validate();
    if (f.n > 2) throw std::invalid_argument("cartesian_member: dimension must be 1 or 2");
    if (f.kind == FamilyKind::GaussLinear) {
        CartesianFunction g;
        g.dim = f.n;
        const Point v{f.x0[0], f.n == 2 ? f.x0[1] : 0.0};
        const double C = f.C;
        g.value = [v, C](Point x) { return v[0] * x[0] + v[1] * x[1] + C; };
        g.gradient = [v](Point) { return v; };
        g.concave = true;
        g.scale = 1.0;
        return g;
    }
    Family centred = f;
    centred.x0 = {0.0, 0.0};
    const Point c{f.x0[0], f.n == 2 ? f.x0[1] : 0.0};
    if (f.kind != FamilyKind::ExtremizerHC && (c[0] != 0.0 || c[1] != 0.0))
        throw std::invalid_argument("cartesian_member: only ExtremizerHC and GaussLinear take x0");
    return CartesianFunction::from_radial(radial_member(centred), c);
}

namespace {

double auto_extent(const Family& f) {
    const double c = f.power_coefficient(), q = f.exponent();
    const bool gauss = f.kind == FamilyKind::GaussQuadratic || f.kind == FamilyKind::GaussLinear;
    const double cc = gauss ? c + 0.5 : c;
    const double qq = gauss ? 2.0 : q;
    double R = std::pow(60.0 / cc, 1.0 / qq);
    return R + std::hypot(f.x0[0], f.x0[1]);
}

}  // namespace

RadialProfile sample_radial(const Family& f, const GridSpec& spec) {
    const RadialFunction g = radial_member(f);
    const double R = spec.extent > 0 ? spec.extent : auto_extent(f);
    const std::vector<double> r = hybrid_radial_grid(spec.N, R);
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = g.value(r[i]);
    std::optional<TailBound> tail = g.tail;
    return RadialProfile(f.n, r, std::move(v), tail, spec.interp);
}

GridFunction sample_grid(const Family& f, const GridSpec& spec) {
    if (f.n > 2) throw std::invalid_argument("sample_grid: dimension must be 1 or 2");
    const CartesianFunction g = cartesian_member(f);
    const double W = spec.extent > 0 ? spec.extent : auto_extent(f);
    const std::size_t N = spec.N;
    if (N < 2) throw std::invalid_argument("sample_grid: need at least 2 nodes per axis");
    const Point c = f.kind == FamilyKind::ExtremizerHC ? g.center : Point{0.0, 0.0};
    const double h = 2 * W / static_cast<double>(N - 1);
    const Point origin{c[0] - W, f.n == 2 ? c[1] - W : 0.0};
    const std::size_t ny = f.n == 2 ? N : 1;
    std::vector<double> v(N * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < N; ++i) v[i + N * j] = g.value({origin[0] + h * i, origin[1] + h * j});
    std::optional<TailBound> tail = g.tail;
    return GridFunction(f.n, origin, h, {N, ny}, std::move(v), tail, g.center, spec.interp);
}

// ---- closed forms -------------------------------------------------------------

double lsi_quadratic_constant(double n, double p) {
    const double pc = p / (p - 1), x = n / pc;
    return 2.0 / (n * pc) * (x * x + x - p + 1 - x * x * (x - p + 1) * sf::trigamma(x));
}

double hc_quadratic_constant(double n, double p) {
    return 0.5 * n * std::pow(p, (p + 1) / (p - 1)) * std::pow(p - 1, (p - 3) / (p - 1));
}

double hc_first_variation_integrand(int n, double p, double r) {
    const double pc = p / (p - 1);
    return std::abs(n - std::pow(pc, 1.0 / (1.0 - p)) * std::pow(r, pc)) * std::exp(-std::pow(pc, -pc) * std::pow(r, pc)) / p;
}

double hc_sharpness_constant(int n, double p) {
    const double pc = p / (p - 1);
    const double rstar = std::pow(n * std::pow(pc, 1.0 / (p - 1)), 1.0 / pc);
    const double R = std::pow(60.0 * std::pow(pc, pc), 1.0 / pc);
    return radial_integral([n, p](double r) { return hc_first_variation_integrand(n, p, r); }, n,
                           Measure::lebesgue(), R, {rstar}, 1e-14);
}

double lsi_first_variation_integrand(int n, double p, double r) {
    const double pc = p / (p - 1), x = n / pc;
    const double G = sf::gamma(x + 1) * sf::unit_ball_volume(n);
    const double A = sf::digamma(x) / pc + 1 / pc + 1.0 / n;
    const double B = n / (pc * pc) * sf::digamma(x + 1);
    const double rp = std::pow(r, pc);
    const double lr = r > 0 ? rp * std::log(r) : 0.0;
    return std::abs(A * (rp - x) - lr + B) * std::exp(-rp) / G;
}

double lsi_first_variation_unnormalized_integrand(int n, double p, double r) {
    const double pc = p / (p - 1), x = n / pc;
    const double A = sf::digamma(x) / pc + 1 / pc + 1.0 / n;
    const double rp = std::pow(r, pc);
    const double lr = r > 0 ? rp * std::log(r) : 0.0;
    return std::abs(A * (rp - x) - lr) * std::exp(-rp);
}

double lsi_sharpness_constant(int n, double p) {
    const double pc = p / (p - 1);
    const double R = std::pow(60.0, 1.0 / pc);
    // kinks where the bracket changes sign: locate them on a fine scan
    std::vector<double> kinks;
    auto inner = [&](double r) {
        const double x = n / pc;
        const double A = sf::digamma(x) / pc + 1 / pc + 1.0 / n;
        const double B = n / (pc * pc) * sf::digamma(x + 1);
        const double rp = std::pow(r, pc);
        return A * (rp - x) - (r > 0 ? rp * std::log(r) : 0.0) + B;
    };
    double prev = inner(0.0);
    for (int i = 1; i <= 4000; ++i) {
        const double r = R * i / 4000.0;
        const double cur = inner(r);
        if ((cur > 0) != (prev > 0)) {
            double a = R * (i - 1) / 4000.0, b = r;
            for (int k = 0; k < 100; ++k) {
                const double m = 0.5 * (a + b);
                if ((inner(m) > 0) == (inner(a) > 0)) a = m;
                else b = m;
            }
            kinks.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    return radial_integral([n, p](double r) { return lsi_first_variation_integrand(n, p, r); }, n,
                           Measure::lebesgue(), R, kinks, 1e-14);
}

double gauss_first_variation_integrand(int n, double r) { return std::abs(n - r * r); }

double gauss_sharpness_constant(int n) {
    return radial_integral([n](double r) { return gauss_first_variation_integrand(n, r); }, n, Measure::gaussian(),
                           16.0, {std::sqrt(static_cast<double>(n))}, 1e-14);
}

std::map<std::string, double> analytic_values(const Family& f) {
    f.validate();
    std::map<std::string, double> v;
    const double n = f.n, p = f.p, pc = f.p_conj();
    const double omega = sf::unit_ball_volume(n);
    switch (f.kind) {
        case FamilyKind::PowerHC: {
            const double b = f.b_eps(), z = f.z(), c = f.power_coefficient();
            const double one_minus = 1 - std::pow(b, p - 1);
            v["b_eps"] = b;
            v["z"] = z;
            v["g_coefficient"] = c;
            v["norm1_g"] = sf::gamma(n / pc + 1) * omega * std::pow(b / pc, -n / pc);
            v["Q1_coefficient"] = b / (pc * std::pow(one_minus, pc - 1));
            v["normp_pow_p_Q1g"] = sf::gamma(n / pc + 1) * omega * std::pow(p * b / (pc * std::pow(one_minus, pc - 1)), -n / pc);
            v["hc_deficit"] = std::pow(p, -n / p) * std::pow(p - 1, n / (pc * p)) * std::pow(b, -n / (pc * pc)) *
                                  std::pow(one_minus, -n / (p * p)) -
                              1;
            v["theta"] = std::pow(pc, 1 - pc);
            v["a"] = std::pow(b / (std::pow(p - 1, pc - 1) * std::pow(one_minus, pc - 1)), -n / pc);
            v["quadratic_constant"] = hc_quadratic_constant(n, p);
            v["sharpness_constant_z"] = hc_sharpness_constant(f.n, p);
            v["sharpness_constant"] = v["sharpness_constant_z"] * f.dz_deps();
            v["dz_deps"] = f.dz_deps();
            v["alpha"] = 1;
            v["beta"] = p;
            v["t"] = 1;
            break;
        }
        case FamilyKind::ExtremizerHC: {
            const double k = std::pow((f.beta - f.alpha) / (f.beta * f.t), pc - 1);
            v["hc_deficit"] = 0;
            v["theta"] = f.alpha * k;
            v["theta0"] = f.beta * std::pow((f.beta - f.alpha) / (f.alpha * f.t), pc - 1);
            v["g_coefficient"] = k / pc;
            v["Qt_coefficient"] = k / pc * std::pow(f.beta / f.alpha, pc - 1);
            v["norm_alpha_pow_alpha"] = std::exp(f.alpha * f.C) * sf::power_exponential_integral(n, pc, f.alpha * k / pc);
            v["a"] = std::exp(f.beta * f.C);
            v["distance"] = 0;
            break;
        }
        case FamilyKind::StretchLSI: {
            const double s = pc - f.eps;
            const double mass = n * omega / s * sf::gamma(n / s);
            const double flogf = -n * omega / s * sf::gamma(1 + n / s);
            const double grad = n * omega * std::pow(s, p - 1) / std::pow(p, p) * sf::gamma((p * (s - 1) + n) / s);
            const double L = p / n * std::pow((p - 1) / std::numbers::e, p - 1) *
                             std::pow(sf::gamma(n / pc + 1) * omega, -p / n);
            const double ent = flogf - mass * std::log(mass);
            v["normp_pow_p"] = mass;
            v["int_fp_log_fp"] = flogf;
            v["entropy"] = ent;
            v["grad_norm_p"] = grad;
            v["L"] = L;
            v["lsi_deficit"] = n / p * std::log(L * grad / mass) - ent / mass;
            // printed closed form of the deficit
            v["lsi_deficit_closed"] = n / p * std::log(L * std::pow(s / p, p) * sf::gamma((p * (s - 1) + n) / s) / sf::gamma(n / s)) +
                                      n / s + std::log(n * omega / s * sf::gamma(n / s));
            const double C1 = pc * std::pow(n, pc - 1) * p / std::pow(s, pc) *
                              std::pow(sf::gamma(n / s) / sf::gamma((p * (s - 1) + n) / s), pc - 1);
            v["C1"] = C1;
            v["C2"] = 1.0 / (std::pow(C1 / p, n / pc) * sf::gamma(n / pc + 1) * omega);
            v["y"] = std::pow(p, p) / n * grad / mass;
            v["K"] = lsi_quadratic_constant(n, p);
            v["quadratic_constant"] = v["K"];
            v["sharpness_constant"] = lsi_sharpness_constant(f.n, p);
            break;
        }
        case FamilyKind::GaussQuadratic: {
            const double e = f.eps;
            v["norm1_mu"] = std::pow(1 + 2 * e, -n / 2);
            v["Q1_coefficient"] = e / (1 - 2 * e);
            v["norm2_mu_Q1g"] = std::pow((1 - 2 * e) / (1 + 2 * e), n / 4);
            v["ghc_deficit"] = std::pow(1 - 4 * e * e, -n / 4) - 1;
            v["norm2_mu_f"] = std::pow(1 + 2 * e, -n / 4);
            v["grad_norm2_mu"] = n * e * e * std::pow(1 + 2 * e, -n / 2 - 1);
            v["entropy_mu"] = -e * n * std::pow(1 + 2 * e, -n / 2 - 1) + std::pow(1 + 2 * e, -n / 2) * (n / 2) * std::log(1 + 2 * e);
            v["glsi_deficit"] = n * e - n / 2 * std::log(1 + 2 * e);
            v["a"] = std::pow((1 - 2 * e) / (1 + 2 * e), n / 2);
            v["k"] = 1;
            v["quadratic_constant"] = n;
            v["sharpness_constant"] = gauss_sharpness_constant(f.n);
            break;
        }
        case FamilyKind::GaussLinear: {
            const double v2 = f.x0[0] * f.x0[0] + (f.n >= 2 ? f.x0[1] * f.x0[1] : 0.0);
            const double al = f.alpha, t = f.t;
            v["ghc_deficit"] = 0;
            v["glsi_deficit"] = 0;
            v["norm_alpha_mu_pow_alpha"] = std::exp(al * f.C + al * al * v2 / 2);
            v["Qt_shift"] = -t * v2 / 2;
            v["a"] = std::exp((al + t) * (f.C - t * v2 / 2) + (al + t) * (al + t) * v2 / 2);
            v["k"] = std::exp(-al * al * v2 / 2);
            v["model_x0_0"] = al * f.x0[0];
            v["model_x0_1"] = f.n >= 2 ? al * f.x0[1] : 0.0;
            break;
        }
    }
    return v;
}

}  // namespace infconv
