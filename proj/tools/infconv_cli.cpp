#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "infconv/deficits.hpp"
#include "infconv/extremizer.hpp"
#include "infconv/families.hpp"
#include "infconv/harness.hpp"
#include "infconv/hopflax.hpp"
#include "infconv/io.hpp"
#include "infconv/pl.hpp"

using namespace infconv;

namespace {

// The input is always the exponent g of a density e^g. lsi works on f = e^{g/p}, glsi on f = e^{g/2}.
struct Input {
    bool radial = true;
    RadialFunction r;
    CartesianFunction c;
    int n = 1;
    double p = 2.0;
    std::optional<Family> family;
};

struct Source {
    std::string family, input;
    std::optional<int> n;
    std::optional<double> p;
};

void add_source(CLI::App* sub, Source& s, const char* input_flag = "--input") {
    auto* fam = sub->add_option("--family", s.family, "family spec, e.g. PowerHC:n=1,p=2,eps=0.01");
    auto* in = sub->add_option(input_flag, s.input, "function file");
    fam->excludes(in);
    sub->add_option("--n", s.n, "dimension (overrides the file header)");
    sub->add_option("--p", s.p, "exponent p (overrides the spec or header)");
}

Input load(const Source& s) {
    Input in;
    if (!s.family.empty()) {
        Family f = Family::parse(s.family);
        if (s.n) f.n = *s.n;
        if (s.p) f.p = *s.p;
        f.validate();
        in.family = f;
        in.n = f.n;
        in.p = f.p;
        in.radial = f.radial();
        if (in.radial) in.r = radial_member(f);
        else in.c = cartesian_member(f);
        return in;
    }
    if (s.input.empty()) throw CLI::ValidationError("one of --family or an input file is required");
    FunctionFile file = read_function_file(s.input);
    in.p = s.p.value_or(file.p);
    if (file.is_radial()) {
        const RadialProfile& prof = file.radial();
        const int n = s.n.value_or(prof.dim());
        RadialProfile use(n, prof.r(), prof.logvals(), prof.tail(), prof.interpolation());
        in.r = RadialFunction::from_profile(use);
        in.n = n;
    } else {
        if (s.n && *s.n != file.grid().dim()) throw CLI::ValidationError("--n does not match the grid dimension");
        in.radial = false;
        in.c = CartesianFunction::from_grid(file.grid());
        in.c.center = file.center;
        in.n = file.grid().dim();
    }
    return in;
}

Point parse_point(const std::string& s) {
    Point x{0.0, 0.0};
    if (s.empty()) return x;
    const auto semi = s.find(';');
    x[0] = std::stod(s.substr(0, semi));
    if (semi != std::string::npos) x[1] = std::stod(s.substr(semi + 1));
    return x;
}

std::string num(double v) { return format_number(v); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"infconv: Hopf-Lax semigroup, hypercontractivity and log-Sobolev deficits"};
    app.require_subcommand(1);

    // deficit
    auto* def = app.add_subcommand("deficit", "print a deficit record");
    std::string def_kind;
    Source def_src;
    std::optional<double> def_alpha, def_beta, def_t;
    def->add_option("kind", def_kind, "hc | lsi | ghc | glsi")->required()->check(CLI::IsMember({"hc", "lsi", "ghc", "glsi"}));
    add_source(def, def_src);
    def->add_option("--alpha", def_alpha);
    def->add_option("--beta", def_beta, "default p");
    def->add_option("--t", def_t);

    // evolve
    auto* evo = app.add_subcommand("evolve", "write Q_t g in the function file format");
    std::string evo_input, evo_method = "fast", evo_output;
    std::optional<double> evo_p;
    double evo_t = 1.0;
    evo->add_option("--input", evo_input)->required();
    evo->add_option("--p", evo_p, "default from the header");
    evo->add_option("--t", evo_t)->required();
    evo->add_option("--method", evo_method)->check(CLI::IsMember({"brute", "fast", "radial"}));
    evo->add_option("--output", evo_output, "default stdout");

    // fit-extremizer
    auto* fit = app.add_subcommand("fit-extremizer", "fit the extremizer model and print its parameters");
    std::string fit_kind;
    Source fit_src;
    double fit_alpha = 1.0, fit_t = 1.0, fit_spacing = 0.0, fit_half = 0.0;
    std::optional<double> fit_beta;
    fit->add_option("--kind", fit_kind)->required()->check(CLI::IsMember({"hc", "lsi", "ghc"}));
    add_source(fit, fit_src);
    fit->add_option("--alpha", fit_alpha);
    fit->add_option("--beta", fit_beta, "default p");
    fit->add_option("--t", fit_t);
    fit->add_option("--spacing", fit_spacing, "translation scan step");
    fit->add_option("--half-width", fit_half, "translation scan half width");

    // rate
    auto* rate = app.add_subcommand("rate", "run an experiment: CSV plus a summary record");
    std::string rate_exp, rate_config, rate_output;
    bool rate_strict = false;
    rate->add_option("--experiment", rate_exp)->required()->check(CLI::IsMember({"quadratic", "sharpness", "limit", "equality"}));
    rate->add_option("--config", rate_config)->required()->check(CLI::ExistingFile);
    rate->add_option("--output", rate_output, "CSV path (overrides the config)");
    rate->add_flag("--strict", rate_strict, "exit 1 on flagged fits or failed checks");

    // pl
    auto* pl = app.add_subcommand("pl", "Prekopa-Leindler triples");
    std::string pl_mode, pl_triple = "hc", pl_u, pl_v, pl_w, pl_x0, pl_y0, pl_comp = "auto";
    Source pl_src;
    double pl_alpha = 1.0, pl_t = 1.0, pl_lambda = 0.5;
    std::optional<double> pl_beta;
    std::size_t pl_pairs = 10000;
    std::uint64_t pl_seed = 1;
    pl->add_option("mode", pl_mode, "check | epsilon | distances")->required()->check(CLI::IsMember({"check", "epsilon", "distances"}));
    add_source(pl, pl_src, "--input-g");
    pl->add_option("--triple", pl_triple, "hc | gauss")->check(CLI::IsMember({"hc", "gauss"}));
    pl->add_option("--alpha", pl_alpha);
    pl->add_option("--beta", pl_beta, "default p");
    pl->add_option("--t", pl_t);
    pl->add_option("--complementary", pl_comp)->check(CLI::IsMember({"auto", "on", "off"}));
    pl->add_option("--input-u", pl_u, "radial u file (explicit triple)");
    pl->add_option("--input-v", pl_v);
    pl->add_option("--input-w", pl_w);
    pl->add_option("--lambda", pl_lambda, "lambda of an explicit triple");
    pl->add_option("--pairs", pl_pairs);
    pl->add_option("--seed", pl_seed);
    pl->add_option("--x0", pl_x0, "translation of the first conclusion term (a;b)");
    pl->add_option("--y0", pl_y0, "translation of the second conclusion term (a;b)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (def->parsed()) {
            Input in = load(def_src);
            // an ExtremizerHC member defaults to the parameters it was built for
            const bool own = in.family && in.family->kind == FamilyKind::ExtremizerHC;
            const double alpha = def_alpha.value_or(own ? in.family->alpha : 1.0);
            const double t = def_t.value_or(own ? in.family->t : 1.0);
            DeficitReport rep;
            if (def_kind == "hc") {
                const HCParams hc{in.p, t, alpha, def_beta.value_or(own ? in.family->beta : in.p)};
                rep = in.radial ? hc_deficit(in.r, hc) : hc_deficit(in.c, hc);
            } else if (def_kind == "lsi") {
                rep = in.radial ? lsi_deficit(affine_exponent(in.r, 1 / in.p), in.p)
                                : lsi_deficit(affine_exponent(in.c, 1 / in.p), in.p);
            } else if (def_kind == "ghc") {
                rep = in.radial ? ghc_deficit(in.r, alpha, t) : ghc_deficit(in.c, alpha, t);
            } else {
                rep = in.radial ? glsi_deficit(affine_exponent(in.r, 0.5)) : glsi_deficit(affine_exponent(in.c, 0.5));
            }
            std::cout << rep.to_record();
            if (in.family) std::cout << "family = " << in.family->to_spec() << "\n";
            return 0;
        }
        if (evo->parsed()) {
            FunctionFile file = read_function_file(evo_input);
            const double p = evo_p.value_or(file.p);
            const HopfLaxParams hp = HopfLaxParams::make(p, evo_t);
            std::ofstream fout;
            if (!evo_output.empty()) {
                fout.open(evo_output);
                if (!fout) throw std::runtime_error("cannot write " + evo_output);
            }
            std::ostream& out = evo_output.empty() ? std::cout : fout;
            if (file.is_radial()) {
                const RadialProfile& g = file.radial();
                RadialProfile q = evo_method == "brute"  ? inf_convolve_bruteforce(g, hp)
                                  : evo_method == "fast" ? inf_convolve_fast(g, hp)
                                                         : radial_inf_convolve(g, hp);
                write_function(out, q, p);
            } else {
                if (evo_method == "radial") throw std::invalid_argument("evolve: --method radial needs a radial profile");
                const GridFunction& g = file.grid();
                write_function(out, evo_method == "brute" ? inf_convolve_bruteforce(g, hp) : inf_convolve_fast(g, hp), p);
            }
            return 0;
        }
        if (fit->parsed()) {
            Input in = load(fit_src);
            ExtremizerParams e;
            const HCParams hc{in.p, fit_t, fit_alpha, fit_beta.value_or(in.p)};
            if (in.radial) {
                RadialFunction g = fit_kind == "lsi" ? affine_exponent(in.r, 1 / in.p) : in.r;
                e = fit_kind == "hc" ? hc_params(g, hc) : fit_kind == "lsi" ? lsi_params(g, in.p) : ghc_params(g, fit_alpha, fit_t);
                FitResult r = fit_translation(g, e);
                e.x0 = r.x0;
                std::cout << e.to_record() << "distance = " << num(r.distance) << "\n";
            } else {
                CartesianFunction g = fit_kind == "lsi" ? affine_exponent(in.c, 1 / in.p) : in.c;
                e = fit_kind == "hc" ? hc_params(g, hc) : fit_kind == "lsi" ? lsi_params(g, in.p) : ghc_params(g, fit_alpha, fit_t);
                FitOptions opt;
                opt.spacing = fit_spacing;
                opt.half_width = fit_half;
                FitResult r = fit_translation(g, e, opt);
                e.x0 = r.x0;
                std::cout << e.to_record() << "distance = " << num(r.distance) << "\n"
                          << "distance_at_zero = " << num(r.distance_at_zero) << "\n"
                          << "multimodal = " << (r.multimodal ? 1 : 0) << "\n"
                          << "candidates = " << r.candidates << "\n";
            }
            return 0;
        }
        if (rate->parsed()) {
            Config c = Config::read(rate_config);
            c.set("experiment", "kind", rate_exp);
            return run_experiment(c, rate_strict, std::cout, rate_output);
        }
        if (pl->parsed()) {
            const int comp = pl_comp == "auto" ? 0 : pl_comp == "on" ? 1 : -1;
            auto report = [&](const auto& T, Point x0, Point y0) {
                std::cout << "lambda = " << num(T.lambda) << "\n" << "complementary = " << (T.complementary ? 1 : 0) << "\n";
                if (pl_mode == "check") {
                    HypothesisCheck h = check_pl_hypothesis(T, pl_pairs, pl_seed);
                    std::cout << "worst_violation = " << num(h.worst) << "\n" << "pairs = " << h.pairs << "\n";
                } else if (pl_mode == "epsilon") {
                    std::cout << "epsilon = " << num(pl_epsilon(T)) << "\n";
                } else {
                    std::pair<double, double> d;
                    if constexpr (std::is_same_v<std::decay_t<decltype(T)>, RadialTriple>) {
                        (void)x0;
                        (void)y0;
                        d = pl_conclusion_distances(T);
                    } else {
                        d = pl_conclusion_distances(T, x0, y0);
                    }
                    std::cout << "a = " << num(T.a) << "\n"
                              << "distance_u_v = " << num(d.first) << "\n"
                              << "distance_w_v = " << num(d.second) << "\n";
                }
            };
            if (!pl_u.empty() || !pl_v.empty() || !pl_w.empty()) {
                if (pl_u.empty() || pl_v.empty() || pl_w.empty())
                    throw std::invalid_argument("pl: an explicit triple needs --input-u, --input-v and --input-w");
                auto rad = [](const std::string& path) {
                    FunctionFile f = read_function_file(path);
                    if (!f.is_radial()) throw std::invalid_argument("pl: explicit triples take radial profiles");
                    return RadialFunction::from_profile(f.radial());
                };
                RadialTriple T{rad(pl_u), rad(pl_v), rad(pl_w)};
                T.n = T.u.n;
                T.lambda = pl_lambda;
                T.a = std::exp(log_integral_exp(T.u, 1, T.measure) - log_integral_exp(T.v, 1, T.measure));
                report(T, {}, {});
                return 0;
            }
            Input in = load(pl_src);
            const HCParams hc{in.p, pl_t, pl_alpha, pl_beta.value_or(in.p)};
            const Point x0 = parse_point(pl_x0), y0 = parse_point(pl_y0);
            if (in.radial) {
                report(pl_triple == "hc" ? build_hc_triple(in.r, hc, comp) : build_gaussian_triple(in.r, pl_alpha, pl_t), x0, y0);
            } else {
                report(pl_triple == "hc" ? build_hc_triple(in.c, hc, comp) : build_gaussian_triple(in.c, pl_alpha, pl_t), x0, y0);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
