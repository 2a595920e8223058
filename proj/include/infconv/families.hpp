#pragma once

#include <map>
#include <string>
#include <string_view>

#include "infconv/funcrep.hpp"

namespace infconv {

enum class FamilyKind { ExtremizerHC, PowerHC, StretchLSI, GaussQuadratic, GaussLinear };

std::string to_string(FamilyKind k);
FamilyKind family_kind_from_string(std::string_view s);

// One member of a closed-form test family. Unused fields are ignored by a kind.
//   ExtremizerHC   g = C - ((beta-alpha)/(beta t))^{p'-1} |x - x0|^{p'} / p'
//   PowerHC        g = -((p')^{-p'} + eps) |x|^{p'}
//   StretchLSI     g = p log f,  f = exp(-|x|^{p'-eps} / p)
//   GaussQuadratic g = -eps |x|^2   (f = e^{g/2} = e^{-eps |x|^2 / 2})
//   GaussLinear    g = <x, x0> + C
struct Family {
    FamilyKind kind = FamilyKind::PowerHC;
    int n = 1;
    double p = 2.0;
    double eps = 0.0;
    double alpha = 1.0, beta = 2.0, t = 1.0;
    double C = 0.0;
    Point x0{0.0, 0.0};

    double p_conj() const { return p / (p - 1.0); }
    // PowerHC accessors
    double b_eps() const;
    double z() const;
    double dz_deps() const;  // dz/deps at eps = 0
    double power_coefficient() const;  // coefficient c of -c |x|^q
    double exponent() const;           // q

    bool radial() const;  // x0 == 0 and kind != GaussLinear
    void validate() const;

    // "Kind:key=val,key=val"; x0 given as x0=a or x0=a;b
    static Family parse(std::string_view spec);
    std::string to_spec() const;
};

RadialFunction radial_member(const Family& f);
CartesianFunction cartesian_member(const Family& f);

struct GridSpec {
    std::size_t N = 4096;       // radial nodes, or nodes per axis for Cartesian grids
    double extent = 0.0;        // R for radial, half-width for Cartesian (0: automatic)
    Interpolation interp = Interpolation::Quintic;
};

RadialProfile sample_radial(const Family& f, const GridSpec& spec = {});
GridFunction sample_grid(const Family& f, const GridSpec& spec = {});

// Every closed form the family carries (names are stable record keys).
std::map<std::string, double> analytic_values(const Family& f);

// ---- limit targets (first-variation integrals) ----

// n omega_n * (1/p) \int_0^inf |n - (p')^{1/(1-p)} r^{p'}| e^{-(p')^{-p'} r^{p'}} r^{n-1} dr
// limit of distance / (z - 1) for PowerHC at (alpha, t, beta) = (1, 1, p)
double hc_first_variation_integrand(int n, double p, double r);
double hc_sharpness_constant(int n, double p);

// limit of distance / eps for StretchLSI with the normalized input f^p / ||f||_p^p
double lsi_first_variation_integrand(int n, double p, double r);
double lsi_sharpness_constant(int n, double p);
// the unnormalized variant (model mass fixed, input not normalized)
double lsi_first_variation_unnormalized_integrand(int n, double p, double r);

// \int |n - |x|^2| dmu
double gauss_first_variation_integrand(int n, double r);
double gauss_sharpness_constant(int n);

// K(n, p) of the quadratic LSI expansion (as printed) and the HC plateau constant
double lsi_quadratic_constant(double n, double p);
double hc_quadratic_constant(double n, double p);

}  // namespace infconv
