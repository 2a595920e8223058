#pragma once

#include <cmath>
#include <string>

#include "infconv/deficits.hpp"
#include "infconv/funcrep.hpp"

namespace infconv {

enum class ExtremizerKind { HC, LSI, GaussianHC };

std::string to_string(ExtremizerKind k);
ExtremizerKind extremizer_kind_from_string(std::string_view s);

// Model and input normalization per kind:
//   HC          e^{-theta |x-x0|^{p'}/p'}        vs  a^{-alpha/beta} e^{alpha g}        (dx)
//   LSI         c2 e^{-p |x-x0|^{p'} / c1}       vs  f^p / ||f||_p^p, f = e^{logf}   (dx)
//   GaussianHC  k e^{<x, x0>}, k = e^{-|x0|^2/2} vs  a^{-alpha/(alpha+t)} e^{alpha g}  (dmu)
struct ExtremizerParams {
    ExtremizerKind kind = ExtremizerKind::HC;
    int n = 1;
    double p = 2.0;
    double alpha = 1.0, beta = 2.0, t = 1.0;
    double theta = 0.0;
    double a = 0.0;
    double log_a = 0.0;
    double c1 = 0.0, c2 = 0.0;
    Point x0{0.0, 0.0};

    double k() const { return std::exp(-0.5 * (x0[0] * x0[0] + x0[1] * x0[1])); }
    std::string to_record() const;
};

ExtremizerParams hc_params(const RadialFunction& g, const HCParams& hc);
ExtremizerParams hc_params(const CartesianFunction& g, const HCParams& hc);
ExtremizerParams lsi_params(const RadialFunction& logf, double p);
ExtremizerParams lsi_params(const CartesianFunction& logf, double p);
ExtremizerParams ghc_params(const RadialFunction& g, double alpha, double t);
ExtremizerParams ghc_params(const CartesianFunction& g, double alpha, double t);

// log of the model density at x (radial inputs: x = (r, 0) with x0 = 0)
double log_model(const ExtremizerParams& e, Point x);

// input is g (HC, GaussianHC) or logf (LSI)
double l1_model_distance(const RadialFunction& input, const ExtremizerParams& e);
double l1_model_distance(const CartesianFunction& input, const ExtremizerParams& e, Point x0);

struct FitOptions {
    double spacing = 0.0;     // coarse scan step (0: grid spacing, else scale / 8)
    double half_width = 0.0;  // scan box half width about the input center (0: automatic)
    int refine_levels = 6;    // pattern search down to spacing / 2^levels
};

struct FitResult {
    Point x0{0.0, 0.0};
    double distance = 0.0;
    double distance_at_zero = 0.0;
    bool multimodal = false;
    std::size_t candidates = 0;
};

FitResult fit_translation(const RadialFunction& input, const ExtremizerParams& e);
FitResult fit_translation(const CartesianFunction& input, const ExtremizerParams& e, const FitOptions& opt = {});

}  // namespace infconv
