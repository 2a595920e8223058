#pragma once

#include <map>
#include <string>
#include <vector>

#include "infconv/funcrep.hpp"

namespace infconv {

struct HCParams {
    double p = 2.0;
    double t = 1.0;
    double alpha = 1.0;
    double beta = 2.0;

    double p_conj() const { return p / (p - 1.0); }
    double lambda() const { return alpha / beta; }
    double tau() const { return std::min(alpha / beta, 1.0 - alpha / beta); }
    void validate() const;
};

struct DeficitReport {
    std::string kind;
    double deficit = 0.0;
    double constant_used = 0.0;
    std::map<std::string, double> norms;   // log-domain intermediates
    std::map<std::string, double> params;
    std::vector<std::string> warnings;

    std::string to_record() const;  // "key = value" lines
};

// Values in [-kDeficitClamp, 0) are clamped to 0 with a warning; below that is an error.
inline constexpr double kDeficitClamp = 1e-9;
struct NegativeDeficitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double log_hc_optimal_constant(int n, const HCParams& hc);
double hc_optimal_constant(int n, const HCParams& hc);
double lsi_optimal_constant(double n, double p);

DeficitReport hc_deficit(const RadialFunction& g, const HCParams& hc);
DeficitReport hc_deficit(const CartesianFunction& g, const HCParams& hc);
// sampled input: Q_t g by the grid solver
DeficitReport hc_deficit(const RadialProfile& g, const HCParams& hc);

// f = e^{logf}
DeficitReport lsi_deficit(const RadialFunction& logf, double p);
DeficitReport lsi_deficit(const CartesianFunction& logf, double p);

// (1/n) \int e^g |grad g|^p / \int e^g, and the equivalent (p^p/n) \int |grad f|^p / ||f||_p^p, f = e^{g/p}
double y_value(const RadialFunction& g, double p);
double y_value_gradient_form(const RadialFunction& g, double p);
double y_value(const CartesianFunction& g, double p);

DeficitReport ghc_deficit(const RadialFunction& g, double alpha, double t);
DeficitReport ghc_deficit(const CartesianFunction& g, double alpha, double t);
DeficitReport glsi_deficit(const RadialFunction& logf);
DeficitReport glsi_deficit(const CartesianFunction& logf);

struct LimitResult {
    double limit = 0.0;    // extrapolated ratio at t = 0
    double target = 0.0;
    double extrapolation_error = 0.0;  // |first-order extrapolant - second-order extrapolant|
    double y = 0.0;
    std::vector<double> ts, ratios;
};

// delta^HC_{p,t,1,1+yt}(g) / t along the ladder vs y delta^LSI(e^{g/p})
LimitResult hc_lsi_limit(const RadialFunction& g, double p, const std::vector<double>& t_ladder);
// delta^GHC_{1,t}(g) / t vs delta^GLSI(e^{g/2})
LimitResult ghc_glsi_limit(const RadialFunction& g, const std::vector<double>& t_ladder);
LimitResult ghc_glsi_limit(const CartesianFunction& g, const std::vector<double>& t_ladder);

// Richardson extrapolation of ratios(t) to t = 0 assuming a first-order error.
double extrapolate_first_order(const std::vector<double>& ts, const std::vector<double>& vals, double* err = nullptr);

}  // namespace infconv
