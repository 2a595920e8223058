#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "infconv/deficits.hpp"
#include "infconv/families.hpp"
#include "infconv/io.hpp"

namespace infconv {

enum class ExperimentKind { Quadratic, Sharpness, Limit, Equality };
std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

// start, start * ratio, ... down to stop (inclusive within 1e-9 relative)
std::vector<double> geometric_ladder(double start, double stop, double ratio);

// Config layout:
//   [experiment] kind, output, strict, noise, eps_max, tolerance, pairs, seed
//   [family]     kind, n (list), p (list), eps, C, x0
//   [params]     deficit = hc|lsi|ghc|glsi, alpha, beta (number or "p"), t
//   [ladder]     values (list) | start, stop, ratio
//   [grid]       N, extent, interp, sampled = 0|1
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Quadratic;
    Family family;
    std::vector<int> ns{1};
    std::vector<double> ps{2.0};
    std::string deficit;  // empty: chosen by family kind
    double alpha = 1.0, t = 1.0;
    double beta = 0.0;    // 0: beta = p
    std::vector<double> ladder;
    GridSpec grid;
    bool sampled = false;
    double eps_max = kInf;
    double noise = 1e-12;      // quadrature noise level of a deficit
    double tolerance = 0.01;   // limit check
    std::string output;
    std::uint64_t seed = 1;

    static ExperimentConfig from(const Config& c);
    void validate() const;
    std::vector<ExperimentConfig> expand() const;  // one config per (n, p)
    std::string deficit_kind() const;
    HCParams hc() const;  // uses ps.front()
};

struct RatePoint {
    double eps = 0.0;
    double deficit = 0.0;
    double distance = 0.0;
    double variable = 0.0;  // sharpness variable: z - 1 for PowerHC, eps otherwise
    std::string error;
};

struct RateFit {
    std::string family;
    int n = 1;
    double p = 2.0;
    std::vector<RatePoint> points;
    double slope = 0.0;       // d log(distance) / d log(deficit) on the window
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t window_first = 0, window_last = 0;  // inclusive indices into points
    std::size_t window_size = 0;
    double quad_constant = 0.0;  // deficit / eps^2 at the smallest eps of the window
    double quad_target = 0.0;
    double distance_constant = 0.0;  // distance / variable at the smallest eps of the window
    double distance_target = 0.0;
    bool flagged = false;
    std::string note;

    std::string to_record(const std::string& prefix = "") const;
};

// Window: drop the two largest eps, eps >= eps_max, failed points, and deficit <= 100 noise.
RateFit fit_rate(std::vector<RatePoint> points, double noise, double eps_max = kInf);

// One ladder point (deficit and fitted model distance) for a family member.
RatePoint measure_point(const ExperimentConfig& c, const Family& member);

RateFit run_quadratic_rate(const ExperimentConfig& c);
RateFit run_sharpness(const ExperimentConfig& c);

struct Record {
    std::vector<std::pair<std::string, std::string>> kv;
    void add(const std::string& k, double v);
    void add(const std::string& k, const std::string& v);
    std::string str() const;
};

struct LimitCheck {
    std::string family;
    int n = 1;
    double p = 2.0;
    LimitResult result;
    std::vector<double> tau_ratio, alt_ratio;  // delta/tau and delta/t (yt+1)/y
    double tau_agreement = 0.0;                 // max relative difference of the two
    double relative_error = 0.0;
    bool pass = false;
    Record record() const;
};
LimitCheck run_limit_check(const ExperimentConfig& c);

struct AuditRow {
    std::string label;
    int n = 1;
    double p = 2.0, alpha = 0.0, beta = 0.0, t = 0.0;
    double deficit = 0.0, distance = 0.0;
    Point x0{0.0, 0.0}, planted{0.0, 0.0};
    bool expect_zero = true;
    bool pass = false;
    std::string note;
};
struct EqualityAudit {
    std::vector<AuditRow> rows;
    bool pass = true;
    Record record() const;
};
EqualityAudit run_equality_audit(const ExperimentConfig& c);

// CSV emitters (fixed columns, one row per ladder point / case)
void write_rate_csv(std::ostream& out, const std::vector<RateFit>& fits);
void write_limit_csv(std::ostream& out, const std::vector<LimitCheck>& checks);
void write_audit_csv(std::ostream& out, const EqualityAudit& audit);

// Runs the configured experiment over its matrix, writes the CSV (to c.output or csv_path
// if nonempty, stdout-free) and a summary record to `summary`. Returns the exit code.
int run_experiment(const Config& config, bool strict, std::ostream& summary, const std::string& csv_path = "");

}  // namespace infconv
