#pragma once

#include <cstdio>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "infconv/funcrep.hpp"

namespace infconv {

// ---- function files --------------------------------------------------------
//
//   # n=<dim> p=<p> tail=<c1>,<c2>,<q>
//   r g(r)            radial profile (first column starts at 0, nondecreasing, nonnegative)
//   x g(x)            1D grid (uniform spacing)
//   x y g(x,y)        2D grid (uniform, x fastest)
//
// Optional header keys: layout=radial|grid, center=<a>;<b> (tail center), interp=linear|quintic.
// tail=none or a missing tail key means no tail.

struct FunctionFile {
    int n = 1;
    double p = 2.0;
    std::optional<TailBound> tail;
    Point center{0.0, 0.0};
    Interpolation interp = Interpolation::Linear;
    std::variant<std::monostate, RadialProfile, GridFunction> data;  // monostate until parsed

    bool is_radial() const { return std::holds_alternative<RadialProfile>(data); }
    const RadialProfile& radial() const { return std::get<RadialProfile>(data); }
    const GridFunction& grid() const { return std::get<GridFunction>(data); }
};

FunctionFile read_function_file(const std::string& path);
FunctionFile parse_function_text(std::istream& in);
void write_function_file(const std::string& path, const RadialProfile& g, double p);
void write_function_file(const std::string& path, const GridFunction& g, double p);
void write_function(std::ostream& out, const RadialProfile& g, double p);
void write_function(std::ostream& out, const GridFunction& g, double p);

// ---- config ----------------------------------------------------------------
//
// [section]
// key = value        # or ; starts a comment
// Keys before the first section header live in section "".

class Config {
public:
    static Config parse(std::istream& in);
    static Config read(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key, double fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key,
                                std::vector<double> fallback) const;  // comma separated
    void set(const std::string& section, const std::string& key, const std::string& value);
    const std::map<std::string, std::map<std::string, std::string>>& sections() const { return s_; }

private:
    std::map<std::string, std::map<std::string, std::string>> s_;
};

// ---- csv -------------------------------------------------------------------

std::string format_number(double v);  // shortest round-trip, nan/inf spelled out

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    std::size_t columns() const { return width_; }

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace infconv
