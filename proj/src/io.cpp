#include "infconv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace infconv {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const char* what) {
    const std::string t = trim(s);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::invalid_argument(std::string(what) + ": not a number: '" + t + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

void parse_header(const std::string& line, FunctionFile& f, std::string& layout) {
    std::istringstream is(line.substr(1));
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;  // free text in comment lines
        const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "n") f.n = static_cast<int>(to_double(v, "header n"));
        else if (k == "p") f.p = to_double(v, "header p");
        else if (k == "tail") {
            if (v == "none") {
                f.tail.reset();
                continue;
            }
            auto parts = split(v, ',');
            if (parts.size() != 3) throw std::invalid_argument("header tail: expected c1,c2,q");
            f.tail = TailBound{to_double(parts[0], "tail c1"), to_double(parts[1], "tail c2"), to_double(parts[2], "tail q")};
        } else if (k == "center") {
            auto parts = split(v, ';');
            f.center[0] = to_double(parts.at(0), "center");
            if (parts.size() > 1) f.center[1] = to_double(parts[1], "center");
        } else if (k == "layout") {
            if (v != "radial" && v != "grid") throw std::invalid_argument("header layout: radial or grid");
            layout = v;
        } else if (k == "interp") {
            if (v == "linear") f.interp = Interpolation::Linear;
            else if (v == "quintic") f.interp = Interpolation::Quintic;
            else throw std::invalid_argument("header interp: linear or quintic");
        }
    }
}

// uniform axis from repeated coordinates (first-seen order)
std::vector<double> distinct_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

double uniform_spacing(const std::vector<double>& xs, const char* what) {
    if (xs.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least two nodes");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h) * 1e3))
            throw std::invalid_argument(std::string(what) + ": grid spacing is not uniform");
    return h;
}

}  // namespace

FunctionFile parse_function_text(std::istream& in) {
    FunctionFile f;
    std::string layout;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            parse_header(t, f, layout);
            continue;
        }
        std::istringstream is(t);
        std::vector<double> row;
        std::string tok;
        while (is >> tok) row.push_back(to_double(tok, "function file"));
        if (width == 0) width = row.size();
        if (row.size() != width || (width != 2 && width != 3))
            throw std::invalid_argument("function file: rows must have 2 or 3 columns consistently");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::invalid_argument("function file: need at least two rows");
    if (width == 3) {
        if (layout == "radial") throw std::invalid_argument("function file: radial layout takes two columns");
        std::vector<double> xs, ys;
        for (auto& r : rows) {
            xs.push_back(r[0]);
            ys.push_back(r[1]);
        }
        xs = distinct_sorted(xs);
        ys = distinct_sorted(ys);
        const double hx = uniform_spacing(xs, "x axis"), hy = uniform_spacing(ys, "y axis");
        if (std::abs(hx - hy) > 1e-9 * hx) throw std::invalid_argument("function file: x and y spacing differ");
        if (rows.size() != xs.size() * ys.size()) throw std::invalid_argument("function file: 2D grid is not complete");
        std::vector<double> vals(rows.size(), std::nan(""));
        for (auto& r : rows) {
            const auto i = static_cast<std::size_t>(std::llround((r[0] - xs.front()) / hx));
            const auto j = static_cast<std::size_t>(std::llround((r[1] - ys.front()) / hx));
            vals[i + xs.size() * j] = r[2];
        }
        if (f.n != 2) throw std::invalid_argument("function file: three columns require n=2");
        f.data = GridFunction(2, {xs.front(), ys.front()}, hx, {xs.size(), ys.size()}, std::move(vals), f.tail,
                              f.center, f.interp);
        return f;
    }
    std::vector<double> xs, gs;
    for (auto& r : rows) {
        xs.push_back(r[0]);
        gs.push_back(r[1]);
    }
    const bool any_negative = std::any_of(xs.begin(), xs.end(), [](double x) { return x < 0; });
    bool radial = layout.empty() ? (!any_negative && xs.front() == 0.0) : layout == "radial";
    if (layout.empty() && f.n > 1) radial = true;
    if (radial) {
        if (any_negative || xs.front() != 0.0) throw std::invalid_argument("function file: radial nodes start at r = 0");
        f.data = RadialProfile(f.n, std::move(xs), std::move(gs), f.tail, f.interp);
        return f;
    }
    if (f.n != 1) throw std::invalid_argument("function file: a 1D grid requires n=1");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("function file: nodes must increase");
    const double h = uniform_spacing(xs, "x axis");
    f.data = GridFunction(1, {xs.front(), 0.0}, h, {xs.size(), 1}, std::move(gs), f.tail, f.center, f.interp);
    return f;
}

FunctionFile read_function_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_function_text(in);
}

namespace {

void header(std::ostream& out, int n, double p, const std::optional<TailBound>& tail, const char* layout,
            Point center, Interpolation interp) {
    out << "# n=" << n << " p=" << format_number(p) << " tail=";
    if (tail) out << format_number(tail->c1) << ',' << format_number(tail->c2) << ',' << format_number(tail->q);
    else out << "none";
    out << " layout=" << layout;
    if (center[0] != 0.0 || center[1] != 0.0) out << " center=" << format_number(center[0]) << ';' << format_number(center[1]);
    out << " interp=" << (interp == Interpolation::Quintic ? "quintic" : "linear") << '\n';
}

}  // namespace

void write_function(std::ostream& out, const RadialProfile& g, double p) {
    header(out, g.dim(), p, g.tail(), "radial", {0.0, 0.0}, g.interpolation());
    for (std::size_t i = 0; i < g.size(); ++i) out << format_number(g.r()[i]) << ' ' << format_number(g.logvals()[i]) << '\n';
}

void write_function(std::ostream& out, const GridFunction& g, double p) {
    header(out, g.dim(), p, g.tail(), "grid", g.tail_center(), g.interpolation());
    const auto [nx, ny] = g.shape();
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            out << format_number(g.node(i, 0)) << ' ';
            if (g.dim() == 2) out << format_number(g.node(j, 1)) << ' ';
            out << format_number(g.at(i, j)) << '\n';
        }
}

void write_function_file(const std::string& path, const RadialProfile& g, double p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_function(out, g, p);
}

void write_function_file(const std::string& path, const GridFunction& g, double p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_function(out, g, p);
}

// ---- config ----------------------------------------------------------------

Config Config::parse(std::istream& in) {
    Config c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(t.substr(1, t.size() - 2));
            c.s_[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string k = trim(t.substr(0, eq));
        if (k.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        c.s_[section][k] = trim(t.substr(eq + 1));
    }
    return c;
}

Config Config::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = s_.find(section);
    return it != s_.end() && it->second.count(key);
}

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? s_.at(section).at(key) : fallback;
}

std::string Config::require(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw std::invalid_argument("config: missing [" + section + "] " + key);
    return s_.at(section).at(key);
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? to_double(s_.at(section).at(key), ("config " + key).c_str()) : fallback;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<double> out;
    for (auto& part : split(s_.at(section).at(key), ',')) out.push_back(to_double(part, ("config " + key).c_str()));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) { s_[section][key] = value; }

// ---- csv -------------------------------------------------------------------

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::invalid_argument("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char ch : c) {
                if (ch == '"') out_ << '"';
                out_ << ch;
            }
            out_ << '"';
        } else {
            out_ << c;
        }
    }
    out_ << '\n';
}

}  // namespace infconv
