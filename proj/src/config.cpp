#include "detnodes/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "detnodes/errors.hpp"

namespace detnodes {

namespace {

enum class Kind { text, number, integer, flag, list, modes, placement, forcing };

struct KeySpec {
    ConfigKey key;
    Kind kind;
};

const std::vector<KeySpec>& specs()
{
    static const std::vector<KeySpec> table = {
        {{"scenario", "", "run label used for the output directory"}, Kind::text},
        {{"grid", "256", "cells per axis"}, Kind::integer},
        {{"lx", "1", "domain width"}, Kind::number},
        {{"ly", "1", "domain height"}, Kind::number},
        {{"k", "1", "diffusion coefficient"}, Kind::number},
        {{"p", "3", "nonlinearity exponent"}, Kind::number},
        {{"dt", "0.001", "time step"}, Kind::number},
        {{"T", "20", "horizon"}, Kind::number},
        {{"t0", "1", "start of the M-bound window"}, Kind::number},
        {{"nonlinearity", "on", "explicit |u|^{p-1}u term"}, Kind::flag},
        {{"sample_every", "25", "steps between stored snapshots"}, Kind::integer},
        {{"u0", "0.06:1:1,0.02:1:2", "initial data of u"}, Kind::modes},
        {{"v0", "-0.04:1:1,0.01:2:1", "initial data of v"}, Kind::modes},
        {{"forcing", "constant", "zero | constant | converging"}, Kind::forcing},
        {{"forcing_base", "1:1:1", "stationary part of f"}, Kind::modes},
        {{"forcing_transient", "0.5:2:1", "decaying part of f (converging)"}, Kind::modes},
        {{"forcing_rate", "1", "decay rate of the transient"}, Kind::number},
        {{"g_transient", "", "extra decaying part of g; empty means g = f"}, Kind::modes},
        {{"nodes_density", "0.09", "target node density"}, Kind::number},
        {{"placement", "interior", "interior | closed"}, Kind::placement},
        {{"densities", "0.7,0.35,0.18,0.09", "sweep densities"}, Kind::list},
        {{"tol", "0.001", "coincidence / convergence tolerance"}, Kind::number},
        {{"tol_V", "0.001", "H1 tolerance of the pair difference"}, Kind::number},
        {{"tol_C", "0.01", "Hoelder quotient tolerance"}, Kind::number},
        {{"node_tol", "0.0001", "node discrepancy tolerance"}, Kind::number},
        {{"energy_tol", "0.05", "energy inequality tolerance"}, Kind::number},
        {{"gronwall_tol", "0.05", "Gronwall envelope tolerance"}, Kind::number},
        {{"newton_tol", "1e-10", "Newton residual tolerance"}, Kind::number},
        {{"lemma_grid", "128", "cells per axis for constant estimation"}, Kind::integer},
        {{"lemma_J", "16", "mode cutoff of the function family"}, Kind::integer},
        {{"lemma_count", "100", "family size"}, Kind::integer},
        {{"lemma_ascent", "on", "worst-case ascent during estimation"}, Kind::flag},
        {{"seed", "1", "family seed"}, Kind::integer},
        {{"C_B", "", "nonlinearity constant (estimated when absent)"}, Kind::number},
        {{"C1", "", "sup lemma constant"}, Kind::number},
        {{"C2", "", "l2 lemma node constant"}, Kind::number},
        {{"C3", "", "l2 lemma density constant"}, Kind::number},
        {{"C4", "", "h1 lemma node constant"}, Kind::number},
        {{"C5", "", "h1 lemma density constant"}, Kind::number},
        {{"a1", "", "D(A)/H1 lower equivalence constant"}, Kind::number},
        {{"a4", "", "a-norm/H1 upper equivalence constant"}, Kind::number},
        {{"M_f", "", "M bound of u"}, Kind::number},
        {{"M_g", "", "M bound of v"}, Kind::number},
        {{"M_finf", "", "M bound of the limit forcing"}, Kind::number},
    };
    return table;
}

const KeySpec* find_spec(const std::string& name)
{
    for (const KeySpec& s : specs()) {
        if (s.key.name == name) return &s;
    }
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(int line)
{
    return line > 0 ? "line " + std::to_string(line) + ": " : "";
}

bool parse_double(const std::string& s, double& out)
{
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& s, int& out)
{
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

std::vector<Mode> parse_modes(const std::string& s, const std::string& name, int line)
{
    std::vector<Mode> modes;
    if (trim(s).empty()) return modes;
    for (const std::string& term : split(s, ',')) {
        const std::vector<std::string> f = split(term, ':');
        Mode m{};
        if (f.size() != 3 || !parse_double(f[0], m.amplitude) || !parse_int(f[1], m.j) || !parse_int(f[2], m.k) ||
            m.j < 1 || m.k < 1) {
            throw ConfigError(where(line) + name + ": cannot parse mode term '" + term + "' (expected amp:j:k)");
        }
        modes.push_back(m);
    }
    return modes;
}

void validate(const KeySpec& spec, const std::string& value, int line)
{
    const std::string& name = spec.key.name;
    const std::string prefix = where(line);
    switch (spec.kind) {
    case Kind::text:
        if (value.empty()) throw ConfigError(prefix + name + " must not be empty");
        return;
    case Kind::number: {
        double v = 0.0;
        if (!parse_double(value, v)) {
            throw ConfigError(prefix + "cannot parse " + name + " = '" + value + "' as a number");
        }
        if (name == "p" && !(v > 1.0)) throw ConfigError(prefix + "p must exceed 1");
        static const char* positive[] = {"k", "dt", "T", "lx", "ly", "nodes_density", "tol_V", "tol_C", "node_tol",
                                         "energy_tol", "gronwall_tol", "newton_tol", "forcing_rate", "C_B", "C1",
                                         "C2", "C3", "C4", "C5", "a1", "a4"};
        for (const char* p : positive) {
            if (name == p && !(v > 0.0)) throw ConfigError(prefix + name + " must be positive");
        }
        if ((name == "t0" || name == "tol" || name == "M_f" || name == "M_g" || name == "M_finf") && v < 0.0) {
            throw ConfigError(prefix + name + " must be non-negative");
        }
        return;
    }
    case Kind::integer: {
        int v = 0;
        if (!parse_int(value, v)) {
            throw ConfigError(prefix + "cannot parse " + name + " = '" + value + "' as an integer");
        }
        if (name == "grid" || name == "lemma_grid") {
            if (v < 4) throw ConfigError(prefix + name + " must be at least 4 cells");
        } else if (name != "seed" && v < 1) {
            throw ConfigError(prefix + name + " must be positive");
        }
        if (name == "seed" && v < 0) throw ConfigError(prefix + "seed must be non-negative");
        return;
    }
    case Kind::flag:
        if (value != "on" && value != "off" && value != "true" && value != "false") {
            throw ConfigError(prefix + name + " must be on/off");
        }
        return;
    case Kind::list:
        for (const std::string& part : split(value, ',')) {
            double v = 0.0;
            if (!parse_double(part, v) || !(v > 0.0)) {
                throw ConfigError(prefix + name + ": cannot parse positive number '" + part + "'");
            }
        }
        return;
    case Kind::modes:
        parse_modes(value, name, line);
        return;
    case Kind::placement:
        if (value != "interior" && value != "closed") {
            throw ConfigError(prefix + "placement must be interior or closed");
        }
        return;
    case Kind::forcing:
        if (value != "zero" && value != "constant" && value != "converging") {
            throw ConfigError(prefix + "forcing must be zero, constant or converging");
        }
        return;
    }
}

}  // namespace

const std::vector<ConfigKey>& RunConfig::keys()
{
    static const std::vector<ConfigKey> out = [] {
        std::vector<ConfigKey> k;
        for (const KeySpec& s : specs()) k.push_back(s.key);
        return k;
    }();
    return out;
}

void RunConfig::assign(const std::string& name, const std::string& value, int line)
{
    const KeySpec* spec = find_spec(name);
    if (!spec) throw ConfigError(where(line) + "unknown key '" + name + "'");
    validate(*spec, value, line);
    values_[name] = {value, line};
}

void RunConfig::set(const std::string& name, const std::string& value)
{
    assign(name, value, 0);
}

bool RunConfig::has(const std::string& name) const
{
    if (values_.contains(name)) return true;
    const KeySpec* spec = find_spec(name);
    return spec && !spec->key.default_value.empty();
}

std::string RunConfig::get(const std::string& name) const
{
    const auto it = values_.find(name);
    if (it != values_.end()) return it->second.text;
    const KeySpec* spec = find_spec(name);
    if (!spec) throw ConfigError("unknown key '" + name + "'");
    if (spec->key.default_value.empty() && spec->kind != Kind::modes) {
        throw ConfigError("missing required key '" + name + "'");
    }
    return spec->key.default_value;
}

double RunConfig::number(const std::string& name) const
{
    double v = 0.0;
    parse_double(get(name), v);
    return v;
}

int RunConfig::integer(const std::string& name) const
{
    int v = 0;
    parse_int(get(name), v);
    return v;
}

bool RunConfig::flag(const std::string& name) const
{
    const std::string v = get(name);
    return v == "on" || v == "true";
}

std::vector<double> RunConfig::list(const std::string& name) const
{
    std::vector<double> out;
    for (const std::string& part : split(get(name), ',')) {
        double v = 0.0;
        parse_double(part, v);
        out.push_back(v);
    }
    return out;
}

std::vector<Mode> RunConfig::modes(const std::string& name) const
{
    return parse_modes(get(name), name, 0);
}

void RunConfig::require(const std::vector<std::string>& names) const
{
    for (const std::string& n : names) {
        if (!values_.contains(n)) {
            const KeySpec* spec = find_spec(n);
            if (!spec || spec->key.default_value.empty()) throw ConfigError("missing required key '" + n + "'");
        }
    }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const KeySpec& s : specs()) {
        const auto it = values_.find(s.key.name);
        if (it != values_.end()) {
            out.emplace_back(s.key.name, it->second.text);
        } else if (!s.key.default_value.empty()) {
            out.emplace_back(s.key.name, s.key.default_value);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Grid RunConfig::grid() const
{
    const int cells = integer("grid");
    return make_grid(Domain(number("lx"), number("ly")), cells - 1, cells - 1);
}

SolverConfig RunConfig::solver() const
{
    SolverConfig c;
    c.k = number("k");
    c.p = number("p");
    c.dt = number("dt");
    c.T = number("T");
    c.t0 = number("t0");
    c.nonlinearity_on = flag("nonlinearity");
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where(line) + "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(where(line) + "empty key");
        const auto prev = cfg.values_.find(key);
        if (prev != cfg.values_.end()) {
            throw ConfigError("duplicate key '" + key + "' on line " + std::to_string(prev->second.line) +
                              " and line " + std::to_string(line));
        }
        cfg.assign(key, value, line);
    }
    return cfg;
}

}  // namespace detnodes
