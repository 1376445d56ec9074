#pragma once

// Flat `key = value` experiment configuration with dotted section keys.
//
//   name = c4-nondegeneracy-q0
//   params.p = 2
//   grid.nx = 128
//   analyses = growth, nondeg
//   analysis.growth.type = growth_rate
//   analysis.growth.radii = 0.25, 0.125, 0.0625
//
// '#' starts a comment; blank lines are ignored; duplicate keys are an error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "deadcore/core.hpp"
#include "deadcore/error.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/field.hpp"

namespace deadcore {

/// Raised for malformed or inconsistent configurations; the message names the key path.
class ConfigError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline bool parse_double(const std::string& s, double& out)
{
    if (s == "inf" || s == "+inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    // Allow simple fractions such as 1/16.
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        double a, b;
        if (!parse_double(s.substr(0, slash), a) || !parse_double(s.substr(slash + 1), b) || b == 0.0)
            return false;
        out = a / b;
        return true;
    }
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace detail

/// Ordered key/value store with typed accessors.
class ConfigMap {
public:
    static ConfigMap parse(const std::string& text)
    {
        ConfigMap m;
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (m.values_.count(key))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            m.values_[key] = value;
        }
        return m;
    }

    static ConfigMap load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    /// Keys in sorted order, one per line.
    std::string serialize() const
    {
        std::ostringstream os;
        for (const auto& [k, v] : values_)
            os << k << " = " << v << '\n';
        return os.str();
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string str(const std::string& key) const
    {
        mark(key);
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError(key + ": required key missing");
        return it->second;
    }

    std::string str(const std::string& key, const std::string& fallback) const
    {
        mark(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double num(const std::string& key) const
    {
        double v;
        if (!detail::parse_double(str(key), v))
            throw ConfigError(key + ": expected a number, got '" + str(key) + "'");
        return v;
    }

    double num(const std::string& key, double fallback) const { return has(key) ? num(key) : (mark(key), fallback); }

    int integer(const std::string& key, int fallback) const
    {
        if (!has(key)) {
            mark(key);
            return fallback;
        }
        const double v = num(key);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ConfigError(key + ": expected an integer, got '" + str(key) + "'");
        return static_cast<int>(v);
    }

    bool flag(const std::string& key, bool fallback) const
    {
        if (!has(key)) {
            mark(key);
            return fallback;
        }
        const std::string v = str(key);
        if (v == "true" || v == "yes" || v == "1")
            return true;
        if (v == "false" || v == "no" || v == "0")
            return false;
        throw ConfigError(key + ": expected true/false, got '" + v + "'");
    }

    std::vector<std::string> list(const std::string& key) const
    {
        return has(key) ? detail::split_list(str(key)) : (mark(key), std::vector<std::string>{});
    }

    std::vector<double> numbers(const std::string& key) const
    {
        std::vector<double> out;
        for (const auto& item : list(key)) {
            double v;
            if (!detail::parse_double(item, v))
                throw ConfigError(key + ": expected a list of numbers, got '" + item + "'");
            out.push_back(v);
        }
        return out;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const
    {
        return has(key) ? numbers(key) : (mark(key), fallback);
    }

    /// Keys never read through an accessor.
    std::vector<std::string> unused() const
    {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k))
                out.push_back(k);
        return out;
    }

    bool operator==(const ConfigMap& o) const { return values_ == o.values_; }

private:
    void mark(const std::string& key) const { used_.insert(key); }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

enum class Source { solver, exact };

struct DataSpec {
    std::string initial = "constant";  ///< constant | exact | zero_interior | dead_ball | bump
    std::string boundary;              ///< constant | exact | zero; empty = derived from initial
    double value = 1.0;                ///< the boundary level j (and amplitude of the initial data)
    double radius = 0.25;              ///< dead_ball radius
};

struct ExactSpec {
    std::string kind = "halfspace";
    double t0 = 1.0;
    int sign = 1;
    double core_radius = 0.0;
    std::optional<double> constant;
    double a = 1.0, b = 2.0;
    std::vector<double> times;  ///< snapshot times for sampled closed forms
};

struct AnalysisSpec {
    std::string id;
    std::string type;
    std::string prefix;  ///< "analysis.<id>."
};

struct ExperimentConfig {
    ConfigMap raw;
    std::string name;
    Source source = Source::solver;
    ProblemParams params;
    GridSpec grid;
    int refine = 0;  ///< additional levels, each doubling nx
    DataSpec data;
    ExactSpec exact;
    bool write_snapshots = true;
    std::vector<AnalysisSpec> analyses;
};

inline const std::vector<std::string>& analysis_types()
{
    static const std::vector<std::string> types{
        "residual",      "residual_order", "barrier_check", "exact_match",  "positivity",       "conservation",
        "dead_core",     "growth_rate",    "nondegeneracy", "gradient_rate", "dyadic",          "liouville",
        "blowup",        "density",        "porosity",      "finite_speed", "energy_decay",     "comparison",
        "barrier_domination"};
    return types;
}

inline ClosedFormKind parse_kind(const std::string& s, const std::string& key)
{
    static const std::map<std::string, ClosedFormKind> kinds{
        {"ode_deadcore", ClosedFormKind::ode_deadcore},
        {"halfspace", ClosedFormKind::halfspace},
        {"radial", ClosedFormKind::radial},
        {"barrier_growth", ClosedFormKind::barrier_growth},
        {"barrier_nondeg", ClosedFormKind::barrier_nondeg},
        {"critical_exp_p2", ClosedFormKind::critical_exp_p2},
        {"critical_exp_general", ClosedFormKind::critical_exp_general},
        {"critical_time_p_gt2", ClosedFormKind::critical_time_p_gt2}};
    const auto it = kinds.find(s);
    if (it == kinds.end())
        throw ConfigError(key + ": unknown closed-form kind '" + s + "'");
    return it->second;
}

/// Builds the closed form named by exact.* for the given parameters.
inline ClosedForm make_closed_form(const ExperimentConfig& cfg)
{
    const ProblemParams& P = cfg.params;
    switch (parse_kind(cfg.exact.kind, "exact.kind")) {
    case ClosedFormKind::ode_deadcore: return make_ode_deadcore(P, cfg.exact.t0);
    case ClosedFormKind::halfspace: return make_halfspace(P, 0, cfg.exact.sign);
    case ClosedFormKind::radial: return make_radial(P, Point(P.dim, 0.0), cfg.exact.core_radius);
    case ClosedFormKind::barrier_growth: return make_barrier_growth(P, cfg.exact.a, cfg.exact.b);
    case ClosedFormKind::barrier_nondeg: return make_barrier_nondeg(P, cfg.exact.constant);
    case ClosedFormKind::critical_exp_p2: return critical_solutions(P, CriticalVariant::exp_sum);
    case ClosedFormKind::critical_exp_general: return critical_solutions(P, CriticalVariant::exp_direction);
    case ClosedFormKind::critical_time_p_gt2: return critical_solutions(P, CriticalVariant::time_power);
    }
    throw ConfigError("exact.kind: unsupported");
}

/// Parses and validates; every problem is reported with its key path.
inline ExperimentConfig load_config(const ConfigMap& raw)
{
    ExperimentConfig cfg;
    cfg.raw = raw;
    const ConfigMap& m = cfg.raw;
    std::vector<std::string> errors;
    auto guard = [&](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
    };

    guard([&] {
        cfg.name = m.str("name");
        if (cfg.name.empty() || cfg.name.find_first_of("/\\ ") != std::string::npos)
            throw ConfigError("name: must be a non-empty identifier without spaces or slashes");
    });
    guard([&] {
        const std::string s = m.str("source", "solver");
        if (s == "solver")
            cfg.source = Source::solver;
        else if (s == "exact")
            cfg.source = Source::exact;
        else
            throw ConfigError("source: expected 'solver' or 'exact', got '" + s + "'");
    });
    guard([&] {
        ProblemParams& P = cfg.params;
        P.p = m.num("params.p", 2.0);
        P.q = m.num("params.q", 0.0);
        P.dim = m.integer("params.dim", 1);
        const double lambda = m.num("params.lambda", 1.0);
        P.lambda_lo = m.num("params.lambda_lo", lambda);
        P.lambda_hi = m.num("params.lambda_hi", lambda);
        P.lambda0 = Modulus::constant(lambda);
        P.critical = m.flag("params.critical", false);
        try {
            P.validate();
        } catch (const Error& e) {
            throw ConfigError(std::string("params: ") + e.what());
        }
    });
    guard([&] {
        GridSpec& g = cfg.grid;
        const std::string geo = m.str("grid.geometry", "interval");
        if (geo == "interval") {
            g.geometry = Geometry::interval;
            g.xl = m.num("grid.xl", -1.0);
            g.xr = m.num("grid.xr", 1.0);
            g.dim = 1;
        } else if (geo == "radial") {
            g.geometry = Geometry::radial;
            g.xl = 0.0;
            g.xr = m.num("grid.radius", 1.0);
            g.dim = cfg.params.dim;
        } else {
            throw ConfigError("grid.geometry: expected 'interval' or 'radial', got '" + geo + "'");
        }
        g.nx = m.integer("grid.nx", 128);
        g.t_end = m.num("grid.t_end", 1.0);
        g.cfl_sigma = m.num("grid.cfl_sigma", 0.4);
        g.snapshot_every = m.num("grid.snapshot_every", 0.0);
        g.dt_max = m.num("grid.dt_max", std::numeric_limits<double>::infinity());
        cfg.refine = m.integer("grid.refine", 0);
        if (cfg.refine < 0 || cfg.refine > 3)
            throw ConfigError("grid.refine: expected 0..3");
        if (g.nx < 16)
            throw ConfigError("grid.nx: must be >= 16 (got " + std::to_string(g.nx) + ")");
        try {
            g.validate();
        } catch (const Error& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
    });
    guard([&] {
        cfg.data.initial = m.str("data.initial", "constant");
        cfg.data.boundary = m.str("data.boundary", "");
        cfg.data.value = m.num("data.value", 1.0);
        cfg.data.radius = m.num("data.radius", 0.25);
        static const std::set<std::string> initial{"constant", "exact", "zero_interior", "dead_ball", "bump"};
        static const std::set<std::string> boundary{"", "constant", "exact", "zero"};
        if (!initial.count(cfg.data.initial))
            throw ConfigError("data.initial: unknown selector '" + cfg.data.initial + "'");
        if (!boundary.count(cfg.data.boundary))
            throw ConfigError("data.boundary: unknown selector '" + cfg.data.boundary + "'");
        if (!(cfg.data.value >= 0.0))
            throw ConfigError("data.value: must be >= 0");
    });
    guard([&] {
        cfg.exact.kind = m.str("exact.kind", "halfspace");
        parse_kind(cfg.exact.kind, "exact.kind");
        cfg.exact.t0 = m.num("exact.t0", 1.0);
        cfg.exact.sign = m.integer("exact.sign", 1);
        cfg.exact.core_radius = m.num("exact.core_radius", 0.0);
        if (m.has("exact.constant"))
            cfg.exact.constant = m.num("exact.constant");
        cfg.exact.a = m.num("exact.a", 1.0);
        cfg.exact.b = m.num("exact.b", 2.0);
        cfg.exact.times = m.numbers("exact.times", {});
        for (std::size_t k = 1; k < cfg.exact.times.size(); ++k)
            if (!(cfg.exact.times[k] > cfg.exact.times[k - 1]))
                throw ConfigError("exact.times: must be strictly increasing");
    });
    cfg.write_snapshots = m.flag("output.snapshots", true);

    std::set<std::string> seen;
    for (const auto& id : m.list("analyses")) {
        AnalysisSpec a;
        a.id = id;
        a.prefix = "analysis." + id + ".";
        a.type = m.str(a.prefix + "type", id);
        if (!seen.insert(id).second)
            errors.push_back("analyses: duplicate id '" + id + "'");
        const auto& types = analysis_types();
        if (std::find(types.begin(), types.end(), a.type) == types.end())
            errors.push_back(a.prefix + "type: unknown analysis '" + a.type + "'");
        if (a.type == "energy_decay" && !cfg.params.critical)
            errors.push_back(a.prefix + "type: energy_decay requires params.critical = true");
        if ((a.type == "residual" || a.type == "residual_order" || a.type == "barrier_check") &&
            m.str("source", "solver") != "exact" && !m.has("exact.kind") && !m.has(a.prefix + "kind"))
            errors.push_back(a.prefix + "type: " + a.type + " needs exact.kind");
        if (a.type == "exact_match" && !m.has("exact.kind"))
            errors.push_back(a.prefix + "type: exact_match needs exact.kind");
        cfg.analyses.push_back(a);
    }
    // Every top-level key is read above; anything left over is unknown.  Analysis options are
    // read when the analysis runs, so here they only need a listed id.
    for (const auto& k : m.unused()) {
        if (k.rfind("analysis.", 0) == 0) {
            const auto dot = k.find('.', 9);
            const std::string id = k.substr(9, dot == std::string::npos ? std::string::npos : dot - 9);
            if (!seen.count(id))
                errors.push_back(k + ": analysis '" + id + "' is not listed in 'analyses'");
            continue;
        }
        errors.push_back(k + ": unknown key");
    }
    if (!errors.empty()) {
        std::string msg = "invalid configuration";
        for (const auto& e : errors)
            msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) { return load_config(ConfigMap::load(path)); }

}  // namespace deadcore
