#pragma once

// Configuration-driven experiments: build data, run the solver (or sample a closed form),
// apply the configured analyses, and write snapshots, reports and a summary table.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deadcore/analysis.hpp"
#include "deadcore/config.hpp"
#include "deadcore/core.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/field.hpp"
#include "deadcore/geometry.hpp"
#include "deadcore/solver.hpp"

namespace deadcore {

namespace fs = std::filesystem;

struct Level {
    int nx = 0;
    SpaceTimeField field;
    std::optional<RunResult> run;
};

struct ExperimentResult {
    std::string name;
    std::vector<SummaryRow> rows;
    json reports = json::array();
    std::string error;  ///< "<stage>: <message>" when a stage threw
    int exit_code = 0;  ///< 0 all PASS, 1 verdict failure or stage error, 2 configuration error

    bool pass() const { return exit_code == 0; }
};

namespace detail {

inline double pi() { return std::acos(-1.0); }

inline GridSpec level_grid(const ExperimentConfig& cfg, int k)
{
    GridSpec g = cfg.grid;
    g.nx = cfg.grid.nx << k;
    return g;
}

inline std::string boundary_selector(const DataSpec& d)
{
    if (!d.boundary.empty())
        return d.boundary;
    if (d.initial == "exact")
        return "exact";
    if (d.initial == "bump")
        return "zero";
    return "constant";
}

inline BoundaryTraces make_traces(const ExperimentConfig& cfg, const std::optional<ClosedForm>& cf,
                                  const GridSpec& g)
{
    const std::string sel = boundary_selector(cfg.data);
    if (sel == "zero")
        return BoundaryTraces::constant(0.0, 0.0);
    if (sel == "constant")
        return BoundaryTraces::constant(cfg.data.value, cfg.data.value);
    if (!cf)
        throw ConfigError("data.boundary: 'exact' needs exact.kind");
    auto trace = [cf = *cf](double xb) {
        return [cf, xb](double t) {
            Point x(cf.dim(), 0.0);
            x[0] = xb;
            return evaluate(cf, x, t);
        };
    };
    return BoundaryTraces{trace(g.xl), trace(g.xr)};
}

inline std::vector<double> make_initial(const ExperimentConfig& cfg, const std::optional<ClosedForm>& cf,
                                        const GridSpec& g, const BoundaryTraces& traces)
{
    const DataSpec& d = cfg.data;
    std::vector<double> u(g.nodes(), 0.0);
    for (int i = 0; i <= g.nx; ++i) {
        const double x = g.x(i);
        if (d.initial == "constant") {
            u[i] = d.value;
        } else if (d.initial == "exact") {
            if (!cf)
                throw ConfigError("data.initial: 'exact' needs exact.kind");
            Point pt(cf->dim(), 0.0);
            pt[0] = x;
            u[i] = evaluate(*cf, pt, 0.0);
        } else if (d.initial == "dead_ball") {
            const double a = std::max(0.0, (std::abs(x) - d.radius) / (g.xr - d.radius));
            u[i] = d.value * a * a;
        } else if (d.initial == "bump") {
            u[i] = g.geometry == Geometry::interval ? d.value * std::sin(pi() * (x - g.xl) / (g.xr - g.xl))
                                                    : d.value * std::cos(0.5 * pi() * x / g.xr);
            u[i] = std::max(0.0, u[i]);
        }
    }
    // Boundary nodes always carry the trace at t = 0.
    if (g.geometry == Geometry::interval)
        u[0] = traces.left(0.0);
    u[g.nx] = traces.right(0.0);
    return u;
}

inline std::vector<double> exact_times(const ExperimentConfig& cfg)
{
    if (!cfg.exact.times.empty())
        return cfg.exact.times;
    const double T = cfg.grid.t_end;
    int count = 8;
    if (cfg.grid.snapshot_every > 0.0)
        count = std::max(1, static_cast<int>(std::llround(T / cfg.grid.snapshot_every)));
    return T > 0.0 ? time_ladder(0.0, T, count) : std::vector<double>{0.0};
}

inline Level build_level(const ExperimentConfig& cfg, const std::optional<ClosedForm>& cf, int k)
{
    Level lv;
    const GridSpec g = level_grid(cfg, k);
    lv.nx = g.nx;
    if (cfg.source == Source::exact) {
        lv.field = sample_closed_form(*cf, g, exact_times(cfg));
        return lv;
    }
    const BoundaryTraces traces = make_traces(cfg, cf, g);
    lv.run = run(make_initial(cfg, cf, g, traces), traces, cfg.params, g);
    lv.field = lv.run->field;
    return lv;
}

/// Accessors for analysis options under "analysis.<id>.".
struct Options {
    const ConfigMap& m;
    const AnalysisSpec& spec;

    std::string key(const std::string& k) const { return spec.prefix + k; }
    bool has(const std::string& k) const { return m.has(key(k)); }
    std::string str(const std::string& k, const std::string& d) const { return m.str(key(k), d); }
    double num(const std::string& k, double d) const { return m.num(key(k), d); }
    double num(const std::string& k) const { return m.num(key(k)); }
    int integer(const std::string& k, int d) const { return m.integer(key(k), d); }
    bool flag(const std::string& k, bool d) const { return m.flag(key(k), d); }
    std::vector<double> numbers(const std::string& k) const { return m.numbers(key(k)); }
    std::vector<double> numbers(const std::string& k, std::vector<double> d) const { return m.numbers(key(k), d); }
    std::vector<std::string> list(const std::string& k) const { return m.list(key(k)); }
};

inline double resolve_time(const std::string& s, const SpaceTimeField& f, const std::string& key)
{
    if (s == "final")
        return f.times.back();
    if (s == "start")
        return f.times.front();
    double v;
    if (!parse_double(s, v))
        throw ConfigError(key + ": expected a number, 'start' or 'final', got '" + s + "'");
    return v;
}

/// center = <x>, <t> with x a number or fb_left / fb_right (free boundary at time t).
inline std::pair<double, double> resolve_center(const Options& o, const SpaceTimeField& f)
{
    const auto parts = o.list("center");
    if (parts.size() != 2)
        throw ConfigError(o.key("center") + ": expected '<x>, <t>'");
    const double t = resolve_time(parts[1], f, o.key("center"));
    if (parts[0] == "fb_left" || parts[0] == "fb_right") {
        const std::size_t n = f.find_time(t);
        if (n == SpaceTimeField::npos)
            throw ConfigError(o.key("center") + ": no snapshot stored at t=" + std::to_string(t));
        const std::string loc = o.str("locator", "threshold");
        if (loc != "threshold" && loc != "power_profile")
            throw ConfigError(o.key("locator") + ": expected 'threshold' or 'power_profile'");
        const auto pts = free_boundary_points(
            f, n, loc == "threshold" ? BoundaryLocator::threshold : BoundaryLocator::power_profile);
        if (pts.empty())
            throw Error("no free-boundary point at t=" + std::to_string(t));
        return {parts[0] == "fb_left" ? pts.front() : pts.back(), t};
    }
    double x;
    if (!parse_double(parts[0], x))
        throw ConfigError(o.key("center") + ": expected a number, fb_left or fb_right, got '" + parts[0] + "'");
    return {x, t};
}

/// Dyadic ladder 2^{-j_lo} … 2^{-j_hi}.
inline std::vector<double> dyadic(int j_lo, int j_hi)
{
    std::vector<double> r;
    for (int j = j_lo; j <= j_hi; ++j)
        r.push_back(std::ldexp(1.0, -j));
    return r;
}

struct Emitter {
    const std::string& experiment;
    const AnalysisSpec& spec;
    std::vector<SummaryRow>& rows;

    void operator()(const std::string& quantity, const std::string& target, double measured,
                    const std::string& tolerance, bool pass) const
    {
        rows.push_back({experiment, spec.id + "." + quantity, target, measured, tolerance, pass});
    }
};

inline std::string at_level(const std::string& q, const Level& lv, std::size_t levels)
{
    return levels > 1 ? q + "@nx" + std::to_string(lv.nx) : q;
}

inline const RunResult& require_run(const Level& lv, const AnalysisSpec& spec)
{
    if (!lv.run)
        throw ConfigError(spec.prefix + "type: " + spec.type + " needs source = solver");
    return *lv.run;
}

inline const ClosedForm& require_cf(const std::optional<ClosedForm>& cf, const AnalysisSpec& spec)
{
    if (!cf)
        throw ConfigError(spec.prefix + "type: " + spec.type + " needs exact.kind");
    return *cf;
}

/// The configured closed form, or the one named by the analysis's own `kind` (and `constant`) keys.
inline std::optional<ClosedForm> analysis_closed_form(const Options& o, const ExperimentConfig& cfg,
                                                      const std::optional<ClosedForm>& cf)
{
    if (!o.has("kind") && !o.has("constant"))
        return cf;
    ExperimentConfig c = cfg;
    c.exact.kind = o.str("kind", cfg.exact.kind);
    if (o.has("constant"))
        c.exact.constant = o.num("constant");
    return make_closed_form(c);
}

inline Stencil parse_stencil(const Options& o)
{
    const std::string s = o.str("stencil", "second");
    if (s == "second")
        return Stencil::second_order;
    if (s == "fourth")
        return Stencil::fourth_order;
    throw ConfigError(o.key("stencil") + ": expected 'second' or 'fourth'");
}

// --- individual analyses ---------------------------------------------------

inline json analysis_residual(const Options& o, const std::vector<Level>& levels, const std::optional<ClosedForm>& cf,
                              const Emitter& emit)
{
    const ClosedForm& c = require_cf(cf, o.spec);
    const Stencil st = parse_stencil(o);
    const double tol = o.num("tolerance", 1e-9);
    const double margin = o.num("margin", 2.0);
    json out = json::array();
    for (const auto& lv : levels) {
        const GridSpec& g = lv.field.grid;
        const double h = o.num("h", g.dx());
        const double t = resolve_time(o.str("time", "final"), lv.field, o.key("time"));
        double worst = 0.0, worst_x = 0.0;
        int count = 0;
        for (int i = 1; i < g.nx; ++i) {
            Point x(c.dim(), 0.0);
            x[0] = g.x(i);
            if (!(evaluate(c, x, t) > 0.0) || free_boundary_distance(c, x, t) < margin * h - 1e-12 * h)
                continue;
            const double r = std::abs(pde_residual(c, x, t, h, st));
            ++count;
            if (r > worst) {
                worst = r;
                worst_x = x[0];
            }
        }
        emit(at_level("max_residual", lv, levels.size()), "0", worst, "<=" + format_number(tol), worst <= tol);
        out.push_back({{"nx", lv.nx}, {"h", h}, {"t", t}, {"nodes", count}, {"max_residual", worst}, {"worst_x", worst_x},
                       {"stencil", st == Stencil::second_order ? "second" : "fourth"}});
    }
    return out;
}

inline json analysis_residual_order(const Options& o, const std::optional<ClosedForm>& cf, const Emitter& emit)
{
    const ClosedForm& c = require_cf(cf, o.spec);
    const Stencil st = parse_stencil(o);
    const auto pt = o.numbers("point");
    if (static_cast<int>(pt.size()) != c.dim() + 1)
        throw ConfigError(o.key("point") + ": expected " + std::to_string(c.dim()) + " coordinates and a time");
    const Point x(pt.begin(), pt.end() - 1);
    const double t = pt.back();
    const auto hs = o.numbers("h", {0.1, 0.05, 0.025, 0.0125});
    const double min_order = o.num("tolerance", 1.8);
    std::vector<double> res;
    for (double h : hs)
        res.push_back(std::abs(pde_residual(c, x, t, h, st)));
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < res.size(); ++k)
        if (res[k + 1] > 0.0)
            order = std::min(order, std::log(res[k] / res[k + 1]) / std::log(hs[k] / hs[k + 1]));
    emit("order", "2", order, ">=" + format_number(min_order), order >= min_order);
    return json{{"point", pt}, {"h", hs}, {"residuals", res}, {"min_order", json_number(order)}};
}

inline std::vector<SpaceTimePoint> barrier_points(const ClosedForm& c, int nx, int nt)
{
    std::vector<SpaceTimePoint> pts;
    const bool lower = c.kind == ClosedFormKind::barrier_nondeg;
    for (int i = 0; i < nx; ++i)
        for (int l = 0; l < nt; ++l) {
            Point x(c.dim(), 0.0);
            x[0] = -1.0 + (i + 0.5) * 2.0 / nx;
            const double t = (lower ? -1.0 : 1.0) * (l + 0.5) / nt;
            pts.push_back({x, t});
        }
    return pts;
}

inline json analysis_barrier_check(const Options& o, const std::optional<ClosedForm>& cf, const Emitter& emit)
{
    ClosedForm c = require_cf(cf, o.spec);
    if (c.kind != ClosedFormKind::barrier_growth && c.kind != ClosedFormKind::barrier_nondeg)
        throw ConfigError(o.key("type") + ": barrier_check needs a barrier exact.kind");
    c.amplitude *= o.num("scale", 1.0);
    const bool expect_pass = o.str("expect", "pass") == "pass";
    const auto pts = barrier_points(c, o.integer("nx", 10), o.integer("nt", 10));
    const auto rep = barrier_supersolution_check(c, pts, o.num("h", 1e-4), o.num("rel_tol", 1e-8), parse_stencil(o));
    emit("worst_residual", expect_pass ? "<=tol" : ">tol", rep.worst, format_number(rep.tolerance),
         rep.pass == expect_pass);
    return json{{"constant", c.amplitude}, {"points", pts.size()}, {"worst", rep.worst},
                {"tolerance", rep.tolerance}, {"supersolution", rep.pass}, {"expected", expect_pass}};
}

inline json analysis_exact_match(const Options& o, const std::vector<Level>& levels,
                                 const std::optional<ClosedForm>& cf, const Emitter& emit)
{
    const ClosedForm& c = require_cf(cf, o.spec);
    const double until = o.num("until", std::numeric_limits<double>::infinity());
    const double tol = o.num("tolerance", 1e-3);
    json out = json::array();
    for (const auto& lv : levels) {
        const GridSpec& g = lv.field.grid;
        double worst = 0.0;
        for (std::size_t n = 0; n < lv.field.times.size(); ++n) {
            const double t = lv.field.times[n];
            if (t > until)
                break;
            for (int i = 0; i <= g.nx; ++i) {
                Point x(c.dim(), 0.0);
                x[0] = g.x(i);
                const double e = evaluate(c, x, t);
                if (e > 0.0)
                    worst = std::max(worst, std::abs(lv.field.slices[n][i] - e) / e);
            }
        }
        emit(at_level("relative_error", lv, levels.size()), "0", worst, "<=" + format_number(tol), worst <= tol);
        json entry{{"nx", lv.nx}, {"until", json_number(until)}, {"relative_error", worst}};
        if (o.has("zero_after")) {
            const double t_zero = o.num("zero_after");
            const double eps = o.num("threshold", default_threshold(lv.field));
            double worst_after = 0.0;
            int slices = 0;
            for (std::size_t n = 0; n < lv.field.times.size(); ++n)
                if (lv.field.times[n] >= t_zero) {
                    ++slices;
                    for (double v : lv.field.slices[n])
                        worst_after = std::max(worst_after, v);
                }
            emit(at_level("max_after_extinction", lv, levels.size()), "0", worst_after, "<=" + format_number(eps),
                 slices > 0 && worst_after <= eps);
            entry["zero_after"] = t_zero;
            entry["slices_after"] = slices;
            entry["max_after"] = worst_after;
        }
        out.push_back(entry);
    }
    return out;
}

inline json analysis_positivity(const Options&, const std::vector<Level>& levels, const Emitter& emit)
{
    json out = json::array();
    for (const auto& lv : levels) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& s : lv.field.slices)
            for (double v : s)
                lo = std::min(lo, v);
        emit(at_level("min_value", lv, levels.size()), ">=0", lo, "0", lo >= 0.0);
        json entry{{"nx", lv.nx}, {"min_value", lo}};
        if (lv.run) {
            // Discrete time-monotonicity is reported, not asserted.
            emit(at_level("min_time_increment", lv, levels.size()), "report", lv.run->min_time_increment, "report",
                 true);
            entry["min_time_increment"] = json_number(lv.run->min_time_increment);
            entry["positivity_clamps"] = lv.run->positivity_clamps;
            entry["steps"] = lv.run->steps;
        }
        out.push_back(entry);
    }
    return out;
}

inline json analysis_conservation(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const double tol = o.num("tolerance", 1e-10);
    json out = json::array();
    for (const auto& lv : levels) {
        const RunResult& r = require_run(lv, o.spec);
        const double m0 = interior_mass(lv.field.slices.front(), lv.field.grid);
        double worst = 0.0, scale = std::abs(m0);
        for (std::size_t n = 0; n < lv.field.times.size(); ++n) {
            const double m = interior_mass(lv.field.slices[n], lv.field.grid);
            scale = std::max({scale, std::abs(m), r.absorbed[n], std::abs(r.inflow[n])});
            worst = std::max(worst, std::abs(m0 - m - r.absorbed[n] + r.inflow[n]));
        }
        const double rel = scale > 0.0 ? worst / scale : 0.0;
        emit(at_level("mass_defect", lv, levels.size()), "0", rel, "<=" + format_number(tol), rel <= tol);
        out.push_back({{"nx", lv.nx}, {"relative_defect", rel}, {"absorbed", r.absorbed.back()},
                       {"inflow", r.inflow.back()}});
    }
    return out;
}

inline json analysis_dead_core(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const bool expect_positive = o.flag("expect_positive", true);
    const bool monotone = o.flag("monotone", true);
    json out = json::array();
    for (const auto& lv : levels) {
        const auto set = extract_positivity(lv.field, o.has("threshold") ? std::optional<double>(o.num("threshold"))
                                                                         : std::nullopt);
        const double final_measure = set.dead_measure.back();
        double worst_growth = 0.0;
        for (std::size_t n = 0; n + 1 < set.dead_measure.size(); ++n)
            worst_growth = std::max(worst_growth, set.dead_measure[n + 1] - set.dead_measure[n]);
        if (expect_positive)
            emit(at_level("final_dead_measure", lv, levels.size()), ">0", final_measure, "0", final_measure > 0.0);
        if (monotone)
            emit(at_level("dead_measure_growth", lv, levels.size()), "<=0", worst_growth, "1e-12",
                 worst_growth <= 1e-12);
        out.push_back({{"nx", lv.nx}, {"times", lv.field.times}, {"dead_measure", set.dead_measure},
                       {"threshold", set.threshold}});
    }
    return out;
}

inline json analysis_rate(const Options& o, const std::vector<Level>& levels, const Emitter& emit, bool gradient)
{
    json out = json::array();
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        const auto radii = o.numbers("radii");
        const RateReport rep = gradient ? gradient_rate_fit(lv.field, x0, t0, radii, o.num("tolerance", 0.3))
                                        : growth_rate_fit(lv.field, x0, t0, radii, o.num("tolerance", 0.05));
        emit(at_level("slope", lv, levels.size()), format_number(rep.target), rep.slope,
             "+-" + format_number(rep.tolerance) + " R2>=0.95", rep.pass);
        json j = to_json(rep);
        j["nx"] = lv.nx;
        out.push_back(j);
    }
    return out;
}

inline json analysis_nondegeneracy(const Options& o, const std::vector<Level>& levels, const Emitter& emit,
                                   const ProblemParams& params)
{
    json out = json::array();
    std::vector<double> constants;
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        const RateReport rep = nondegeneracy_fit(lv.field, x0, t0, o.numbers("radii"), o.num("ratio", 10.0));
        const double c = *rep.measured_constant;
        constants.push_back(c);
        emit(at_level("constant", lv, levels.size()), ">0", c, "max/min<=" + format_number(rep.tolerance), rep.pass);
        json j = to_json(rep);
        j["nx"] = lv.nx;
        for (const auto& floor : o.list("floors")) {
            double value;
            if (floor == "stated")
                value = barrier_constant_nondeg(params);
            else if (floor == "corrected")
                value = supersolution_constant_nondeg(params);
            else
                throw ConfigError(o.key("floors") + ": expected 'stated' or 'corrected', got '" + floor + "'");
            emit(at_level("constant_vs_" + floor + "_barrier", lv, levels.size()), ">=" + format_number(value), c,
                 "0", c >= value);
            j["floor_" + floor] = value;
        }
        out.push_back(j);
    }
    if (constants.size() > 1) {
        const double lo = *std::min_element(constants.begin(), constants.end());
        const double hi = *std::max_element(constants.begin(), constants.end());
        const double factor = o.num("stability", 2.0);
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        emit("refinement_ratio", "1", ratio, "<=" + format_number(factor), ratio <= factor);
    }
    return out;
}

inline json analysis_dyadic(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    json out = json::array();
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        std::optional<double> c_star;
        if (o.has("c_star"))
            c_star = o.num("c_star");
        const int j_max = o.integer("j_max", finest_dyadic_level(lv.field.grid));
        const auto seq = dyadic_sequence(lv.field, x0, t0, j_max, c_star, o.integer("j_min", 0));
        bool monotone = true;
        for (std::size_t j = 0; j + 1 < seq.sups.size(); ++j)
            monotone = monotone && seq.sups[j + 1] <= seq.sups[j];
        emit(at_level("sups_nonincreasing", lv, levels.size()), "true", monotone ? 1.0 : 0.0, "0", monotone);
        if (!c_star && seq.j_min == 0)
            emit(at_level("j0_member", lv, levels.size()), "true", seq.member.front() ? 1.0 : 0.0, "0",
                 seq.member.front() != 0);
        emit(at_level("implied_constant", lv, levels.size()), "report", seq.implied_constant, "report", true);
        json j = to_json(seq);
        j["nx"] = lv.nx;
        out.push_back(j);
    }
    return out;
}

inline json analysis_liouville(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const std::string expect = o.str("expect", "critical");
    if (expect != "critical" && expect != "subcritical")
        throw ConfigError(o.key("expect") + ": expected 'critical' or 'subcritical'");
    json out = json::array();
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        const auto rep = liouville_classify(lv.field, x0, t0, o.numbers("radii"));
        const bool sub = rep.verdict == GrowthClass::subcritical;
        emit(at_level("class", lv, levels.size()), expect == "critical" ? "CRITICAL" : "SUBCRITICAL",
             rep.decay_factor, "decay<10 is CRITICAL", sub == (expect == "subcritical"));
        if (o.has("spread"))
            emit(at_level("rho_spread", lv, levels.size()), "0", rep.spread, "<=" + format_number(o.num("spread")),
                 rep.spread <= o.num("spread"));
        json j = to_json(rep);
        j["nx"] = lv.nx;
        out.push_back(j);
    }
    return out;
}

inline json analysis_blowup(const Options& o, const std::vector<Level>& levels, const std::optional<ClosedForm>& cf,
                            const Emitter& emit)
{
    const std::string mode = o.str("mode", "band");
    const auto eps = o.numbers("epsilons", {0.5, 0.25, 0.125});
    const bool lower = o.flag("lower_only", false);
    const int nx = o.integer("nx", 16), nt = o.integer("nt", 16);
    json out = json::array();
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        json entry{{"nx", lv.nx}, {"center", {x0, t0}}, {"mode", mode}};
        if (mode == "invariance") {
            const ClosedForm& c = require_cf(cf, o.spec);
            const double tol = o.num("tolerance", 1e-12);
            double worst = 0.0;
            int shared = 0;
            for (double e : eps) {
                const auto b = blowup_rescale(lv.field, x0, t0, e, nx, nt, lower);
                for (std::size_t k = 0; k < b.field.times.size(); ++k)
                    for (int i = 0; i <= nx; ++i)
                        if (b.shared[k][i]) {
                            Point x(c.dim(), 0.0);
                            x[0] = x0 + b.field.grid.x(i);
                            const double ref = evaluate(c, x, t0 + b.field.times[k]);
                            worst = std::max(worst, std::abs(b.field.slices[k][i] - ref));
                            ++shared;
                        }
            }
            emit(at_level("max_deviation", lv, levels.size()), "0", worst, "<=" + format_number(tol),
                 shared > 0 && worst <= tol);
            entry["max_deviation"] = worst;
            entry["shared_nodes"] = shared;
        } else if (mode == "band") {
            const double band = o.num("band", 100.0);
            std::vector<double> sups, errors;
            for (double e : eps) {
                const auto b = blowup_rescale(lv.field, x0, t0, e, nx, nt, lower);
                sups.push_back(b.field.max_value());
                errors.push_back(b.interpolation_error);
            }
            const double lo = *std::min_element(sups.begin(), sups.end());
            const double hi = *std::max_element(sups.begin(), sups.end());
            const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
            emit(at_level("sup_ratio", lv, levels.size()), "<=" + format_number(band), ratio, format_number(band),
                 lo > 0.0 && ratio <= band);
            entry["epsilons"] = eps;
            entry["sups"] = sups;
            entry["interpolation_error"] = errors;
            entry["ratio"] = json_number(ratio);
        } else {
            throw ConfigError(o.key("mode") + ": expected 'band' or 'invariance'");
        }
        out.push_back(entry);
    }
    return out;
}

inline json analysis_density(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const double min = o.num("min", 0.0);
    json out = json::array();
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        const auto rep = density_probe(lv.field, x0, t0, o.num("radius", 0.5),
                                       o.numbers("varrho", {0.5, 0.25, 0.125, 0.0625}));
        const double best = rep.best.value_or(0.0);
        emit(at_level("varrho", lv, levels.size()), ">=" + format_number(min), best, "0", rep.pass() && best >= min);
        out.push_back(to_json(rep));
    }
    return out;
}

inline json analysis_porosity(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const double min = o.num("min", 0.0);
    json out = json::array();
    for (const auto& lv : levels) {
        const double t0 = resolve_time(o.str("time", "final"), lv.field, o.key("time"));
        const auto rep = porosity_probe(lv.field, t0, o.numbers("radii", {0.25, 0.125, 0.0625}),
                                        o.numbers("deltas", {0.75, 0.5, 0.25, 0.125}));
        const double best = rep.best.value_or(0.0);
        emit(at_level("delta", lv, levels.size()), ">=" + format_number(min), best, "0", rep.pass() && best >= min);
        out.push_back(to_json(rep));
    }
    return out;
}

inline json analysis_finite_speed(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    const auto cs = o.numbers("c", {1.0, 2.0, 4.0, 8.0});
    const double r = o.num("r", 0.25), s = o.num("s", 0.1);
    json out = json::array();
    std::vector<double> minimal;
    for (const auto& lv : levels) {
        const auto [x0, t0] = resolve_center(o, lv.field);
        json checks = json::array();
        std::optional<double> smallest;
        for (double c : cs) {
            const auto res = finite_speed_check(lv.field, x0, t0, r, s, c);
            checks.push_back(to_json(res, x0, t0));
            if (res.pass && (!smallest || c < *smallest))
                smallest = c;
        }
        const double max_c = *std::max_element(cs.begin(), cs.end());
        emit(at_level("minimal_c", lv, levels.size()), "<=" + format_number(max_c),
             smallest.value_or(std::numeric_limits<double>::infinity()), "0", smallest.has_value());
        if (smallest)
            minimal.push_back(*smallest);
        out.push_back({{"nx", lv.nx}, {"checks", checks}});
    }
    if (levels.size() > 1) {
        const double factor = o.num("stability", 2.0);
        double ratio = std::numeric_limits<double>::infinity();
        if (minimal.size() == levels.size())
            ratio = *std::max_element(minimal.begin(), minimal.end()) / *std::min_element(minimal.begin(), minimal.end());
        emit("minimal_c_ratio", "1", ratio, "<=" + format_number(factor), ratio <= factor);
    }
    return out;
}

inline json analysis_energy(const Options& o, const std::vector<Level>& levels, const Emitter& emit)
{
    json out = json::array();
    for (const auto& lv : levels) {
        const auto rep = energy_decay_check(lv.field, o.num("margin", 0.1));
        emit(at_level("energy_increase", lv, levels.size()), "<=0", rep.worst_increase,
             "<=" + format_number(rep.tolerance), rep.nonincreasing);
        emit(at_level("interior_min", lv, levels.size()), ">0", rep.interior_min, "0", rep.interior_positive);
        json j = to_json(rep);
        j["nx"] = lv.nx;
        out.push_back(j);
    }
    return out;
}

/// Random ordered pairs (v <= u on the parabolic boundary) advanced in lockstep.
inline json analysis_comparison(const Options& o, const ExperimentConfig& cfg, const Emitter& emit)
{
    const int pairs = o.integer("pairs", 50);
    const int nx = o.integer("nx", 32);
    const double t_end = o.num("t_end", 0.05);
    const double tol = o.num("tolerance", 1e-12);
    std::mt19937_64 rng(static_cast<std::uint64_t>(o.integer("seed", 1)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GridSpec g = GridSpec::interval(-1.0, 1.0, nx, t_end, 0.0);
    g.cfl_sigma = o.num("cfl_sigma", cfg.grid.cfl_sigma);
    g.unchecked_cfl = g.cfl_sigma > 0.5;
    double worst = -std::numeric_limits<double>::infinity();
    int failures = 0;
    long nodes = 0;
    for (int k = 0; k < pairs; ++k) {
        std::vector<double> u(nx + 1), v(nx + 1);
        const double dead_lo = unit(rng) * 2.0 - 1.0, dead_hi = dead_lo + 0.5 * unit(rng);
        for (int i = 0; i <= nx; ++i) {
            const double x = g.x(i);
            u[i] = (x > dead_lo && x < dead_hi) ? 0.0 : unit(rng);
            v[i] = u[i] * unit(rng);
        }
        const double gu = unit(rng), gv = gu * unit(rng);
        u[0] = u[nx] = gu;
        v[0] = v[nx] = gv;
        const auto [ru, rv] = run_pair(u, BoundaryTraces::constant(gu, gu), v, BoundaryTraces::constant(gv, gv),
                                       cfg.params, g);
        const auto rep = compare_runs(ru.field, rv.field, tol);
        worst = std::max(worst, rep.worst_violation);
        nodes += static_cast<long>(rep.nodes_checked);
        failures += rep.pass ? 0 : 1;
    }
    emit("worst_violation", "<=0", worst, "<=" + format_number(tol), failures == 0);
    return json{{"pairs", pairs}, {"nx", nx}, {"failures", failures}, {"worst_violation", worst}, {"nodes", nodes}};
}

/// Runs the solver from scale·Φ̂ data on [xl, xr] × [−1, 0] and checks it stays below Φ̂.
inline json analysis_barrier_domination(const Options& o, const ExperimentConfig& cfg, const Emitter& emit)
{
    const double tol = o.num("tolerance", 1e-12);
    std::optional<double> constant;
    if (o.has("constant"))
        constant = o.num("constant");
    const ClosedForm phi = make_barrier_nondeg(cfg.params, constant);
    GridSpec g = cfg.grid;
    g.t_end = 1.0;
    g.snapshot_every = 0.0;
    auto at = [&phi](double x, double t) {
        Point pt(phi.dim(), 0.0);
        pt[0] = x;
        return evaluate(phi, pt, std::min(t, 0.0));
    };
    json entries = json::array();
    bool all = true;
    double worst_all = -std::numeric_limits<double>::infinity();
    for (double scale : o.numbers("scales", {1.0, 0.5})) {
        std::vector<double> u0(g.nodes());
        for (int i = 0; i <= g.nx; ++i)
            u0[i] = scale * at(g.x(i), -1.0);
        const double xl = g.xl, xr = g.xr;
        BoundaryTraces tr{[=](double s) { return scale * at(xl, s - 1.0); },
                          [=](double s) { return scale * at(xr, s - 1.0); }};
        const RunResult r = run(u0, tr, cfg.params, g);
        SpaceTimeField bar = r.field;
        for (std::size_t n = 0; n < bar.times.size(); ++n)
            for (int i = 0; i <= g.nx; ++i)
                bar.slices[n][i] = at(g.x(i), bar.times[n] - 1.0);
        const auto rep = compare_runs(bar, r.field, tol);
        all = all && rep.pass;
        worst_all = std::max(worst_all, rep.worst_violation);
        entries.push_back({{"scale", scale}, {"worst_violation", rep.worst_violation}, {"worst_x", rep.worst_x},
                           {"worst_t", rep.worst_t - 1.0}, {"steps", r.steps}});
    }
    emit("worst_violation", "<=0", worst_all, "<=" + format_number(tol), all);
    return json{{"constant", phi.amplitude}, {"runs", entries}};
}

}  // namespace detail

/// Runs one experiment and writes its artifacts under out_root/<name>.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_root, bool force = false,
                                       bool write = true)
{
    ExperimentResult result;
    result.name = cfg.name;
    const fs::path dir = out_root / cfg.name;
    if (write) {
        if (fs::exists(dir)) {
            if (!force) {
                result.exit_code = 2;
                result.error = "output: directory '" + dir.string() + "' exists (use --force to overwrite)";
                return result;
            }
            fs::remove_all(dir);
        }
        fs::create_directories(dir);
        std::ofstream(dir / "config.txt") << cfg.raw.serialize();
    }

    std::string stage = "setup";
    try {
        std::optional<ClosedForm> cf;
        if (cfg.source == Source::exact || cfg.raw.has("exact.kind"))
            cf = make_closed_form(cfg);
        stage = cfg.source == Source::exact ? "sampling" : "solver";
        std::vector<std::future<Level>> pending;
        for (int k = 0; k <= cfg.refine; ++k)
            pending.push_back(std::async(std::launch::async, [&cfg, &cf, k] { return detail::build_level(cfg, cf, k); }));
        std::vector<Level> levels;
        for (auto& f : pending)
            levels.push_back(f.get());

        if (write) {
            json runs = json::array();
            for (const auto& lv : levels) {
                if (cfg.write_snapshots) {
                    const std::string file =
                        levels.size() > 1 ? "snapshots_nx" + std::to_string(lv.nx) + ".csv" : "snapshots.csv";
                    std::ofstream os(dir / file);
                    write_snapshot_csv(os, lv.field);
                }
                json entry{{"nx", lv.nx}, {"snapshots", lv.field.times.size()}};
                if (lv.run) {
                    entry["steps"] = lv.run->steps;
                    entry["wall_seconds"] = lv.run->wall_seconds;
                    entry["positivity_clamps"] = lv.run->positivity_clamps;
                    entry["min_time_increment"] = json_number(lv.run->min_time_increment);
                    entry["max_gradient"] = lv.run->max_gradient;
                }
                runs.push_back(entry);
            }
            std::ofstream(dir / "run.json") << runs.dump(2) << '\n';
        }

        for (const auto& spec : cfg.analyses) {
            stage = "analysis " + spec.id;
            const detail::Options o{cfg.raw, spec};
            const detail::Emitter emit{cfg.name, spec, result.rows};
            json report;
            const std::string& t = spec.type;
            const bool uses_cf = t == "residual" || t == "residual_order" || t == "barrier_check" ||
                                 t == "exact_match" || t == "blowup";
            const std::optional<ClosedForm> acf = uses_cf ? detail::analysis_closed_form(o, cfg, cf) : cf;
            if (t == "residual")
                report = detail::analysis_residual(o, levels, acf, emit);
            else if (t == "residual_order")
                report = detail::analysis_residual_order(o, acf, emit);
            else if (t == "barrier_check")
                report = detail::analysis_barrier_check(o, acf, emit);
            else if (t == "exact_match")
                report = detail::analysis_exact_match(o, levels, acf, emit);
            else if (t == "positivity")
                report = detail::analysis_positivity(o, levels, emit);
            else if (t == "conservation")
                report = detail::analysis_conservation(o, levels, emit);
            else if (t == "dead_core")
                report = detail::analysis_dead_core(o, levels, emit);
            else if (t == "growth_rate")
                report = detail::analysis_rate(o, levels, emit, false);
            else if (t == "gradient_rate")
                report = detail::analysis_rate(o, levels, emit, true);
            else if (t == "nondegeneracy")
                report = detail::analysis_nondegeneracy(o, levels, emit, cfg.params);
            else if (t == "dyadic")
                report = detail::analysis_dyadic(o, levels, emit);
            else if (t == "liouville")
                report = detail::analysis_liouville(o, levels, emit);
            else if (t == "blowup")
                report = detail::analysis_blowup(o, levels, acf, emit);
            else if (t == "density")
                report = detail::analysis_density(o, levels, emit);
            else if (t == "porosity")
                report = detail::analysis_porosity(o, levels, emit);
            else if (t == "finite_speed")
                report = detail::analysis_finite_speed(o, levels, emit);
            else if (t == "energy_decay")
                report = detail::analysis_energy(o, levels, emit);
            else if (t == "comparison")
                report = detail::analysis_comparison(o, cfg, emit);
            else if (t == "barrier_domination")
                report = detail::analysis_barrier_domination(o, cfg, emit);
            result.reports.push_back({{"id", spec.id}, {"type", spec.type}, {"result", report}});
        }
        const auto unused = cfg.raw.unused();
        if (!unused.empty()) {
            std::string msg = "unknown analysis options:";
            for (const auto& k : unused)
                msg += " " + k;
            throw ConfigError(msg);
        }
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.error = stage + ": " + e.what();
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = stage + ": " + e.what();
    }

    if (result.exit_code == 0)
        for (const auto& r : result.rows)
            if (!r.pass)
                result.exit_code = 1;
    if (write) {
        std::ofstream(dir / "reports.json") << result.reports.dump(2) << '\n';
        std::ofstream os(dir / "summary.csv");
        write_summary_csv(os, result.rows);
        if (!result.error.empty())
            std::ofstream(dir / "error.txt") << result.error << '\n';
    }
    return result;
}

/// Names listed in <config_dir>/suite.txt, in declaration order.
inline std::vector<std::string> suite_names(const fs::path& config_dir)
{
    if (!fs::is_directory(config_dir))
        throw ConfigError("config directory not found: expected '" + config_dir.string() + "'");
    std::ifstream in(config_dir / "suite.txt");
    if (!in)
        throw ConfigError("suite manifest not found: expected '" + (config_dir / "suite.txt").string() + "'");
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (!line.empty())
            names.push_back(line);
    }
    return names;
}

struct SuiteResult {
    std::vector<ExperimentResult> experiments;
    int exit_code = 0;
};

/// Runs the bundled suite (optionally a subset) in parallel; results keep declaration order.
inline SuiteResult verify_all(const fs::path& config_dir, const fs::path& out_root,
                              const std::vector<std::string>& only = {}, bool force = false)
{
    std::vector<std::string> names = suite_names(config_dir);
    if (!only.empty()) {
        for (const auto& n : only)
            if (std::find(names.begin(), names.end(), n) == names.end())
                throw ConfigError("--only: unknown experiment '" + n + "'");
        std::erase_if(names, [&](const std::string& n) { return std::find(only.begin(), only.end(), n) == only.end(); });
    }
    std::vector<ExperimentConfig> configs;
    for (const auto& n : names) {
        ExperimentConfig cfg = load_config_file((config_dir / (n + ".cfg")).string());
        if (cfg.name != n)
            throw ConfigError(n + ".cfg: name '" + cfg.name + "' does not match the file name");
        configs.push_back(std::move(cfg));
    }
    std::vector<std::future<ExperimentResult>> pending;
    for (const auto& cfg : configs)
        pending.push_back(
            std::async(std::launch::async, [&cfg, &out_root, force] { return run_experiment(cfg, out_root, force); }));
    SuiteResult suite;
    for (auto& f : pending) {
        suite.experiments.push_back(f.get());
        suite.exit_code = std::max(suite.exit_code, suite.experiments.back().exit_code);
    }
    if (suite.exit_code == 2)
        suite.exit_code = 1;
    for (const auto& e : suite.experiments)
        if (e.exit_code == 2)
            suite.exit_code = 2;
    std::vector<SummaryRow> all;
    for (const auto& e : suite.experiments)
        all.insert(all.end(), e.rows.begin(), e.rows.end());
    fs::create_directories(out_root);
    std::ofstream os(out_root / "summary.csv");
    write_summary_csv(os, all);
    return suite;
}

}  // namespace deadcore
