#pragma once

// Free boundary, intrinsic cylinders and the measure-theoretic probes
// (positive density, porosity, finite speed of propagation).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deadcore/core.hpp"
#include "deadcore/field.hpp"

namespace deadcore {

using json = nlohmann::json;

inline double default_threshold(const SpaceTimeField& field, double relative = 1e-10)
{
    const double m = field.max_value();
    return m > 0.0 ? relative * m : std::numeric_limits<double>::min();
}

struct PositivitySet {
    double threshold = 0.0;
    std::vector<std::vector<char>> masks;             ///< u > threshold, per snapshot and node
    std::vector<std::vector<int>> boundary_indices;   ///< cells [x_i, x_{i+1}] whose endpoints differ
    std::vector<std::vector<double>> boundary_points; ///< threshold crossing inside each boundary cell
    std::vector<double> dead_measure;                 ///< measure of {interpolant <= threshold}

    /// Free-boundary points of snapshot n sorted by x.
    const std::vector<double>& points(std::size_t n) const { return boundary_points.at(n); }
};

namespace detail {

/// ∫_a^b r^{N−1} dr for radial grids, b − a otherwise.
inline double segment_measure(const GridSpec& grid, double a, double b)
{
    if (b <= a)
        return 0.0;
    if (grid.geometry == Geometry::interval)
        return b - a;
    return (std::pow(b, grid.dim) - std::pow(a, grid.dim)) / grid.dim;
}

}  // namespace detail

/// Masks u > ε per snapshot; free-boundary points by linear interpolation to the ε crossing.
inline PositivitySet extract_positivity(const SpaceTimeField& field, std::optional<double> threshold = std::nullopt)
{
    PositivitySet set;
    set.threshold = threshold ? *threshold : default_threshold(field);
    if (!(set.threshold > 0.0))
        throw InvalidArgument("positivity threshold must be > 0");
    const GridSpec& g = field.grid;
    const double eps = set.threshold;
    for (const auto& u : field.slices) {
        std::vector<char> mask(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            mask[i] = u[i] > eps;
        std::vector<int> cells;
        std::vector<double> points;
        double dead = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double a = g.x(i), b = g.x(i + 1);
            if (mask[i] != mask[i + 1]) {
                const double s = (eps - u[i]) / (u[i + 1] - u[i]);
                const double z = a + std::clamp(s, 0.0, 1.0) * (b - a);
                cells.push_back(i);
                points.push_back(z);
                dead += mask[i] ? detail::segment_measure(g, z, b) : detail::segment_measure(g, a, z);
            } else if (!mask[i]) {
                dead += detail::segment_measure(g, a, b);
            }
        }
        set.masks.push_back(std::move(mask));
        set.boundary_indices.push_back(std::move(cells));
        set.boundary_points.push_back(std::move(points));
        set.dead_measure.push_back(dead);
    }
    return set;
}

enum class BoundaryLocator {
    threshold,      ///< linear interpolation of u to the ε crossing
    power_profile,  ///< linear extrapolation of u^{1/α₀} from the two nearest positive nodes
};

/// Free-boundary points of snapshot n.  power_profile is exact for c·d^{α₀} profiles and falls back
/// to the threshold crossing when the positive side has fewer than two nodes or is not increasing.
inline std::vector<double> free_boundary_points(const SpaceTimeField& field, std::size_t n,
                                                BoundaryLocator locator = BoundaryLocator::threshold,
                                                std::optional<double> threshold = std::nullopt)
{
    SpaceTimeField one;
    one.grid = field.grid;
    one.params = field.params;
    one.times = {field.times.at(n)};
    one.slices = {field.slices.at(n)};
    const auto set = extract_positivity(one, threshold ? threshold : std::optional<double>(default_threshold(field)));
    std::vector<double> pts = set.points(0);
    if (locator == BoundaryLocator::threshold)
        return pts;
    const GridSpec& g = field.grid;
    const auto& u = field.slices[n];
    const double a0 = compute_exponents(field.params).alpha0;
    const double dx = g.dx();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const int i = set.boundary_indices[0][k];
        const bool rising = set.masks[0][i + 1];  // positivity on the right of the cell
        const int a = rising ? i + 1 : i;
        const int b = rising ? i + 2 : i - 1;
        if (b < 0 || b > g.nx || !set.masks[0][b])
            continue;
        const double wa = std::pow(u[a], 1.0 / a0), wb = std::pow(u[b], 1.0 / a0);
        if (!(wb > wa))
            continue;
        const double z = rising ? g.x(a) - wa * dx / (wb - wa) : g.x(a) + wa * dx / (wb - wa);
        // A sub-threshold node just past the true boundary moves the crossing one cell, so allow that cell.
        pts[k] = rising ? std::clamp(z, g.x(std::max(i - 1, 0)), g.x(a))
                        : std::clamp(z, g.x(a), g.x(std::min(i + 2, g.nx)));
    }
    return pts;
}

/// |x−y| + ‖u‖_∞^{(p−2)/p} |t−s|^{1/p}, the intrinsic parabolic distance between two points.
inline double intrinsic_distance(const SpaceTimeField& field, double x, double t, double y, double s)
{
    const double p = field.params.p;
    return std::abs(x - y) + std::pow(field.max_value(), (p - 2.0) / p) * std::pow(std::abs(t - s), 1.0 / p);
}

enum class CylinderRegion { full, lower, upper, parabolic_lower };

inline const char* to_string(CylinderRegion r)
{
    switch (r) {
    case CylinderRegion::full: return "Q";
    case CylinderRegion::lower: return "Q-";
    case CylinderRegion::upper: return "Q+";
    case CylinderRegion::parabolic_lower: return "dpQ-";
    }
    return "?";
}

/// Closed cylinder {|x − x₀| <= r} × [t_lo, t_hi] resolved against a stored field.
struct IntrinsicCylinder {
    double x0 = 0.0;
    double t0 = 0.0;
    double r = 0.0;
    double theta = 0.0;
    CylinderRegion region = CylinderRegion::lower;
    double x_lo = 0.0, x_hi = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int i_lo = 0, i_hi = -1;              ///< stored nodes with x in [x_lo, x_hi] (interval grids)
    std::size_t n_lo = 0, n_hi = 0;       ///< stored snapshots in [t_lo, t_hi], half-open [n_lo, n_hi)
};

namespace detail {

inline double time_tol(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

inline void ensure_resolved(const SpaceTimeField& field, double x_lo, double x_hi, double t_lo, double t_hi)
{
    const GridSpec& g = field.grid;
    const double xtol = 1e-12 * std::max(1.0, g.xr - g.xl);
    const double lo_bound = g.geometry == Geometry::radial ? -g.xr : g.xl;
    std::ostringstream err;
    if (field.times.empty())
        throw ResolutionError("field has no snapshots");
    if (x_lo < lo_bound - xtol || x_hi > g.xr + xtol)
        err << "space [" << x_lo << ", " << x_hi << "] exceeds stored [" << lo_bound << ", " << g.xr << "]; ";
    if (t_lo < field.times.front() - time_tol(t_lo) || t_hi > field.times.back() + time_tol(t_hi))
        err << "time [" << t_lo << ", " << t_hi << "] exceeds stored [" << field.times.front() << ", "
            << field.times.back() << "]; ";
    const std::string msg = err.str();
    if (!msg.empty())
        throw ResolutionError("cylinder not resolved by stored data: " + msg.substr(0, msg.size() - 2));
}

/// Snapshot times used to sample [t_lo, t_hi]: both ends plus every stored time strictly inside.
inline std::vector<double> time_samples(const SpaceTimeField& field, double t_lo, double t_hi)
{
    std::vector<double> ts{t_lo};
    for (double t : field.times)
        if (t > t_lo + time_tol(t_lo) && t < t_hi - time_tol(t_hi))
            ts.push_back(t);
    if (t_hi > t_lo + time_tol(t_lo))
        ts.push_back(t_hi);
    return ts;
}

/// Interpolated slice at time t.
inline std::vector<double> slice_at(const SpaceTimeField& field, double t)
{
    const std::size_t n = field.find_time(t);
    if (n != SpaceTimeField::npos)
        return field.slices[n];
    const auto it = std::lower_bound(field.times.begin(), field.times.end(), t);
    if (it == field.times.begin() || it == field.times.end())
        throw ResolutionError("time " + std::to_string(t) + " outside stored history");
    const std::size_t k = static_cast<std::size_t>(it - field.times.begin());
    const double w = (t - field.times[k - 1]) / (field.times[k] - field.times[k - 1]);
    std::vector<double> out(field.slices[k].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * field.slices[k - 1][i] + w * field.slices[k][i];
    return out;
}

/// Linear interpolation of one slice at coordinate y (radial slices reflect).
inline double interp(const GridSpec& g, const std::vector<double>& u, double y)
{
    if (g.geometry == Geometry::radial)
        y = std::abs(y);
    const double s = std::clamp((y - g.xl) / g.dx(), 0.0, static_cast<double>(g.nx));
    const int i = std::min(static_cast<int>(std::floor(s)), g.nx - 1);
    const double w = s - i;
    if (w == 0.0)
        return u[i];
    if (w == 1.0)
        return u[i + 1];
    return (1.0 - w) * u[i] + w * u[i + 1];
}

/// Calls fn(x, value) for every grid node in [a, b] and for the interpolated endpoints.
template <class Fn>
void for_each_in_segment(const GridSpec& g, const std::vector<double>& u, double a, double b, Fn&& fn)
{
    const double tol = 1e-12 * g.dx();
    fn(a, interp(g, u, a));
    if (b > a)
        fn(b, interp(g, u, b));
    for (int i = 0; i <= g.nx; ++i) {
        const double x = g.x(i);
        if (x > a + tol && x < b - tol)
            fn(x, u[i]);
        if (g.geometry == Geometry::radial && i > 0 && -x > a + tol && -x < b - tol)
            fn(-x, u[i]);
    }
}

struct Extremes {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    double argmax_x = 0.0, argmax_t = 0.0;
    double argmin_x = 0.0, argmin_t = 0.0;
};

/// Exact extremes of the bilinear interpolant over [a, b] × [t_lo, t_hi].
inline Extremes rectangle_extremes(const SpaceTimeField& field, double a, double b, double t_lo, double t_hi)
{
    ensure_resolved(field, a, b, t_lo, t_hi);
    Extremes e;
    for (double t : time_samples(field, t_lo, t_hi)) {
        const auto u = slice_at(field, t);
        for_each_in_segment(field.grid, u, a, b, [&](double x, double v) {
            if (v > e.max) {
                e.max = v;
                e.argmax_x = x;
                e.argmax_t = t;
            }
            if (v < e.min) {
                e.min = v;
                e.argmin_x = x;
                e.argmin_t = t;
            }
        });
    }
    return e;
}

}  // namespace detail

/// Resolves Q_r, Q_r⁻, Q_r⁺ (|x−x₀| <= r, t within r^θ of t₀) against stored data.
inline IntrinsicCylinder make_cylinder(const SpaceTimeField& field, double x0, double t0, double r,
                                       CylinderRegion region, std::optional<double> theta = std::nullopt)
{
    if (!(r > 0.0))
        throw InvalidArgument("cylinder radius must be > 0");
    IntrinsicCylinder c;
    c.x0 = x0;
    c.t0 = t0;
    c.r = r;
    c.theta = theta ? *theta : compute_exponents(field.params).theta;
    c.region = region;
    c.x_lo = x0 - r;
    c.x_hi = x0 + r;
    const double h = std::pow(r, c.theta);
    c.t_lo = region == CylinderRegion::upper ? t0 : t0 - h;
    c.t_hi = (region == CylinderRegion::full || region == CylinderRegion::upper) ? t0 + h : t0;
    detail::ensure_resolved(field, c.x_lo, c.x_hi, c.t_lo, c.t_hi);
    const GridSpec& g = field.grid;
    const double tol = 1e-12 * g.dx();
    if (g.geometry == Geometry::interval) {
        c.i_lo = std::max(0, static_cast<int>(std::ceil((c.x_lo - g.xl) / g.dx() - tol)));
        c.i_hi = std::min(g.nx, static_cast<int>(std::floor((c.x_hi - g.xl) / g.dx() + tol)));
    }
    const auto lo = std::lower_bound(field.times.begin(), field.times.end(), c.t_lo - detail::time_tol(c.t_lo));
    const auto hi = std::upper_bound(field.times.begin(), field.times.end(), c.t_hi + detail::time_tol(c.t_hi));
    c.n_lo = static_cast<std::size_t>(lo - field.times.begin());
    c.n_hi = static_cast<std::size_t>(hi - field.times.begin());
    return c;
}

/// Supremum of u over the cylinder, or over ∂_pQ_r⁻ (bottom slice and lateral sides).
/// Values between grid nodes and snapshots follow the bilinear interpolant, whose maximum
/// is attained at nodes, at x₀ ± r, or at the end times.
inline double cylinder_sup(const SpaceTimeField& field, const IntrinsicCylinder& cyl)
{
    if (cyl.region != CylinderRegion::parabolic_lower)
        return detail::rectangle_extremes(field, cyl.x_lo, cyl.x_hi, cyl.t_lo, cyl.t_hi).max;
    const double bottom = detail::rectangle_extremes(field, cyl.x_lo, cyl.x_hi, cyl.t_lo, cyl.t_lo).max;
    const double left = detail::rectangle_extremes(field, cyl.x_lo, cyl.x_lo, cyl.t_lo, cyl.t_hi).max;
    const double right = detail::rectangle_extremes(field, cyl.x_hi, cyl.x_hi, cyl.t_lo, cyl.t_hi).max;
    return std::max({bottom, left, right});
}

inline double cylinder_sup(const SpaceTimeField& field, double x0, double t0, double r, CylinderRegion region)
{
    if (region == CylinderRegion::parabolic_lower) {
        IntrinsicCylinder c = make_cylinder(field, x0, t0, r, CylinderRegion::lower);
        c.region = region;
        return cylinder_sup(field, c);
    }
    return cylinder_sup(field, make_cylinder(field, x0, t0, r, region));
}

/// Smallest radius a probe accepts: two cells.
inline double resolution_floor(const GridSpec& grid) { return 2.0 * grid.dx(); }

// ---------------------------------------------------------------------------
// Probes

struct SpeedCheckResult {
    double r = 0.0;
    double s = 0.0;
    double c_used = 0.0;
    double shrunken_radius = 0.0;
    double later_time = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool vacuous = false;
    double worst_value = 0.0;     ///< max u on the shrunken ball at the later time
    double worst_x = 0.0;
};

/// u(·, t₀) = 0 on B_r(x₀) ⇒ u(·, t₀ + s^θ) = 0 on B_{max(0, r − c s)}(x₀), with "0" meaning <= threshold.
inline SpeedCheckResult finite_speed_check(const SpaceTimeField& field, double x0, double t0, double r, double s,
                                           double c, std::optional<double> threshold = std::nullopt)
{
    if (!(r > 0.0) || !(s >= 0.0) || !(c > 0.0))
        throw InvalidArgument("finite_speed_check needs r > 0, s >= 0, c > 0");
    SpeedCheckResult res;
    res.r = r;
    res.s = s;
    res.c_used = c;
    res.threshold = threshold ? *threshold : default_threshold(field);
    const double theta = compute_exponents(field.params).theta;
    res.later_time = t0 + (s == 0.0 ? 0.0 : std::pow(s, theta));

    const auto before = detail::rectangle_extremes(field, x0 - r, x0 + r, t0, t0);
    if (before.max > res.threshold) {
        std::ostringstream err;
        err << "finite_speed_check precondition violated: u(" << before.argmax_x << ", " << t0
            << ") = " << before.max << " exceeds threshold " << res.threshold << " on B_r";
        throw InvalidArgument(err.str());
    }
    res.shrunken_radius = std::max(0.0, r - c * s);
    if (res.shrunken_radius <= 0.0) {
        res.pass = true;
        res.vacuous = true;
        return res;
    }
    const auto after = detail::rectangle_extremes(field, x0 - res.shrunken_radius, x0 + res.shrunken_radius,
                                                  res.later_time, res.later_time);
    res.worst_value = after.max;
    res.worst_x = after.argmax_x;
    res.pass = after.max <= res.threshold;
    return res;
}

enum class ProbeVerdict { pass, fail, unresolved };

inline const char* to_string(ProbeVerdict v)
{
    return v == ProbeVerdict::pass ? "PASS" : v == ProbeVerdict::fail ? "FAIL" : "UNRESOLVED";
}

struct DensityEntry {
    double varrho = 0.0;
    ProbeVerdict verdict = ProbeVerdict::fail;
    double witness_x = 0.0;
    double witness_t = 0.0;
};

struct DensityReport {
    double x0 = 0.0, t0 = 0.0, r = 0.0;
    double threshold = 0.0;
    std::vector<DensityEntry> entries;
    std::optional<double> best;  ///< largest ϱ with a fully positive sub-cylinder
    bool pass() const { return best.has_value(); }
};

/// Searches sub-cylinders Q_{ϱr}(x′, t′) ⊂ Q_r⁻(x₀, t₀) on which u > threshold everywhere.
inline DensityReport density_probe(const SpaceTimeField& field, double x0, double t0, double r,
                                   const std::vector<double>& varrho_grid,
                                   std::optional<double> threshold = std::nullopt, int time_candidates = 9)
{
    DensityReport rep;
    rep.x0 = x0;
    rep.t0 = t0;
    rep.r = r;
    rep.threshold = threshold ? *threshold : default_threshold(field);
    const auto outer = make_cylinder(field, x0, t0, r, CylinderRegion::lower);
    const double dx = field.grid.dx();
    for (double rho : varrho_grid) {
        DensityEntry e;
        e.varrho = rho;
        const double rr = rho * r;
        if (!(rho > 0.0 && rho <= 1.0)) {
            throw InvalidArgument("varrho must lie in (0, 1]");
        }
        if (rr < resolution_floor(field.grid)) {
            e.verdict = ProbeVerdict::unresolved;
            rep.entries.push_back(e);
            continue;
        }
        const double h = std::pow(rr, outer.theta);
        const double tc_lo = outer.t_lo + h, tc_hi = outer.t_hi - h;
        const double xc_lo = outer.x_lo + rr, xc_hi = outer.x_hi - rr;
        if (tc_lo > tc_hi + detail::time_tol(tc_hi) || xc_lo > xc_hi + 1e-12) {
            rep.entries.push_back(e);
            continue;
        }
        std::vector<double> tcs;
        for (int k = 0; k < time_candidates; ++k)
            tcs.push_back(time_candidates == 1 ? tc_hi : tc_hi - (tc_hi - tc_lo) * k / (time_candidates - 1));
        bool found = false;
        for (double tc : tcs) {
            const int steps = std::max(1, static_cast<int>(std::ceil((xc_hi - xc_lo) / dx)));
            for (int k = 0; k <= steps && !found; ++k) {
                const double xc = k == steps ? xc_hi : xc_lo + (xc_hi - xc_lo) * k / steps;
                const auto ext = detail::rectangle_extremes(field, xc - rr, xc + rr, tc - h, tc + h);
                if (ext.min > rep.threshold) {
                    found = true;
                    e.witness_x = xc;
                    e.witness_t = tc;
                }
            }
            if (found)
                break;
        }
        e.verdict = found ? ProbeVerdict::pass : ProbeVerdict::fail;
        if (found && (!rep.best || rho > *rep.best))
            rep.best = rho;
        rep.entries.push_back(e);
    }
    return rep;
}

struct PorosityEntry {
    double delta = 0.0;
    ProbeVerdict verdict = ProbeVerdict::fail;
    int checked = 0;        ///< (z, r) pairs resolved at this δ
    double worst_z = 0.0;   ///< first failing boundary point
    double worst_r = 0.0;
};

struct PorosityReport {
    double t0 = 0.0;
    std::vector<double> radii;
    std::vector<double> boundary_points;
    double threshold = 0.0;
    bool vacuous = false;
    std::vector<PorosityEntry> entries;
    std::optional<double> best;  ///< largest uniformly achievable δ
    bool pass() const { return vacuous || best.has_value(); }
};

/// For each free-boundary point z and radius r, looks for B_{δr}(y) ⊂ B_r(z) with dist(y, 𝔉) >= δr.
inline PorosityReport porosity_probe(const SpaceTimeField& field, double t0, const std::vector<double>& radii,
                                     const std::vector<double>& delta_grid,
                                     std::optional<double> threshold = std::nullopt)
{
    PorosityReport rep;
    rep.t0 = t0;
    rep.radii = radii;
    rep.threshold = threshold ? *threshold : default_threshold(field);
    const std::size_t n = field.find_time(t0);
    if (n == SpaceTimeField::npos)
        throw ResolutionError("porosity_probe: no snapshot stored at t = " + std::to_string(t0));
    const GridSpec& g = field.grid;

    SpaceTimeField one;
    one.grid = g;
    one.params = field.params;
    one.times = {field.times[n]};
    one.slices = {field.slices[n]};
    const auto pos = extract_positivity(one, rep.threshold);
    std::vector<double> fb = pos.points(0);
    if (g.geometry == Geometry::radial) {
        const std::size_t k = fb.size();
        for (std::size_t i = 0; i < k; ++i)
            if (fb[i] > 0.0)
                fb.push_back(-fb[i]);
        std::sort(fb.begin(), fb.end());
    }
    rep.boundary_points = fb;
    const double lo_bound = g.geometry == Geometry::radial ? -g.xr : g.xl;
    if (fb.empty()) {
        rep.vacuous = true;
        if (!delta_grid.empty())
            rep.best = *std::max_element(delta_grid.begin(), delta_grid.end());
        return rep;
    }
    auto dist_to_fb = [&](double y) {
        double d = std::numeric_limits<double>::infinity();
        for (double z : fb)
            d = std::min(d, std::abs(y - z));
        return d;
    };
    for (double delta : delta_grid) {
        if (!(delta > 0.0 && delta <= 1.0))
            throw InvalidArgument("delta must lie in (0, 1]");
        PorosityEntry e;
        e.delta = delta;
        bool all = true;
        for (double z : fb) {
            for (double r : radii) {
                const double rr = delta * r;
                if (rr < resolution_floor(g))
                    continue;
                ++e.checked;
                const double reach = r - rr;
                const int steps = std::max(2, static_cast<int>(std::ceil(2.0 * reach / (0.25 * g.dx()))));
                bool ok = false;
                for (int k = 0; k <= steps && !ok; ++k) {
                    const double y = k == 0 ? z - reach : k == steps ? z + reach : z - reach + 2.0 * reach * k / steps;
                    if (y - rr < lo_bound - 1e-12 || y + rr > g.xr + 1e-12)
                        continue;
                    ok = dist_to_fb(y) >= rr * (1.0 - 1e-12);
                }
                if (!ok && all) {
                    all = false;
                    e.worst_z = z;
                    e.worst_r = r;
                }
            }
        }
        e.verdict = e.checked == 0 ? ProbeVerdict::unresolved : all ? ProbeVerdict::pass : ProbeVerdict::fail;
        if (e.verdict == ProbeVerdict::pass && (!rep.best || delta > *rep.best))
            rep.best = delta;
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON: every probe serializes as {probe, center, radii, verdicts, constants}.

inline json to_json(const SpeedCheckResult& r, double x0, double t0)
{
    return json{{"probe", "finite_speed"},
                {"center", {x0, t0}},
                {"radii", {r.r, r.shrunken_radius}},
                {"verdicts", {{"pass", r.pass}, {"vacuous", r.vacuous}}},
                {"constants",
                 {{"s", r.s},
                  {"c", r.c_used},
                  {"later_time", r.later_time},
                  {"threshold", r.threshold},
                  {"worst_value", r.worst_value},
                  {"worst_x", r.worst_x}}}};
}

inline json to_json(const DensityReport& r)
{
    json verdicts = json::array();
    for (const auto& e : r.entries)
        verdicts.push_back({{"varrho", e.varrho},
                            {"verdict", to_string(e.verdict)},
                            {"witness", {e.witness_x, e.witness_t}}});
    return json{{"probe", "density"},
                {"center", {r.x0, r.t0}},
                {"radii", {r.r}},
                {"verdicts", verdicts},
                {"constants", {{"varrho", r.best ? json(*r.best) : json(nullptr)}, {"threshold", r.threshold}}}};
}

inline json to_json(const PorosityReport& r)
{
    json verdicts = json::array();
    for (const auto& e : r.entries)
        verdicts.push_back({{"delta", e.delta},
                            {"verdict", to_string(e.verdict)},
                            {"checked", e.checked},
                            {"first_failure", {e.worst_z, e.worst_r}}});
    return json{{"probe", "porosity"},
                {"center", {{"t", r.t0}, {"boundary_points", r.boundary_points}}},
                {"radii", r.radii},
                {"verdicts", verdicts},
                {"constants",
                 {{"delta", r.best ? json(*r.best) : json(nullptr)},
                  {"vacuous", r.vacuous},
                  {"threshold", r.threshold}}}};
}

}  // namespace deadcore
