#pragma once

// Quantitative checks of the regularity estimates on stored fields.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deadcore/core.hpp"
#include "deadcore/field.hpp"
#include "deadcore/geometry.hpp"

namespace deadcore {

struct LogLogFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
};

/// Ordinary least squares of log y on log x over the pairs with y > 0.
inline LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.0 && x[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    LogLogFit fit;
    fit.points = lx.size();
    if (fit.points < 2)
        return fit;
    const double n = static_cast<double>(fit.points);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += e * e;
    }
    // A perfect power law has syy > 0 and ssr ~ 0; a constant sequence is a perfect fit too.
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

struct RateReport {
    std::string quantity;
    double x0 = 0.0, t0 = 0.0;
    std::vector<double> radii;
    std::vector<double> values;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    double target = 0.0;
    double tolerance = 0.0;
    /// Envelope constants values[k] / radii[k]^target (reported by the non-degeneracy fit).
    std::vector<double> normalized;
    std::optional<double> measured_constant;
    std::vector<std::string> notes;
    bool pass = false;
};

namespace detail {

inline void check_radii(const SpaceTimeField& field, const std::vector<double>& radii, bool decreasing)
{
    if (radii.empty())
        throw InvalidArgument("radius ladder is empty");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0))
            throw InvalidArgument("radii must be positive");
        if (k > 0 && decreasing && !(radii[k] < radii[k - 1]))
            throw InvalidArgument("radii must be strictly decreasing");
        if (k > 0 && !decreasing && !(radii[k] > radii[k - 1]))
            throw InvalidArgument("radii must be strictly increasing");
        if (radii[k] < resolution_floor(field.grid)) {
            std::ostringstream err;
            err << "radius " << radii[k] << " below resolution floor " << resolution_floor(field.grid) << " (2 dx)";
            throw ResolutionError(err.str());
        }
    }
}

inline void finish_fit(RateReport& rep)
{
    for (std::size_t k = 0; k < rep.values.size(); ++k)
        if (!(rep.values[k] > 0.0)) {
            std::ostringstream note;
            note << "radius " << rep.radii[k] << " dropped (value " << rep.values[k] << ")";
            rep.notes.push_back(note.str());
        }
    const LogLogFit fit = fit_log_log(rep.radii, rep.values);
    if (fit.points < 3) {
        std::ostringstream err;
        err << rep.quantity << ": only " << fit.points << " usable radii (need 3)";
        throw InvalidArgument(err.str());
    }
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.r2 = fit.r2;
    rep.pass = std::isfinite(fit.slope) && std::abs(fit.slope - rep.target) <= rep.tolerance && fit.r2 >= 0.95;
}

}  // namespace detail

/// Fit of log sup_{Q_r⁻} u against log r; target α₀.
inline RateReport growth_rate_fit(const SpaceTimeField& field, double x0, double t0, const std::vector<double>& radii,
                                  double tolerance = 0.05)
{
    detail::check_radii(field, radii, true);
    RateReport rep;
    rep.quantity = "growth_rate";
    rep.x0 = x0;
    rep.t0 = t0;
    rep.radii = radii;
    rep.target = compute_exponents(field.params).alpha0;
    rep.tolerance = tolerance;
    for (double r : radii)
        rep.values.push_back(cylinder_sup(field, x0, t0, r, CylinderRegion::lower));
    detail::finish_fit(rep);
    return rep;
}

/// sup over ∂_pQ_r⁻ divided by r^{α₀}; the minimum is the measured envelope constant.
/// PASS iff that minimum is positive and max/min <= ratio_limit.
inline RateReport nondegeneracy_fit(const SpaceTimeField& field, double x0, double t0,
                                    const std::vector<double>& radii, double ratio_limit = 10.0)
{
    detail::check_radii(field, radii, true);
    RateReport rep;
    rep.quantity = "nondegeneracy";
    rep.x0 = x0;
    rep.t0 = t0;
    rep.radii = radii;
    rep.target = compute_exponents(field.params).alpha0;
    rep.tolerance = ratio_limit;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double r : radii) {
        const double s = cylinder_sup(field, x0, t0, r, CylinderRegion::parabolic_lower);
        rep.values.push_back(s);
        const double c = s / std::pow(r, rep.target);
        rep.normalized.push_back(c);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    rep.measured_constant = lo;
    const LogLogFit fit = fit_log_log(rep.radii, rep.values);
    if (fit.points >= 3) {
        rep.slope = fit.slope;
        rep.intercept = fit.intercept;
        rep.r2 = fit.r2;
    } else {
        rep.notes.push_back("slope not fitted: fewer than 3 positive values");
    }
    rep.pass = lo > 0.0 && hi / lo <= ratio_limit;
    return rep;
}

/// |∇u| at every node of a slice: centered where both neighbours are positive, one-sided into
/// the positivity set next to the free boundary, 0 on the dead core.
inline std::vector<double> gradient_magnitude(const GridSpec& g, const std::vector<double>& u, double threshold)
{
    const double dx = g.dx();
    std::vector<double> grad(u.size(), 0.0);
    for (int i = 0; i <= g.nx; ++i) {
        if (!(u[i] > threshold))
            continue;
        const bool has_left = i > 0 || g.geometry == Geometry::radial;
        const bool has_right = i < g.nx;
        const double left = i > 0 ? u[i - 1] : (g.geometry == Geometry::radial ? u[1] : 0.0);
        const double right = has_right ? u[i + 1] : 0.0;
        const bool left_pos = has_left && left > threshold;
        const bool right_pos = has_right && right > threshold;
        if (left_pos && right_pos)
            grad[i] = std::abs(right - left) / (2.0 * dx);
        else if (right_pos)
            grad[i] = std::abs(right - u[i]) / dx;
        else if (left_pos)
            grad[i] = std::abs(u[i] - left) / dx;
        else if (has_right)
            grad[i] = std::abs(right - u[i]) / dx;
        else
            grad[i] = std::abs(u[i] - left) / dx;
    }
    return grad;
}

/// Fit of log sup_{Q_r⁻} |∇u| against log r; target (1+q)/(p−1−q).
inline RateReport gradient_rate_fit(const SpaceTimeField& field, double x0, double t0,
                                    const std::vector<double>& radii, double tolerance = 0.3,
                                    std::optional<double> threshold = std::nullopt)
{
    detail::check_radii(field, radii, true);
    RateReport rep;
    rep.quantity = "gradient_rate";
    rep.x0 = x0;
    rep.t0 = t0;
    rep.radii = radii;
    rep.target = compute_exponents(field.params).grad_alpha;
    rep.tolerance = tolerance;
    const double eps = threshold ? *threshold : default_threshold(field);
    const GridSpec& g = field.grid;
    for (double r : radii) {
        const auto cyl = make_cylinder(field, x0, t0, r, CylinderRegion::lower);
        double sup = 0.0;
        for (double t : detail::time_samples(field, cyl.t_lo, cyl.t_hi)) {
            const auto grad = gradient_magnitude(g, detail::slice_at(field, t), eps);
            detail::for_each_in_segment(g, grad, cyl.x_lo, cyl.x_hi, [&](double, double v) { sup = std::max(sup, v); });
        }
        rep.values.push_back(sup);
    }
    detail::finish_fit(rep);
    return rep;
}

struct DyadicSequence {
    double x0 = 0.0, t0 = 0.0;
    int j_min = 0, j_max = 0;
    std::vector<double> sups;     ///< S_j for j = j_min..j_max
    std::vector<char> member;     ///< S_j <= A S_{j+1}, for j = j_min..j_max−1
    double c_star = 0.0;
    double amplification = 0.0;   ///< A = 2^{α₀} max{1, 1/C*}
    double implied_constant = 0.0;  ///< sup over members of S_{j+1} 2^{j α₀}
    double normalized_sup = 0.0;    ///< sup_j S_j 2^{j α₀}
    double alpha0 = 0.0;
};

/// Finest j with 2^{−j} >= 2 dx.
inline int finest_dyadic_level(const GridSpec& grid)
{
    return static_cast<int>(std::floor(std::log2(1.0 / resolution_floor(grid)) + 1e-12));
}

/// S_j = sup over Q⁻_{2^{−j}}(x₀, t₀) and membership in 𝕍 for the amplification A.
/// Without c_star the envelope constant is measured by nondegeneracy_fit over the same radii.
inline DyadicSequence dyadic_sequence(const SpaceTimeField& field, double x0, double t0, int j_max,
                                      std::optional<double> c_star = std::nullopt, int j_min = 0)
{
    const int finest = finest_dyadic_level(field.grid);
    if (j_max > finest) {
        std::ostringstream err;
        err << "dyadic level j_max=" << j_max << " unresolved; finest legal j is " << finest;
        throw ResolutionError(err.str());
    }
    if (j_min < 0 || j_max <= j_min)
        throw InvalidArgument("dyadic_sequence needs 0 <= j_min < j_max");
    DyadicSequence seq;
    seq.x0 = x0;
    seq.t0 = t0;
    seq.j_min = j_min;
    seq.j_max = j_max;
    seq.alpha0 = compute_exponents(field.params).alpha0;
    std::vector<double> radii;
    for (int j = j_min; j <= j_max; ++j) {
        const double r = std::ldexp(1.0, -j);
        radii.push_back(r);
        seq.sups.push_back(cylinder_sup(field, x0, t0, r, CylinderRegion::lower));
    }
    if (c_star) {
        seq.c_star = *c_star;
    } else {
        seq.c_star = *nondegeneracy_fit(field, x0, t0, radii).measured_constant;
    }
    seq.amplification = std::pow(2.0, seq.alpha0) * (seq.c_star > 0.0 ? std::max(1.0, 1.0 / seq.c_star)
                                                                        : std::numeric_limits<double>::infinity());
    for (int j = j_min; j < j_max; ++j) {
        const double sj = seq.sups[j - j_min], sj1 = seq.sups[j - j_min + 1];
        const bool in = sj == 0.0 || sj <= seq.amplification * sj1;
        seq.member.push_back(in);
        if (in)
            seq.implied_constant = std::max(seq.implied_constant, sj1 * std::pow(2.0, j * seq.alpha0));
    }
    for (int j = j_min; j <= j_max; ++j)
        seq.normalized_sup = std::max(seq.normalized_sup, seq.sups[j - j_min] * std::pow(2.0, j * seq.alpha0));
    return seq;
}

/// Membership recomputed from the stored S_j with a different amplification.
inline std::vector<char> dyadic_membership(const std::vector<double>& sups, double amplification)
{
    std::vector<char> m;
    for (std::size_t j = 0; j + 1 < sups.size(); ++j)
        m.push_back(sups[j] == 0.0 || sups[j] <= amplification * sups[j + 1]);
    return m;
}

struct BlowupResult {
    SpaceTimeField field;      ///< on [−1, 1] × [−1, 1] (or [−1, 0] when lower_only)
    double epsilon = 0.0;
    double x0 = 0.0, t0 = 0.0;
    /// Bilinear interpolation error bound (dx² max|u_xx| + dt² max|u_tt|)/8 in rescaled units.
    double interpolation_error = 0.0;
    /// Rescaled nodes whose preimage is a stored node at a stored time (no interpolation).
    std::vector<std::vector<char>> shared;
};

/// Largest ε for which Q_ε(x₀, t₀) (or Q_ε⁻) lies inside the stored data.
inline double max_blowup_epsilon(const SpaceTimeField& field, double x0, double t0, bool lower_only = false)
{
    const GridSpec& g = field.grid;
    const double theta = compute_exponents(field.params).theta;
    const double lo_bound = g.geometry == Geometry::radial ? -g.xr : g.xl;
    double e = std::min(x0 - lo_bound, g.xr - x0);
    e = std::min(e, std::pow(std::max(0.0, t0 - field.times.front()), 1.0 / theta));
    if (!lower_only)
        e = std::min(e, std::pow(std::max(0.0, field.times.back() - t0), 1.0 / theta));
    return std::max(0.0, e);
}

/// u_ε(x, t) = u(x₀ + εx, t₀ + ε^θ t) / ε^{α₀} sampled on a uniform grid of the unit cylinder.
inline BlowupResult blowup_rescale(const SpaceTimeField& field, double x0, double t0, double epsilon, int nx = 16,
                                   int nt = 16, bool lower_only = false)
{
    if (!(epsilon > 0.0))
        throw InvalidArgument("blow-up epsilon must be > 0");
    const Exponents ex = compute_exponents(field.params);
    const double legal = max_blowup_epsilon(field, x0, t0, lower_only);
    if (epsilon > legal * (1.0 + 1e-12)) {
        std::ostringstream err;
        err << "blow-up zoom epsilon=" << epsilon << " leaves the stored domain; maximal legal epsilon is " << legal;
        throw DomainError(err.str());
    }
    BlowupResult res;
    res.epsilon = epsilon;
    res.x0 = x0;
    res.t0 = t0;
    const double tscale = std::pow(epsilon, ex.theta);
    const double uscale = std::pow(epsilon, ex.alpha0);
    res.field.grid = GridSpec::interval(-1.0, 1.0, nx, lower_only ? 0.0 : 1.0);
    res.field.params = field.params;
    const std::vector<double> times = time_ladder(-1.0, lower_only ? 0.0 : 1.0, nt);
    const GridSpec& g = field.grid;
    const double dx_tol = 1e-9 * g.dx();
    for (double s : times) {
        const double t = t0 + tscale * s;
        const auto slice = detail::slice_at(field, t);
        const bool time_shared = field.find_time(t) != SpaceTimeField::npos;
        std::vector<double> out(nx + 1);
        std::vector<char> shared(nx + 1);
        for (int i = 0; i <= nx; ++i) {
            const double y = x0 + epsilon * res.field.grid.x(i);
            out[i] = detail::interp(g, slice, y) / uscale;
            const double k = (std::abs(g.geometry == Geometry::radial ? std::abs(y) : y) - g.xl) / g.dx();
            shared[i] = time_shared && std::abs(k - std::round(k)) * g.dx() <= dx_tol;
        }
        res.field.times.push_back(s);
        res.field.slices.push_back(std::move(out));
        res.shared.push_back(std::move(shared));
    }
    res.field.boundary.left = [f = res.field](double s) { return f.sample(-1.0, s); };
    res.field.boundary.right = [f = res.field](double s) { return f.sample(1.0, s); };

    // Second differences of the stored data inside the window bound the interpolation error.
    double uxx = 0.0, utt = 0.0, dt = 0.0;
    const double t_lo = t0 - tscale, t_hi = lower_only ? t0 : t0 + tscale;
    for (std::size_t n = 0; n < field.times.size(); ++n) {
        if (field.times[n] < t_lo - detail::time_tol(t_lo) || field.times[n] > t_hi + detail::time_tol(t_hi))
            continue;
        const auto& u = field.slices[n];
        for (int i = 1; i < g.nx; ++i)
            uxx = std::max(uxx, std::abs(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (g.dx() * g.dx()));
        if (n > 0 && n + 1 < field.times.size()) {
            const double h0 = field.times[n] - field.times[n - 1], h1 = field.times[n + 1] - field.times[n];
            dt = std::max(dt, std::max(h0, h1));
            for (int i = 0; i <= g.nx; ++i) {
                const double d2 = 2.0 * (h0 * field.slices[n + 1][i] - (h0 + h1) * u[i] + h1 * field.slices[n - 1][i]) /
                                  (h0 * h1 * (h0 + h1));
                utt = std::max(utt, std::abs(d2));
            }
        }
    }
    res.interpolation_error = (g.dx() * g.dx() * uxx + dt * dt * utt) / 8.0 / uscale;
    return res;
}

enum class GrowthClass { subcritical, critical_or_above };

inline const char* to_string(GrowthClass c) { return c == GrowthClass::subcritical ? "SUBCRITICAL" : "CRITICAL"; }

struct LiouvilleReport {
    double x0 = 0.0, t0 = 0.0;
    std::vector<double> radii;
    std::vector<double> rho;   ///< sup_{Q_r} u / r^{α₀}
    GrowthClass verdict = GrowthClass::critical_or_above;
    double decay_factor = 1.0;  ///< rho.front() / rho.back()
    double spread = 0.0;        ///< max rho / min rho − 1
};

/// SUBCRITICAL when ρ_r falls by a factor >= 10 across the increasing ladder (or vanishes).
inline LiouvilleReport liouville_classify(const SpaceTimeField& field, double x0, double t0,
                                          const std::vector<double>& radii_increasing)
{
    if (radii_increasing.size() < 3)
        throw InvalidArgument("liouville_classify needs at least 3 radii");
    detail::check_radii(field, radii_increasing, false);
    LiouvilleReport rep;
    rep.x0 = x0;
    rep.t0 = t0;
    rep.radii = radii_increasing;
    const double a0 = compute_exponents(field.params).alpha0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double r : radii_increasing) {
        const double v = cylinder_sup(field, x0, t0, r, CylinderRegion::full) / std::pow(r, a0);
        rep.rho.push_back(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == 0.0) {
        rep.verdict = GrowthClass::subcritical;
        rep.decay_factor = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.spread = lo > 0.0 ? hi / lo - 1.0 : std::numeric_limits<double>::infinity();
    rep.decay_factor = rep.rho.back() > 0.0 ? rep.rho.front() / rep.rho.back() : std::numeric_limits<double>::infinity();
    rep.verdict = rep.decay_factor >= 10.0 ? GrowthClass::subcritical : GrowthClass::critical_or_above;
    return rep;
}

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> energy;     ///< Σ w_i u_i² per snapshot
    double worst_increase = 0.0;    ///< max (E_{n+1} − E_n)
    double tolerance = 0.0;
    bool nonincreasing = true;
    bool positive_data = false;     ///< initial data > 0 on the compact subdomain
    double interior_min = 0.0;      ///< min over snapshots and subdomain nodes
    bool interior_positive = true;
    bool pass = true;
};

/// Discrete ∫u² per snapshot and the interior minimum on the subdomain that keeps
/// a `margin` fraction of the domain away from each end.
inline EnergyReport energy_decay_check(const SpaceTimeField& field, double margin = 0.1, double rel_tol = 1e-10)
{
    field.params.validate();
    if (!field.params.critical)
        throw InvalidArgument("energy_decay_check requires critical parameters (q = p - 1)");
    const GridSpec& g = field.grid;
    for (std::size_t n = 0; n < field.slices.size(); ++n) {
        const auto& u = field.slices[n];
        if (u[g.nx] != 0.0 || (g.geometry == Geometry::interval && u[0] != 0.0))
            throw InvalidArgument("energy_decay_check requires zero Dirichlet data (nonzero at t=" +
                                  std::to_string(field.times[n]) + ")");
    }
    EnergyReport rep;
    rep.times = field.times;
    for (const auto& u : field.slices) {
        double e = 0.0;
        for (int i = 0; i <= g.nx; ++i)
            e += field.node_weight(i) * u[i] * u[i];
        rep.energy.push_back(e);
    }
    const double scale = rep.energy.empty() ? 0.0 : *std::max_element(rep.energy.begin(), rep.energy.end());
    rep.tolerance = rel_tol * std::max(scale, std::numeric_limits<double>::min());
    rep.worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n + 1 < rep.energy.size(); ++n)
        rep.worst_increase = std::max(rep.worst_increase, rep.energy[n + 1] - rep.energy[n]);
    if (rep.energy.size() < 2)
        rep.worst_increase = 0.0;
    rep.nonincreasing = rep.worst_increase <= rep.tolerance;

    const double lo = g.geometry == Geometry::radial ? 0.0 : g.xl + margin * (g.xr - g.xl);
    const double hi = g.xr - margin * (g.xr - g.xl);
    auto sub_min = [&](const std::vector<double>& u) {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= g.nx; ++i)
            if (g.x(i) >= lo && g.x(i) <= hi)
                m = std::min(m, u[i]);
        return m;
    };
    if (!field.slices.empty()) {
        rep.positive_data = sub_min(field.slices.front()) > 0.0;
        rep.interior_min = std::numeric_limits<double>::infinity();
        for (const auto& u : field.slices)
            rep.interior_min = std::min(rep.interior_min, sub_min(u));
        rep.interior_positive = !rep.positive_data || rep.interior_min > 0.0;
    }
    rep.pass = rep.nonincreasing && rep.interior_positive;
    return rep;
}

// ---------------------------------------------------------------------------
// Reports

struct SummaryRow {
    std::string experiment;
    std::string quantity;
    std::string target;
    double measured = 0.0;
    std::string tolerance;
    bool pass = false;
};

inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    os << "experiment,quantity,target,measured,tolerance,verdict\n";
    for (const auto& r : rows)
        os << r.experiment << ',' << r.quantity << ',' << r.target << ',' << format_number(r.measured) << ','
           << r.tolerance << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
}

inline json json_number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

inline json to_json(const RateReport& r)
{
    json values = json::array(), normalized = json::array();
    for (double v : r.values)
        values.push_back(json_number(v));
    for (double v : r.normalized)
        normalized.push_back(json_number(v));
    return json{{"analysis", r.quantity},
                {"center", {r.x0, r.t0}},
                {"radii", r.radii},
                {"values", values},
                {"normalized", normalized},
                {"slope", json_number(r.slope)},
                {"intercept", json_number(r.intercept)},
                {"r2", json_number(r.r2)},
                {"target", r.target},
                {"tolerance", r.tolerance},
                {"measured_constant", r.measured_constant ? json_number(*r.measured_constant) : json(nullptr)},
                {"notes", r.notes},
                {"verdict", r.pass ? "PASS" : "FAIL"}};
}

inline json to_json(const DyadicSequence& s)
{
    std::vector<bool> member(s.member.begin(), s.member.end());
    return json{{"analysis", "dyadic"},
                {"center", {s.x0, s.t0}},
                {"j_range", {s.j_min, s.j_max}},
                {"sups", s.sups},
                {"member", member},
                {"c_star", s.c_star},
                {"amplification", json_number(s.amplification)},
                {"implied_constant", s.implied_constant},
                {"normalized_sup", s.normalized_sup}};
}

inline json to_json(const LiouvilleReport& r)
{
    return json{{"analysis", "liouville"},
                {"center", {r.x0, r.t0}},
                {"radii", r.radii},
                {"rho", r.rho},
                {"decay_factor", json_number(r.decay_factor)},
                {"spread", json_number(r.spread)},
                {"verdict", to_string(r.verdict)}};
}

inline json to_json(const EnergyReport& r)
{
    return json{{"analysis", "energy_decay"},
                {"times", r.times},
                {"energy", r.energy},
                {"worst_increase", r.worst_increase},
                {"tolerance", r.tolerance},
                {"interior_min", json_number(r.interior_min)},
                {"positive_data", r.positive_data},
                {"verdict", r.pass ? "PASS" : "FAIL"}};
}

}  // namespace deadcore
