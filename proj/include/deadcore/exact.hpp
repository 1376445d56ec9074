#pragma once

// Closed-form solutions and barrier functions of Δ_p u − ∂u/∂t = λ₀ u₊^q,
// and a finite-difference residual that certifies them against the equation.

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deadcore/core.hpp"

namespace deadcore {

using Point = std::vector<double>;

enum class ClosedFormKind {
    ode_deadcore,          ///< [(1−q)λ₀(t₀−t)]₊^{1/(1−q)}
    halfspace,             ///< C (±x_i)₊^{α₀}
    radial,                ///< C (|x−x₀|−R₀)₊^{α₀}
    barrier_growth,        ///< 𝔠₁(a|x|^{p/(p−1)} + b t^γ)^{(p−1)/(p−1−q)}, t >= 0
    barrier_nondeg,        ///< 𝔠(|x|^{p/(p−1)} + (−t)^γ)^{(p−1)/(p−1−q)}, t <= 0
    critical_exp_p2,       ///< e^{√λ₀ x_i} + e^{−λ₀ t}, p = 2
    critical_exp_general,  ///< e^{(λ₀/(p−1))^{1/p} x_i}
    critical_time_p_gt2,   ///< ((p−2)λ₀ t)^{1/(2−p)}, p > 2, t > 0
};

inline const char* to_string(ClosedFormKind kind)
{
    switch (kind) {
    case ClosedFormKind::ode_deadcore: return "ode_deadcore";
    case ClosedFormKind::halfspace: return "halfspace";
    case ClosedFormKind::radial: return "radial";
    case ClosedFormKind::barrier_growth: return "barrier_growth";
    case ClosedFormKind::barrier_nondeg: return "barrier_nondeg";
    case ClosedFormKind::critical_exp_p2: return "critical_exp_p2";
    case ClosedFormKind::critical_exp_general: return "critical_exp_general";
    case ClosedFormKind::critical_time_p_gt2: return "critical_time_p_gt2";
    }
    return "unknown";
}

struct ClosedForm {
    ClosedFormKind kind = ClosedFormKind::ode_deadcore;
    ProblemParams params;
    double t0 = 0.0;         ///< extinction time (ode_deadcore)
    int direction = 0;       ///< coordinate index (halfspace, critical exp kinds)
    int sign = 1;            ///< +1 for (x_i)₊, −1 for (x_i)₋
    Point center;            ///< x₀ (radial)
    double core_radius = 0;  ///< R₀ (radial)
    double a = 1.0;          ///< barrier_growth
    double b = 1.0;          ///< barrier_growth
    double amplitude = 0.0;  ///< C_{p,q}, 𝔠₁ or 𝔠 depending on kind

    int dim() const { return params.dim; }
};

namespace detail {

inline double constant_lambda(const ProblemParams& params, const char* what)
{
    if (!params.lambda0.is_constant())
        throw InvalidArgument(std::string(what) + " requires a constant modulus");
    return params.lambda0.constant_value();
}

inline double norm(const Point& x)
{
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

inline void check_direction(const ProblemParams& params, int direction)
{
    if (direction < 0 || direction >= params.dim)
        throw InvalidArgument("direction index " + std::to_string(direction) + " outside [0, " +
                              std::to_string(params.dim) + ")");
}

}  // namespace detail

inline ClosedForm make_ode_deadcore(const ProblemParams& params, double t0)
{
    detail::require_noncritical(params, "ode_deadcore");
    detail::constant_lambda(params, "ode_deadcore");
    ClosedForm cf;
    cf.kind = ClosedFormKind::ode_deadcore;
    cf.params = params;
    cf.t0 = t0;
    return cf;
}

/// Half-space profile C (±x_i)₊^{α₀}.  The profile depends on one coordinate only,
/// so its amplitude is the one-dimensional C_{p,q} regardless of params.dim.
inline ClosedForm make_halfspace(const ProblemParams& params, int direction = 0, int sign = 1)
{
    detail::require_noncritical(params, "halfspace");
    detail::check_direction(params, direction);
    if (sign != 1 && sign != -1)
        throw InvalidArgument("halfspace sign must be +1 or -1");
    ClosedForm cf;
    cf.kind = ClosedFormKind::halfspace;
    cf.params = params;
    cf.direction = direction;
    cf.sign = sign;
    cf.amplitude = cpq_constant(params.p, params.q, 1, detail::constant_lambda(params, "halfspace"));
    return cf;
}

/// Radial profile C_{p,q}(|x−x₀|−R₀)₊^{α₀} with the N-dimensional C_{p,q}.
/// Exact for R₀ = 0; for R₀ > 0 and N > 1 use pde_residual to measure the defect.
inline ClosedForm make_radial(const ProblemParams& params, Point center, double core_radius)
{
    detail::require_noncritical(params, "radial");
    if (static_cast<int>(center.size()) != params.dim)
        throw InvalidArgument("radial center has dimension " + std::to_string(center.size()) + ", expected " +
                              std::to_string(params.dim));
    if (!(core_radius >= 0.0))
        throw InvalidArgument("radial core radius must be >= 0");
    ClosedForm cf;
    cf.kind = ClosedFormKind::radial;
    cf.params = params;
    cf.center = std::move(center);
    cf.core_radius = core_radius;
    cf.amplitude = cpq_constant(params);
    return cf;
}

inline ClosedForm make_barrier_growth(const ProblemParams& params, double a, double b)
{
    if (!(b > 0.0))
        throw InvalidArgument("barrier_growth requires b > 0");
    ClosedForm cf;
    cf.kind = ClosedFormKind::barrier_growth;
    cf.params = params;
    cf.a = a;
    cf.b = b;
    cf.amplitude = barrier_constant_growth(params, a);
    return cf;
}

/// Non-degeneracy barrier Φ̂ with the given constant (defaults to the stated 𝔠).
inline ClosedForm make_barrier_nondeg(const ProblemParams& params, std::optional<double> constant = std::nullopt)
{
    ClosedForm cf;
    cf.kind = ClosedFormKind::barrier_nondeg;
    cf.params = params;
    cf.amplitude = constant ? *constant : barrier_constant_nondeg(params);
    if (!(cf.amplitude >= 0.0))
        throw InvalidArgument("barrier_nondeg constant must be >= 0");
    detail::require_noncritical(params, "barrier_nondeg");
    return cf;
}

enum class CriticalVariant { exp_direction, time_power, exp_sum };

/// Smooth positive solutions of the critical equation Δ_p u − ∂u/∂t = λ₀ u^{p−1}.
inline ClosedForm critical_solutions(const ProblemParams& params, CriticalVariant variant, int direction = 0)
{
    params.validate();
    if (!params.critical)
        throw InvalidArgument("critical_solutions requires the critical flag (q = p - 1)");
    detail::constant_lambda(params, "critical_solutions");
    ClosedForm cf;
    cf.params = params;
    cf.direction = direction;
    switch (variant) {
    case CriticalVariant::exp_direction:
        detail::check_direction(params, direction);
        cf.kind = ClosedFormKind::critical_exp_general;
        break;
    case CriticalVariant::time_power:
        if (!(params.p > 2.0))
            throw InvalidArgument("time-power critical solution requires p > 2 (got p=" + std::to_string(params.p) +
                                  ")");
        cf.kind = ClosedFormKind::critical_time_p_gt2;
        break;
    case CriticalVariant::exp_sum:
        if (params.p != 2.0)
            throw InvalidArgument("exp-sum critical solution requires p = 2 (got p=" + std::to_string(params.p) +
                                  ")");
        detail::check_direction(params, direction);
        cf.kind = ClosedFormKind::critical_exp_p2;
        break;
    }
    return cf;
}

/// Value of the closed form at (x, t).  Dead-core kinds return exactly 0 on their dead core.
inline double evaluate(const ClosedForm& cf, const Point& x, double t)
{
    if (static_cast<int>(x.size()) != cf.dim())
        throw DomainError("point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(cf.dim()));
    const double p = cf.params.p;
    const double q = cf.params.q;
    switch (cf.kind) {
    case ClosedFormKind::ode_deadcore: {
        const double lambda = cf.params.lambda0.constant_value();
        const double base = (1.0 - q) * lambda * (cf.t0 - t);
        return base <= 0.0 ? 0.0 : std::pow(base, 1.0 / (1.0 - q));
    }
    case ClosedFormKind::halfspace: {
        const double s = cf.sign * x[cf.direction];
        return s <= 0.0 ? 0.0 : cf.amplitude * std::pow(s, p / (p - q - 1.0));
    }
    case ClosedFormKind::radial: {
        Point d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            d[i] = x[i] - cf.center[i];
        const double s = detail::norm(d) - cf.core_radius;
        return s <= 0.0 ? 0.0 : cf.amplitude * std::pow(s, p / (p - q - 1.0));
    }
    case ClosedFormKind::barrier_growth: {
        if (t < 0.0)
            throw DomainError("barrier_growth is defined for t >= 0 (got t=" + std::to_string(t) + ")");
        const double gap = p - 1.0 - q;
        const double gamma = gap / ((p - 1.0) * (1.0 - q));
        const double psi = cf.a * std::pow(detail::norm(x), p / (p - 1.0)) + cf.b * std::pow(t, gamma);
        return cf.amplitude * std::pow(psi, (p - 1.0) / gap);
    }
    case ClosedFormKind::barrier_nondeg: {
        if (t > 0.0)
            throw DomainError("barrier_nondeg is defined for t <= 0 (got t=" + std::to_string(t) + ")");
        const double gap = p - 1.0 - q;
        const double gamma = gap / ((p - 1.0) * (1.0 - q));
        const double psi = std::pow(detail::norm(x), p / (p - 1.0)) + std::pow(-t, gamma);
        return cf.amplitude * std::pow(psi, (p - 1.0) / gap);
    }
    case ClosedFormKind::critical_exp_p2: {
        const double lambda = cf.params.lambda0.constant_value();
        return std::exp(std::sqrt(lambda) * x[cf.direction]) + std::exp(-lambda * t);
    }
    case ClosedFormKind::critical_exp_general: {
        const double lambda = cf.params.lambda0.constant_value();
        return std::exp(std::pow(lambda / (p - 1.0), 1.0 / p) * x[cf.direction]);
    }
    case ClosedFormKind::critical_time_p_gt2: {
        if (!(t > 0.0))
            throw DomainError("critical time-power solution is defined for t > 0 (got t=" + std::to_string(t) +
                              ")");
        const double lambda = cf.params.lambda0.constant_value();
        return std::pow((p - 2.0) * lambda * t, 1.0 / (2.0 - p));
    }
    }
    return 0.0;
}

/// Distance from (x, t) to the kind's free boundary: spatial for stationary profiles,
/// temporal for ode_deadcore, to the origin of space-time for barriers; +inf if none.
inline double free_boundary_distance(const ClosedForm& cf, const Point& x, double t)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (cf.kind) {
    case ClosedFormKind::ode_deadcore: return std::abs(t - cf.t0);
    case ClosedFormKind::halfspace: return std::abs(x[cf.direction]);
    case ClosedFormKind::radial: {
        Point d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            d[i] = x[i] - cf.center[i];
        const double r = detail::norm(d);
        return cf.core_radius > 0.0 ? std::abs(r - cf.core_radius) : r;
    }
    case ClosedFormKind::barrier_growth:
    case ClosedFormKind::barrier_nondeg: {
        if (cf.amplitude == 0.0)
            return inf;
        const double r = detail::norm(x);
        return std::sqrt(r * r + t * t);
    }
    default: return inf;
    }
}

enum class Stencil {
    /// Flux form with 3-point differences in space, centered 2-point in time (the solver's operator).
    second_order,
    /// Expanded form |∇u|^{p−2}(Δu + (p−2)∇u·D²u·∇u/|∇u|²) with 5-point 4th-order differences.
    fourth_order,
};

struct ResidualParts {
    double diffusion = 0.0;   ///< Δ_p u
    double time_rate = 0.0;   ///< ∂u/∂t
    double absorption = 0.0;  ///< λ₀ u₊^q

    double value() const { return diffusion - time_rate - absorption; }
    double scale() const { return std::max({std::abs(diffusion), std::abs(time_rate), std::abs(absorption)}); }
};

namespace detail {

inline double modulus_for(const ClosedForm& cf)
{
    // barriers are checked against the worst admissible modulus, m
    if (cf.kind == ClosedFormKind::barrier_growth || cf.kind == ClosedFormKind::barrier_nondeg)
        return cf.params.lambda_lo;
    return cf.params.lambda0.constant_value();
}

inline void check_stencil_domain(const ClosedForm& cf, const Point& x, double t, double h, double reach)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidArgument("pde_residual requires h > 0");
    if (free_boundary_distance(cf, x, t) < 2.0 * h) {
        std::ostringstream err;
        err << "evaluation point (t=" << t << ", x0=" << (x.empty() ? 0.0 : x[0])
            << ") lies within 2h of the free boundary of " << to_string(cf.kind);
        throw DomainError(err.str());
    }
    const double t_lo = t - reach * h;
    const double t_hi = t + reach * h;
    if (cf.kind == ClosedFormKind::barrier_nondeg && t_hi > 0.0)
        throw DomainError("time stencil t+" + std::to_string(reach) + "h = " + std::to_string(t_hi) +
                          " leaves barrier_nondeg domain t <= 0");
    if (cf.kind == ClosedFormKind::barrier_growth && t_lo < 0.0)
        throw DomainError("time stencil t-" + std::to_string(reach) + "h = " + std::to_string(t_lo) +
                          " leaves barrier_growth domain t >= 0");
    if (cf.kind == ClosedFormKind::critical_time_p_gt2 && !(t_lo > 0.0))
        throw DomainError("time stencil t-" + std::to_string(reach) + "h = " + std::to_string(t_lo) +
                          " leaves critical time-power domain t > 0");
}

inline Point shifted(const Point& x, int axis, double offset)
{
    Point y = x;
    y[axis] += offset;
    return y;
}

inline double flux_power(double magnitude, double p)
{
    if (p == 2.0)
        return 1.0;
    return magnitude == 0.0 ? 0.0 : std::pow(magnitude, p - 2.0);
}

inline ResidualParts residual_second_order(const ClosedForm& cf, const Point& x, double t, double h)
{
    const int n = cf.dim();
    const double p = cf.params.p;
    auto u = [&](const Point& y, double s) { return evaluate(cf, y, s); };

    // flux component along `axis` at the midpoint y, full gradient by centered differences of step h
    auto flux = [&](const Point& y, int axis) {
        double mag2 = 0.0;
        double along = 0.0;
        for (int j = 0; j < n; ++j) {
            const double g = (u(shifted(y, j, 0.5 * h), t) - u(shifted(y, j, -0.5 * h), t)) / h;
            mag2 += g * g;
            if (j == axis)
                along = g;
        }
        return flux_power(std::sqrt(mag2), p) * along;
    };

    ResidualParts parts;
    for (int i = 0; i < n; ++i)
        parts.diffusion += (flux(shifted(x, i, 0.5 * h), i) - flux(shifted(x, i, -0.5 * h), i)) / h;
    parts.time_rate = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    parts.absorption = modulus_for(cf) * positive_power(u(x, t), cf.params.q);
    return parts;
}

inline ResidualParts residual_fourth_order(const ClosedForm& cf, const Point& x, double t, double h)
{
    const int n = cf.dim();
    const double p = cf.params.p;
    auto u = [&](const Point& y) { return evaluate(cf, y, t); };
    static constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
    static constexpr std::array<double, 4> d1{1.0, -8.0, 8.0, -1.0};  // / 12h

    std::vector<double> grad(n, 0.0);
    std::vector<double> hess(n * n, 0.0);
    const double centre = u(x);
    for (int j = 0; j < n; ++j) {
        double g = 0.0;
        for (std::size_t a = 0; a < offsets.size(); ++a)
            g += d1[a] * u(shifted(x, j, offsets[a] * h));
        grad[j] = g / (12.0 * h);
        hess[j * n + j] = (-u(shifted(x, j, 2 * h)) + 16.0 * u(shifted(x, j, h)) - 30.0 * centre +
                           16.0 * u(shifted(x, j, -h)) - u(shifted(x, j, -2 * h))) /
                          (12.0 * h * h);
        for (int k = j + 1; k < n; ++k) {
            double m = 0.0;
            for (std::size_t a = 0; a < offsets.size(); ++a)
                for (std::size_t b = 0; b < offsets.size(); ++b)
                    m += d1[a] * d1[b] * u(shifted(shifted(x, j, offsets[a] * h), k, offsets[b] * h));
            hess[j * n + k] = hess[k * n + j] = m / (144.0 * h * h);
        }
    }
    double mag2 = 0.0, trace = 0.0, quad = 0.0;
    for (int j = 0; j < n; ++j) {
        mag2 += grad[j] * grad[j];
        trace += hess[j * n + j];
        for (int k = 0; k < n; ++k)
            quad += grad[j] * hess[j * n + k] * grad[k];
    }
    ResidualParts parts;
    if (p == 2.0)
        parts.diffusion = trace;
    else if (mag2 > 0.0)
        parts.diffusion = flux_power(std::sqrt(mag2), p) * (trace + (p - 2.0) * quad / mag2);
    parts.time_rate = (-evaluate(cf, x, t + 2 * h) + 8.0 * evaluate(cf, x, t + h) - 8.0 * evaluate(cf, x, t - h) +
                       evaluate(cf, x, t - 2 * h)) /
                      (12.0 * h);
    parts.absorption = modulus_for(cf) * positive_power(centre, cf.params.q);
    return parts;
}

}  // namespace detail

/// Δ_p u − ∂u/∂t − λ₀ u₊^q of the closed form, by finite differences of step h, split into its terms.
inline ResidualParts residual_parts(const ClosedForm& cf, const Point& x, double t, double h,
                                    Stencil stencil = Stencil::second_order)
{
    if (static_cast<int>(x.size()) != cf.dim())
        throw DomainError("point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(cf.dim()));
    if (stencil == Stencil::second_order) {
        detail::check_stencil_domain(cf, x, t, h, 1.0);
        return detail::residual_second_order(cf, x, t, h);
    }
    detail::check_stencil_domain(cf, x, t, h, 2.0);
    return detail::residual_fourth_order(cf, x, t, h);
}

inline double pde_residual(const ClosedForm& cf, const Point& x, double t, double h,
                           Stencil stencil = Stencil::second_order)
{
    return residual_parts(cf, x, t, h, stencil).value();
}

struct SpaceTimePoint {
    Point x;
    double t = 0.0;
};

struct SupersolutionReport {
    std::vector<double> residuals;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Checks Δ_pΦ − ∂Φ/∂t − m Φ^q <= tol at every sample; tol = rel_tol · max term magnitude.
inline SupersolutionReport barrier_supersolution_check(const ClosedForm& cf, const std::vector<SpaceTimePoint>& grid,
                                                       double h, double rel_tol = 1e-8,
                                                       Stencil stencil = Stencil::second_order)
{
    if (cf.kind != ClosedFormKind::barrier_growth && cf.kind != ClosedFormKind::barrier_nondeg)
        throw InvalidArgument(std::string("barrier_supersolution_check needs a barrier kind, got ") +
                              to_string(cf.kind));
    if (grid.empty())
        throw InvalidArgument("barrier_supersolution_check needs a non-empty sample grid");
    SupersolutionReport report;
    report.residuals.reserve(grid.size());
    double scale = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const ResidualParts parts = residual_parts(cf, grid[k].x, grid[k].t, h, stencil);
        const double r = parts.value();
        report.residuals.push_back(r);
        scale = std::max(scale, parts.scale());
        if (r > report.worst) {
            report.worst = r;
            report.worst_index = k;
        }
    }
    report.tolerance = rel_tol * std::max(scale, 1.0);
    report.pass = report.worst <= report.tolerance;
    return report;
}

struct GrowthBarrierFit {
    double a = 0.0;
    double b = 0.0;
    double c1 = 0.0;
    double margin = 0.0;  ///< min over samples of Φ − u
};

/// Samples of ∂_p Q₁⁺ = ({|x| <= 1} × {0}) ∪ ({|x| = 1} × [0, 1]) along the first coordinate axis.
inline std::vector<SpaceTimePoint> parabolic_boundary_samples(int dim, int count)
{
    std::vector<SpaceTimePoint> pts;
    for (int k = 0; k <= count; ++k) {
        Point x(dim, 0.0);
        x[0] = -1.0 + 2.0 * k / count;
        pts.push_back({x, 0.0});
    }
    for (int k = 1; k <= count; ++k) {
        const double t = static_cast<double>(k) / count;
        for (double side : {-1.0, 1.0}) {
            Point x(dim, 0.0);
            x[0] = side;
            pts.push_back({x, t});
        }
    }
    return pts;
}

/// Scans a over {1, 2, 4, …, 2^{max_doublings}} and b over a·2^{k/4}, k = 1..12 (so b ∈ (a, 8a]),
/// returning the first (a, b) whose growth barrier dominates `target` at every boundary sample.
/// Note Φ depends on (a, b) only through b/a, since 𝔠₁ a^{(p−1)/(p−1−q)} is independent of a.
template <class Target>
std::optional<GrowthBarrierFit> find_growth_barrier(const ProblemParams& params, const Target& target,
                                                    const std::vector<SpaceTimePoint>& boundary,
                                                    int max_doublings = 10)
{
    if (boundary.empty())
        throw InvalidArgument("find_growth_barrier needs boundary samples");
    for (int i = 0; i <= max_doublings; ++i) {
        const double a = std::ldexp(1.0, i);
        for (int k = 1; k <= 12; ++k) {
            const double b = a * std::exp2(k / 4.0);
            const ClosedForm phi = make_barrier_growth(params, a, b);
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& s : boundary)
                margin = std::min(margin, evaluate(phi, s.x, s.t) - target(s.x, s.t));
            if (margin >= 0.0)
                return GrowthBarrierFit{a, b, phi.amplitude, margin};
        }
    }
    return std::nullopt;
}

}  // namespace deadcore
