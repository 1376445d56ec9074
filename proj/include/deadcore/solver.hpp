#pragma once

// Explicit monotone finite-difference stepper for Δ_p u − ∂u/∂t = λ₀ u₊^q on an
// interval or a radially symmetric ball, with Dirichlet data.
//
// One step:
//   v_i     = u_i + dt · (A_{i+1/2} F_{i+1/2} − A_{i−1/2} F_{i−1/2}) / V_i
//   s_i     = min(λ₀_i (v_i)₊^q, (v_i)₊ / dt)
//   u_i^new = v_i − dt · s_i
// with F_{i+1/2} = |D₊u|^{p−2} D₊u, A = r^{N−1} (1 on intervals) and V_i the cell
// volume.  Under the CFL bound the map u ↦ v is monotone and w ↦ max(w − dt λ w^q, 0)
// is nondecreasing, so the step preserves order and nonnegativity.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "deadcore/core.hpp"
#include "deadcore/field.hpp"

namespace deadcore {

struct StepStats {
    double dt_used = 0.0;
    double max_gradient = 0.0;
    double mass_absorbed = 0.0;     ///< dt · Σ V_i s_i
    double boundary_inflow = 0.0;   ///< dt · net diffusive flux into the updated nodes
    int positivity_clamps = 0;      ///< nodes where the sink was capped at v/dt, or v < 0 was reset
    double min_increment = 0.0;     ///< min_i (u_i^new − u_i) over updated nodes
};

struct StepResult {
    std::vector<double> next;
    StepStats stats;
};

namespace detail {

constexpr double cfl_epsilon = 1e-14;
constexpr double dt_floor = 1e-15;

inline double face_area(const GridSpec& grid, double r)
{
    if (grid.geometry == Geometry::interval || grid.dim == 1)
        return 1.0;
    return std::pow(r, grid.dim - 1);
}

inline double cell_volume(const GridSpec& grid, int i)
{
    const double dx = grid.dx();
    if (grid.geometry == Geometry::interval)
        return dx;
    const double lo = std::max(0.0, grid.x(i) - 0.5 * dx);
    const double hi = grid.x(i) + 0.5 * dx;
    return (std::pow(hi, grid.dim) - std::pow(lo, grid.dim)) / grid.dim;
}

/// Largest (A_{i+1/2} + A_{i−1/2}) dx / V_i over updated nodes; 2 on intervals, 2N at the radial origin.
inline double max_stencil_weight(const GridSpec& grid)
{
    if (grid.geometry == Geometry::interval)
        return 2.0;
    const double dx = grid.dx();
    double w = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        const double left = i == 0 ? 0.0 : face_area(grid, grid.x(i) - 0.5 * dx);
        const double right = face_area(grid, grid.x(i) + 0.5 * dx);
        w = std::max(w, (left + right) * dx / cell_volume(grid, i));
    }
    return w;
}

inline int first_updated(const GridSpec& grid) { return grid.geometry == Geometry::interval ? 1 : 0; }

inline void check_slice(std::span<const double> u, const GridSpec& grid, const char* what)
{
    if (static_cast<int>(u.size()) != grid.nodes())
        throw InvalidArgument(std::string(what) + " has " + std::to_string(u.size()) + " values, grid has " +
                              std::to_string(grid.nodes()) + " nodes");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]))
            throw SolverError(std::string(what) + " contains a non-finite value at node " + std::to_string(i));
        if (u[i] < 0.0)
            throw InvalidArgument(std::string(what) + " is negative at node " + std::to_string(i));
    }
}

inline double max_forward_gradient(std::span<const double> u, double dx)
{
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
        g = std::max(g, std::abs(u[i + 1] - u[i]) / dx);
    return g;
}

}  // namespace detail

/// Adaptive step σ dx² / ((p−1) G^{p−2} + ε) · 2/ω_max, with G = max |D₊u|, capped by grid.dt_max.
inline double stable_dt(std::span<const double> u, const ProblemParams& params, const GridSpec& grid)
{
    const double dx = grid.dx();
    const double g = detail::max_forward_gradient(u, dx);
    const double stiffness = (params.p - 1.0) * (params.p == 2.0 ? 1.0 : std::pow(g, params.p - 2.0));
    const double dt = grid.cfl_sigma * dx * dx / (stiffness + detail::cfl_epsilon) * (2.0 / detail::max_stencil_weight(grid));
    return std::min(dt, grid.dt_max);
}

/// Advances u from time t by exactly dt; boundary nodes take the traces at t + dt.
inline StepResult advance(std::span<const double> u, const ProblemParams& params, const GridSpec& grid, double t,
                          double dt, const BoundaryTraces& traces)
{
    detail::check_slice(u, grid, "step input");
    if (!(dt >= detail::dt_floor) || !std::isfinite(dt)) {
        std::ostringstream err;
        err << "time step underflow (dt=" << dt << ") at t=" << t << ": gradient blow-up";
        throw SolverError(err.str());
    }
    const int nx = grid.nx;
    const double dx = grid.dx();
    const double p = params.p;

    std::vector<double> flux(nx);  // A_{i+1/2} F_{i+1/2}
    StepStats stats;
    stats.dt_used = dt;
    for (int i = 0; i < nx; ++i) {
        const double d = (u[i + 1] - u[i]) / dx;
        stats.max_gradient = std::max(stats.max_gradient, std::abs(d));
        const double f = p == 2.0 ? d : (d == 0.0 ? 0.0 : std::pow(std::abs(d), p - 2.0) * d);
        flux[i] = detail::face_area(grid, grid.x(i) + 0.5 * dx) * f;
    }

    StepResult result;
    result.next.assign(u.begin(), u.end());
    const int first = detail::first_updated(grid);
    stats.min_increment = std::numeric_limits<double>::infinity();
    for (int i = first; i < nx; ++i) {
        const double inflow = flux[i] - (i == 0 ? 0.0 : flux[i - 1]);
        const double volume = detail::cell_volume(grid, i);
        double v = u[i] + dt * inflow / volume;
        const double lambda = params.lambda_at(grid.x(i), t);
        const double vp = std::max(v, 0.0);
        double sink = lambda * positive_power(vp, params.q);
        if (v < 0.0 || sink * dt > vp) {
            ++stats.positivity_clamps;
            sink = vp / dt;
        }
        double next = v - dt * sink;
        if (next < 0.0)
            next = 0.0;
        stats.mass_absorbed += dt * volume * sink;
        result.next[i] = next;
        stats.min_increment = std::min(stats.min_increment, next - u[i]);
    }
    stats.boundary_inflow = dt * (flux[nx - 1] - (first == 1 ? flux[0] : 0.0));
    if (grid.geometry == Geometry::interval)
        result.next[0] = traces.left(t + dt);
    result.next[nx] = traces.right(t + dt);
    result.stats = stats;
    return result;
}

/// One adaptive step (dt from stable_dt, optionally capped).
inline StepResult step(std::span<const double> u, const ProblemParams& params, const GridSpec& grid, double t,
                       const BoundaryTraces& traces, double dt_cap = std::numeric_limits<double>::infinity())
{
    detail::check_slice(u, grid, "step input");
    return advance(u, params, grid, t, std::min(stable_dt(u, params, grid), dt_cap), traces);
}

/// Σ V_i u_i over the nodes the scheme updates (boundary nodes excluded).
inline double interior_mass(std::span<const double> u, const GridSpec& grid)
{
    double m = 0.0;
    for (int i = detail::first_updated(grid); i < grid.nx; ++i)
        m += detail::cell_volume(grid, i) * u[i];
    return m;
}

struct RunResult {
    SpaceTimeField field;
    std::vector<double> absorbed;  ///< cumulative mass_absorbed at each snapshot
    std::vector<double> inflow;    ///< cumulative boundary_inflow at each snapshot
    long steps = 0;
    double wall_seconds = 0.0;
    double min_time_increment = std::numeric_limits<double>::infinity();
    long positivity_clamps = 0;
    double max_gradient = 0.0;
};

/// Runs several problems on the same grid with a common time step sequence.
inline std::vector<RunResult> run_lockstep(const std::vector<std::vector<double>>& initial,
                                           const std::vector<BoundaryTraces>& traces, const ProblemParams& params,
                                           const GridSpec& grid)
{
    params.validate();
    grid.validate();
    if (initial.empty() || initial.size() != traces.size())
        throw InvalidArgument("run_lockstep needs one boundary trace per initial slice");
    const auto started = std::chrono::steady_clock::now();
    const std::size_t count = initial.size();
    std::vector<RunResult> results(count);
    std::vector<std::vector<double>> state = initial;
    for (std::size_t k = 0; k < count; ++k) {
        detail::check_slice(state[k], grid, "initial data");
        const double scale = std::max(1.0, std::abs(state[k][grid.nx]));
        const double gr = traces[k].right(0.0);
        bool ok = std::abs(state[k][grid.nx] - gr) <= 1e-9 * scale;
        if (grid.geometry == Geometry::interval)
            ok = ok && std::abs(state[k][0] - traces[k].left(0.0)) <= 1e-9 * std::max(1.0, std::abs(state[k][0]));
        if (!ok)
            throw InvalidArgument("initial data incompatible with boundary traces at t = 0");
        auto& f = results[k].field;
        f.grid = grid;
        f.params = params;
        f.boundary = traces[k];
    }

    std::vector<double> absorbed(count, 0.0), inflow(count, 0.0);
    auto store = [&](double t) {
        for (std::size_t k = 0; k < count; ++k) {
            results[k].field.times.push_back(t);
            results[k].field.slices.push_back(state[k]);
            results[k].absorbed.push_back(absorbed[k]);
            results[k].inflow.push_back(inflow[k]);
        }
    };
    store(0.0);

    double t = 0.0;
    long snapshot_index = 1;
    long steps = 0;
    while (t < grid.t_end) {
        double target = grid.t_end;
        if (grid.snapshot_every > 0.0)
            target = std::min(grid.t_end, snapshot_index * grid.snapshot_every);
        double dt = std::numeric_limits<double>::infinity();
        for (const auto& s : state)
            dt = std::min(dt, stable_dt(s, params, grid));
        if (!(dt >= detail::dt_floor)) {
            std::ostringstream err;
            err << "time step underflow (dt=" << dt << ") at t=" << t << ": gradient blow-up";
            throw SolverError(err.str());
        }
        const double remaining = target - t;
        if (remaining <= 1e-12 * std::max(1.0, std::abs(target))) {
            // Accumulated rounding left a sliver; the target is already reached.
            t = target;
            if (grid.snapshot_every == 0.0) {
                for (auto& r : results)
                    r.field.times.back() = t;
                continue;
            }
            store(t);
            if (target == snapshot_index * grid.snapshot_every)
                ++snapshot_index;
            continue;
        }
        const bool hits = dt >= remaining * (1.0 - 1e-12);
        if (hits)
            dt = remaining;
        try {
            for (std::size_t k = 0; k < count; ++k) {
                StepResult r = advance(state[k], params, grid, t, dt, traces[k]);
                state[k] = std::move(r.next);
                absorbed[k] += r.stats.mass_absorbed;
                inflow[k] += r.stats.boundary_inflow;
                results[k].min_time_increment = std::min(results[k].min_time_increment, r.stats.min_increment);
                results[k].positivity_clamps += r.stats.positivity_clamps;
                results[k].max_gradient = std::max(results[k].max_gradient, r.stats.max_gradient);
            }
        } catch (const Error& e) {
            std::ostringstream err;
            err << "step failed at t=" << t << ": " << e.what();
            throw SolverError(err.str());
        }
        ++steps;
        t = hits ? target : t + dt;
        if (hits || grid.snapshot_every == 0.0)
            store(t);
        if (hits && grid.snapshot_every > 0.0 && target == snapshot_index * grid.snapshot_every)
            ++snapshot_index;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    for (auto& r : results) {
        r.steps = steps;
        r.wall_seconds = wall;
    }
    return results;
}

inline RunResult run(const std::vector<double>& initial, const BoundaryTraces& traces, const ProblemParams& params,
                     const GridSpec& grid)
{
    return std::move(run_lockstep({initial}, {traces}, params, grid).front());
}

/// Lockstep pair (identical dt sequence), as needed by compare_runs.
inline std::pair<RunResult, RunResult> run_pair(const std::vector<double>& u0, const BoundaryTraces& u_traces,
                                                const std::vector<double>& v0, const BoundaryTraces& v_traces,
                                                const ProblemParams& params, const GridSpec& grid)
{
    auto results = run_lockstep({u0, v0}, {u_traces, v_traces}, params, grid);
    return {std::move(results[0]), std::move(results[1])};
}

struct OrderingReport {
    bool pass = true;
    double worst_violation = 0.0;  ///< max(v − u) over all stored nodes
    double worst_x = 0.0;
    double worst_t = 0.0;
    std::size_t nodes_checked = 0;
};

/// Verdict PASS iff v <= u + tol at every stored node.
inline OrderingReport compare_runs(const SpaceTimeField& u, const SpaceTimeField& v, double tol = 1e-12)
{
    if (!u.grid.same_space(v.grid))
        throw InvalidArgument("compare_runs: grids differ");
    if (u.times != v.times)
        throw InvalidArgument("compare_runs: snapshot times differ (runs must be lockstep)");
    OrderingReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < u.times.size(); ++n)
        for (int i = 0; i <= u.grid.nx; ++i) {
            const double d = v.slices[n][i] - u.slices[n][i];
            ++report.nodes_checked;
            if (d > report.worst_violation) {
                report.worst_violation = d;
                report.worst_x = u.grid.x(i);
                report.worst_t = u.times[n];
            }
        }
    report.pass = report.worst_violation <= tol;
    return report;
}

}  // namespace deadcore
