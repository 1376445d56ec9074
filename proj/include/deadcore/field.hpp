#pragma once

// Grids and stored space-time grid functions u(x_i, t_n).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "deadcore/core.hpp"
#include "deadcore/exact.hpp"

namespace deadcore {

enum class Geometry { interval, radial };

inline const char* to_string(Geometry g) { return g == Geometry::interval ? "interval" : "radial"; }

/// Spatial grid and time-stepping controls.  Nodes are x_i = xl + i·dx, i = 0..nx.
/// For the radial geometry xl = 0, xr = R and the coordinate is |x|.
struct GridSpec {
    Geometry geometry = Geometry::interval;
    double xl = 0.0;
    double xr = 1.0;
    int nx = 64;
    int dim = 1;  ///< ambient dimension N of the radial ball; 1 for intervals
    double t_end = 0.0;
    double cfl_sigma = 0.4;
    /// Snapshot interval; 0 stores every step.
    double snapshot_every = 0.0;
    /// Additional cap on the time step.
    double dt_max = std::numeric_limits<double>::infinity();
    /// Allows cfl_sigma > 1/2 (used to demonstrate loss of monotonicity).
    bool unchecked_cfl = false;

    static GridSpec interval(double xl, double xr, int nx, double t_end, double snapshot_every = 0.0)
    {
        GridSpec g;
        g.xl = xl;
        g.xr = xr;
        g.nx = nx;
        g.t_end = t_end;
        g.snapshot_every = snapshot_every;
        return g;
    }

    static GridSpec radial(double radius, int dim, int nx, double t_end, double snapshot_every = 0.0)
    {
        GridSpec g;
        g.geometry = Geometry::radial;
        g.xl = 0.0;
        g.xr = radius;
        g.dim = dim;
        g.nx = nx;
        g.t_end = t_end;
        g.snapshot_every = snapshot_every;
        return g;
    }

    double dx() const { return (xr - xl) / nx; }
    double x(int i) const { return i == nx ? xr : xl + i * dx(); }
    int nodes() const { return nx + 1; }

    void validate() const
    {
        std::ostringstream err;
        if (nx < 8)
            err << "nx must be >= 8 (got " << nx << "); ";
        if (!(xr > xl))
            err << "need xr > xl; ";
        if (geometry == Geometry::radial && xl != 0.0)
            err << "radial grids start at r = 0; ";
        if (geometry == Geometry::radial && dim < 1)
            err << "radial dim must be >= 1; ";
        if (!(t_end >= 0.0) || !std::isfinite(t_end))
            err << "t_end must be finite and >= 0; ";
        if (!(cfl_sigma > 0.0) || (!unchecked_cfl && cfl_sigma > 0.5))
            err << "cfl_sigma must lie in (0, 1/2] (got " << cfl_sigma << "); ";
        if (!(snapshot_every >= 0.0))
            err << "snapshot_every must be >= 0; ";
        if (!(dt_max > 0.0))
            err << "dt_max must be > 0; ";
        const std::string msg = err.str();
        if (!msg.empty())
            throw InvalidArgument("invalid GridSpec: " + msg.substr(0, msg.size() - 2));
    }

    bool same_space(const GridSpec& o) const
    {
        return geometry == o.geometry && xl == o.xl && xr == o.xr && nx == o.nx && dim == o.dim;
    }
};

/// Dirichlet data g(t) at the endpoints.  Radial grids use only `right`.
struct BoundaryTraces {
    std::function<double(double)> left = [](double) { return 0.0; };
    std::function<double(double)> right = [](double) { return 0.0; };

    static BoundaryTraces constant(double left, double right)
    {
        return {[left](double) { return left; }, [right](double) { return right; }};
    }
};

/// Stored history of a grid function: one slice per snapshot time, including boundary nodes.
struct SpaceTimeField {
    GridSpec grid;
    ProblemParams params;
    std::vector<double> times;
    std::vector<std::vector<double>> slices;
    BoundaryTraces boundary;

    std::size_t snapshot_count() const { return times.size(); }
    double value(int i, std::size_t n) const { return slices[n][i]; }

    double max_value() const
    {
        double m = 0.0;
        for (const auto& s : slices)
            for (double v : s)
                m = std::max(m, v);
        return m;
    }

    /// Index of the stored time equal to t (within 1e-12 relative), or npos.
    std::size_t find_time(double t) const
    {
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
        if (it != times.end() && std::abs(*it - t) <= tol)
            return static_cast<std::size_t>(it - times.begin());
        return npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Linear interpolation of slice n at coordinate x (radial fields reflect x < 0).
    double sample_x(double x, std::size_t n) const
    {
        if (grid.geometry == Geometry::radial)
            x = std::abs(x);
        const double tol = 1e-12 * std::max(1.0, std::abs(grid.xr - grid.xl));
        if (x < grid.xl - tol || x > grid.xr + tol)
            throw DomainError("x = " + std::to_string(x) + " outside stored domain [" + std::to_string(grid.xl) +
                              ", " + std::to_string(grid.xr) + "]");
        const double s = std::clamp((x - grid.xl) / grid.dx(), 0.0, static_cast<double>(grid.nx));
        const int i = std::min(static_cast<int>(std::floor(s)), grid.nx - 1);
        const double w = s - i;
        const auto& u = slices[n];
        if (w == 0.0)
            return u[i];
        if (w == 1.0)
            return u[i + 1];
        return (1.0 - w) * u[i] + w * u[i + 1];
    }

    /// Bilinear interpolation in (x, t).
    double sample(double x, double t) const
    {
        if (times.empty())
            throw DomainError("field has no snapshots");
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        if (t < times.front() - tol || t > times.back() + tol)
            throw DomainError("t = " + std::to_string(t) + " outside stored history [" +
                              std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
        const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
        std::size_t n = static_cast<std::size_t>(it - times.begin());
        if (n >= times.size())
            n = times.size() - 1;
        if (std::abs(times[n] - t) <= tol || n == 0)
            return sample_x(x, n);
        const double w = (t - times[n - 1]) / (times[n] - times[n - 1]);
        return (1.0 - w) * sample_x(x, n - 1) + w * sample_x(x, n);
    }

    /// Quadrature weight of node i: cell length for intervals, shell volume (per unit sphere area) for radial.
    double node_weight(int i) const
    {
        const double dx = grid.dx();
        if (grid.geometry == Geometry::interval)
            return (i == 0 || i == grid.nx) ? 0.5 * dx : dx;
        const int n = grid.dim;
        const double lo = std::max(0.0, grid.x(i) - 0.5 * dx);
        const double hi = std::min(grid.xr, grid.x(i) + 0.5 * dx);
        return (std::pow(hi, n) - std::pow(lo, n)) / n;
    }
};

/// Samples a closed form on a grid at the given times.  For N > 1 the closed form is evaluated
/// along the first coordinate axis (interval) or radially (radial geometry).
inline SpaceTimeField sample_closed_form(const ClosedForm& cf, const GridSpec& grid, const std::vector<double>& times)
{
    grid.validate();
    SpaceTimeField field;
    field.grid = grid;
    field.params = cf.params;
    field.times = times;
    for (double t : times) {
        std::vector<double> slice(grid.nodes());
        for (int i = 0; i <= grid.nx; ++i) {
            Point x(cf.dim(), 0.0);
            x[0] = grid.x(i);
            slice[i] = evaluate(cf, x, t);
        }
        field.slices.push_back(std::move(slice));
    }
    auto trace = [cf](double xb) {
        return [cf, xb](double t) {
            Point x(cf.dim(), 0.0);
            x[0] = xb;
            return evaluate(cf, x, t);
        };
    };
    field.boundary = BoundaryTraces{trace(grid.xl), trace(grid.xr)};
    return field;
}

/// Evenly spaced times t0, t0 + step, …, t1 (t1 included exactly).
inline std::vector<double> time_ladder(double t0, double t1, int count)
{
    std::vector<double> t(count + 1);
    for (int k = 0; k <= count; ++k)
        t[k] = (k == count) ? t1 : t0 + (t1 - t0) * k / count;
    return t;
}

/// Writes columns t, x, u (time-outer) with a header row and 17 significant digits.
inline void write_snapshot_csv(std::ostream& os, const SpaceTimeField& field)
{
    os << "t,x,u\n";
    char buf[96];
    for (std::size_t n = 0; n < field.times.size(); ++n)
        for (int i = 0; i <= field.grid.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", field.times[n], field.grid.x(i),
                          field.slices[n][i]);
            os << buf;
        }
}

/// Reads a snapshot CSV written by write_snapshot_csv into `field` (grid and params supplied by caller).
inline void read_snapshot_csv(std::istream& is, SpaceTimeField& field)
{
    std::string line;
    if (!std::getline(is, line) || line != "t,x,u")
        throw InvalidArgument("snapshot CSV must start with header 't,x,u'");
    field.times.clear();
    field.slices.clear();
    const int nodes = field.grid.nodes();
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        double t, x, u;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &u) != 3)
            throw InvalidArgument("malformed snapshot CSV row: " + line);
        if (field.times.empty() || static_cast<int>(field.slices.back().size()) == nodes) {
            field.times.push_back(t);
            field.slices.emplace_back();
            field.slices.back().reserve(nodes);
        } else if (t != field.times.back()) {
            throw InvalidArgument("snapshot CSV slice at t=" + std::to_string(field.times.back()) +
                                  " is incomplete");
        }
        field.slices.back().push_back(u);
    }
    if (!field.slices.empty() && static_cast<int>(field.slices.back().size()) != nodes)
        throw InvalidArgument("snapshot CSV ends with an incomplete slice");
}

}  // namespace deadcore
