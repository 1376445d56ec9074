// Acceptance runner: one PASS/FAIL line per criterion.
//
// Each criterion re-runs the bundled experiments without touching disk and judges the
// measured quantities against the thresholds below, not against the config verdicts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "deadcore/experiment.hpp"

using namespace deadcore;

namespace {

// Pinned thresholds.
constexpr double kResidualMax = 1e-9;
constexpr double kOdeRelErr = 1e-3;
constexpr double kOdeDtMax = 1e-4;
constexpr double kDeadEps = 1e-10;
constexpr double kSlopeTolHalfspace = 0.05;
constexpr double kSlopeTolSteady = 0.25;
constexpr double kNondegRefineFactor = 2.0;
constexpr double kStatedBarrier = 1.0 / 16.0;   // p = 2, q = 1/2, m = 1, by hand
constexpr double kCorrectedBarrier = 1.0 / 576.0;
constexpr double kOrderingTol = 1e-12;
constexpr double kSpeedCMax = 8.0;
constexpr double kSpeedRefineFactor = 2.0;
constexpr double kDensityMin = 0.25;
constexpr double kPorosityMin = 0.5;
constexpr double kEnergyRelTol = 1e-10;
constexpr double kOrderMin = 1.8;
constexpr double kInvarianceTol = 1e-12;
constexpr double kBandMax = 100.0;
constexpr double kSubcriticalDecay = 10.0;
constexpr double kRhoSpread = 0.01;
constexpr double kGeomTol = 1e-12;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << (detail.tellp() > 0 ? "; " : "") << what;
        }
    }
};

class Runner {
public:
    explicit Runner(std::string dir) : dir_(std::move(dir)) {}

    const ExperimentResult& get(const std::string& name)
    {
        auto it = cache_.find(name);
        if (it != cache_.end())
            return it->second;
        const auto cfg = load_config_file(dir_ + "/" + name + ".cfg");
        configs_.emplace(name, cfg);
        auto r = run_experiment(cfg, fs::temp_directory_path(), true, false);
        if (!r.error.empty())
            throw std::runtime_error(name + ": " + r.error);
        return cache_.emplace(name, std::move(r)).first->second;
    }

    const ExperimentConfig& config(const std::string& name)
    {
        get(name);
        return configs_.at(name);
    }

private:
    std::string dir_;
    std::map<std::string, ExperimentResult> cache_;
    std::map<std::string, ExperimentConfig> configs_;
};

double measured(const ExperimentResult& r, const std::string& quantity)
{
    for (const auto& row : r.rows)
        if (row.quantity == quantity)
            return row.measured;
    throw std::runtime_error(r.name + ": no row " + quantity);
}

const json& report(const ExperimentResult& r, const std::string& id)
{
    for (const auto& rep : r.reports)
        if (rep.at("id") == id)
            return rep.at("result");
    throw std::runtime_error(r.name + ": no report " + id);
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void c1(Runner& run, Verdict& v)
{
    const auto& r = run.get("c1-stationary-profile");
    const double res = measured(r, "residual.max_residual");
    v.require(run.config("c1-stationary-profile").grid.nx == 256, "grid is not 256 cells");
    v.require(res <= kResidualMax, "residual " + num(res));
    v.notes.push_back("max residual " + num(res));
}

void c2(Runner& run, Verdict& v)
{
    const auto& cfg = run.config("c2-ode-deadcore");
    const auto& r = run.get("c2-ode-deadcore");
    const double t0 = 1.0 / ((1.0 - cfg.params.q) * cfg.params.lambda_lo);  // u0 = 1
    const double err = measured(r, "match.relative_error");
    const double after = measured(r, "match.max_after_extinction");
    v.require(std::abs(t0 - 2.0) < 1e-15, "extinction time " + num(t0));
    v.require(cfg.grid.dt_max <= kOdeDtMax, "dt cap " + num(cfg.grid.dt_max));
    v.require(err <= kOdeRelErr, "relative error " + num(err));
    v.require(after <= kDeadEps, "after extinction " + num(after));
    v.notes.push_back("relative error " + num(err) + ", max after t0 " + num(after));
}

void c3(Runner& run, Verdict& v)
{
    const double a = measured(run.get("c3-growth-halfspace"), "growth.slope");
    const double alpha_h = compute_exponents(run.config("c3-growth-halfspace").params).alpha0;
    const double b = measured(run.get("c3-growth-steady"), "growth.slope");
    const double alpha_s = compute_exponents(run.config("c3-growth-steady").params).alpha0;
    v.require(std::abs(alpha_h - 4.0) < 1e-12 && std::abs(alpha_s - 2.0) < 1e-12, "unexpected exponents");
    v.require(std::abs(a - 4.0) <= kSlopeTolHalfspace, "half-space slope " + num(a));
    v.require(std::abs(b - 2.0) <= kSlopeTolSteady, "steady slope " + num(b));
    v.notes.push_back("half-space slope " + num(a) + ", steady slope " + num(b));
}

void c4(Runner& run, Verdict& v)
{
    const auto& r = run.get("c4-nondegeneracy");
    const auto& cfg = run.config("c4-nondegeneracy");
    const int nx = cfg.grid.nx;
    const double coarse = measured(r, "nondegeneracy.constant@nx" + std::to_string(nx));
    const double fine = measured(r, "nondegeneracy.constant@nx" + std::to_string(2 * nx));
    const double lo = std::min(coarse, fine), hi = std::max(coarse, fine);
    v.require(cfg.params.p == 2.0 && cfg.params.q == 0.5, "run is not p=2, q=1/2");
    v.require(lo > 0.0, "constant not positive");
    v.require(hi <= kNondegRefineFactor * lo, "refinement ratio " + num(hi / lo));
    v.require(lo >= kStatedBarrier, "constant " + num(lo) + " < " + num(kStatedBarrier));
    v.notes.push_back("constant " + num(coarse) + " (nx " + std::to_string(nx) + "), " + num(fine) + " (nx " +
                      std::to_string(2 * nx) + ")");
    v.notes.push_back(std::string("vs supersolution constant ") + num(kCorrectedBarrier) + ": " +
                      (lo >= kCorrectedBarrier ? "above" : "below"));
}

void c5(Runner& run, Verdict& v)
{
    const auto& r = run.get("c5-comparison");
    const auto& rep = report(r, "comparison");
    const double worst = measured(r, "comparison.worst_violation");
    const double dom = measured(run.get("c5-barrier"), "domination.worst_violation");
    v.require(rep.at("pairs").get<int>() == 50 && rep.at("nx").get<int>() == 32, "not 50 pairs on 32 cells");
    v.require(worst <= kOrderingTol, "ordering violation " + num(worst));
    v.require(dom <= kOrderingTol, "barrier violation " + num(dom));
    v.notes.push_back("worst ordering violation " + num(worst) + ", barrier " + num(dom));
}

void c6(Runner& run, Verdict& v)
{
    const auto& r = run.get("c6-finite-speed");
    const int nx = run.config("c6-finite-speed").grid.nx;
    const double a = measured(r, "speed.minimal_c@nx" + std::to_string(nx));
    const double b = measured(r, "speed.minimal_c@nx" + std::to_string(2 * nx));
    v.require(a <= kSpeedCMax && b <= kSpeedCMax, "minimal c above " + num(kSpeedCMax));
    v.require(std::max(a, b) <= kSpeedRefineFactor * std::min(a, b), "minimal c moved " + num(a) + " -> " + num(b));
    v.notes.push_back("minimal c " + num(a) + " -> " + num(b));
}

void c7(Runner& run, Verdict& v)
{
    const auto& r = run.get("c7-geometry");
    const double rho = measured(r, "density.varrho");
    const double delta = measured(r, "porosity.delta");
    v.require(rho >= kDensityMin - kGeomTol, "density " + num(rho));
    v.require(delta >= kPorosityMin - kGeomTol, "porosity " + num(delta));
    v.notes.push_back("density " + num(rho) + ", porosity " + num(delta));
}

void c8(Runner& run, Verdict& v)
{
    const auto& r = run.get("c8-critical");
    const auto& cfg = run.config("c8-critical");
    const auto energy = report(r, "energy").at(0).at("energy").get<std::vector<double>>();
    const auto times = report(r, "energy").at(0).at("times").get<std::vector<double>>();
    const double scale = *std::max_element(energy.begin(), energy.end());
    double rise = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < energy.size(); ++n)
        rise = std::max(rise, energy[n] - energy[n - 1]);
    const double interior_min = measured(r, "energy.interior_min");
    const double order = measured(r, "order.order");
    v.require(cfg.params.p == 2.0 && cfg.params.q == 1.0, "run is not p=2, q=1");
    v.require(times.back() >= 1.0 - 1e-12, "run stops before t=1");
    v.require(interior_min > 0.0, "interior minimum " + num(interior_min));
    v.require(rise <= kEnergyRelTol * scale, "energy rise " + num(rise));
    v.require(order >= kOrderMin, "order " + num(order));
    v.notes.push_back("interior min " + num(interior_min) + ", worst energy step " + num(rise) + ", order " +
                      num(order));
}

void c9(Runner& run, Verdict& v)
{
    const double dev = measured(run.get("c9-blowup-halfspace"), "blowup.max_deviation");
    const double band = measured(run.get("c9-blowup-steady"), "blowup.sup_ratio");
    v.require(dev <= kInvarianceTol, "invariance deviation " + num(dev));
    v.require(band <= kBandMax, "band ratio " + num(band));
    v.notes.push_back("invariance deviation " + num(dev) + ", band ratio " + num(band));
}

void c10(Runner& run, Verdict& v)
{
    const double zero = measured(run.get("c10-liouville-zero"), "liouville.class");
    const double half = measured(run.get("c10-liouville-halfspace"), "liouville.class");
    const double spread = measured(run.get("c10-liouville-halfspace"), "liouville.rho_spread");
    const double ode = measured(run.get("c10-liouville-ode"), "liouville.class");
    v.require(zero >= kSubcriticalDecay, "zero field not SUBCRITICAL");
    v.require(half < kSubcriticalDecay && spread <= kRhoSpread, "half-space not CRITICAL with flat rho");
    v.require(ode < kSubcriticalDecay, "ode window not CRITICAL");
    v.notes.push_back("decay factors " + num(zero) + ", " + num(half) + ", " + num(ode) + "; rho spread " +
                      num(spread));
}

struct Criterion {
    const char* title;
    double budget_seconds;
    std::function<void(Runner&, Verdict&)> check;
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"deadcore acceptance criteria"};
    std::vector<int> only;
    std::string configs = DEADCORE_CONFIG_DIR;
    bool verbose = false;
    app.add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 10))->delimiter(',');
    app.add_option("--configs", configs, "bundled config directory");
    app.add_flag("-v,--verbose", verbose, "print measured values");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {"exact stationary profile", 1, c1},   {"ODE dead core", 10, c2},
        {"growth exponent", 60, c3},           {"non-degeneracy", 60, c4},
        {"comparison principle", 30, c5},      {"finite speed", 30, c6},
        {"geometry probes", 5, c7},            {"critical case", 30, c8},
        {"blow-up", 30, c9},                   {"Liouville classification", 5, c10},
    };
    if (only.empty())
        for (int k = 1; k <= 10; ++k)
            only.push_back(k);

    Runner runner(configs);
    int failed = 0;
    for (int k : only) {
        const auto& c = criteria[k - 1];
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.check(runner, v);
        } catch (const std::exception& e) {
            v.require(false, e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        v.require(secs <= c.budget_seconds, "runtime " + num(secs) + " s over " + num(c.budget_seconds) + " s");
        std::printf("criterion %2d  %-26s %s  (%.2f s)%s%s\n", k, c.title, v.pass ? "PASS" : "FAIL", secs,
                    v.pass ? "" : "  ", v.detail.str().c_str());
        if (verbose || !v.pass)
            for (const auto& n : v.notes)
                std::printf("              %s\n", n.c_str());
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
