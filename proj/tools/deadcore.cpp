// deadcore command-line runner.
//   deadcore run <config> [--force] [--set key=value ...]
//   deadcore verify-all [--configs DIR] [--only a,b] [--force]
//   deadcore rates <run-dir> <x,t> --radii r1,r2,... [--quantity growth|nondegeneracy|gradient] [--nx N]
// Outputs go under $DEADCORE_OUT (default ./deadcore-out).

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "deadcore/experiment.hpp"

#ifndef DEADCORE_CONFIG_DIR
#define DEADCORE_CONFIG_DIR "configs"
#endif

namespace {

using namespace deadcore;

fs::path output_root()
{
    const char* env = std::getenv("DEADCORE_OUT");
    return env && *env ? fs::path(env) : fs::path("deadcore-out");
}

void print_rows(const std::vector<SummaryRow>& rows)
{
    for (const auto& r : rows)
        std::printf("  %-4s %-44s measured=%-16s target=%-10s tol=%s\n", r.pass ? "PASS" : "FAIL", r.quantity.c_str(),
                    format_number(r.measured).c_str(), r.target.c_str(), r.tolerance.c_str());
}

void print_result(const ExperimentResult& r)
{
    std::printf("%s %s\n", r.pass() ? "PASS" : "FAIL", r.name.c_str());
    print_rows(r.rows);
    if (!r.error.empty())
        std::printf("  error in %s\n", r.error.c_str());
}

int cmd_run(const std::string& path, const std::vector<std::string>& sets, bool force)
{
    ConfigMap raw = ConfigMap::load(path);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set: expected key=value, got '" + s + "'");
        raw.set(detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
    }
    const ExperimentConfig cfg = load_config(raw);
    const ExperimentResult r = run_experiment(cfg, output_root(), force);
    print_result(r);
    return r.exit_code;
}

int cmd_verify_all(const std::string& dir, const std::string& only, bool force)
{
    std::vector<std::string> names;
    if (!only.empty())
        names = detail::split_list(only);
    const SuiteResult suite = verify_all(dir, output_root(), names, force);
    std::vector<std::string> failing;
    for (const auto& e : suite.experiments) {
        print_result(e);
        if (!e.pass())
            failing.push_back(e.name);
    }
    std::printf("\n%-24s %s\n", "experiment", "verdict");
    for (const auto& e : suite.experiments)
        std::printf("%-24s %s\n", e.name.c_str(), e.pass() ? "PASS" : "FAIL");
    if (!failing.empty()) {
        std::string list;
        for (const auto& n : failing)
            list += (list.empty() ? "" : ", ") + n;
        std::printf("failing: %s\n", list.c_str());
    }
    return suite.exit_code;
}

int cmd_rates(const std::string& run_dir, const std::string& center, const std::string& radii_text,
              const std::string& quantity, int nx)
{
    const ExperimentConfig cfg = load_config_file((fs::path(run_dir) / "config.txt").string());
    GridSpec grid = cfg.grid;
    fs::path csv = fs::path(run_dir) / "snapshots.csv";
    if (nx > 0) {
        grid.nx = nx;
        csv = fs::path(run_dir) / ("snapshots_nx" + std::to_string(nx) + ".csv");
    } else if (!fs::exists(csv)) {
        grid.nx = cfg.grid.nx;
        csv = fs::path(run_dir) / ("snapshots_nx" + std::to_string(grid.nx) + ".csv");
    }
    std::ifstream in(csv);
    if (!in)
        throw ConfigError("rates: cannot open '" + csv.string() + "'");
    SpaceTimeField field;
    field.grid = grid;
    field.params = cfg.params;
    read_snapshot_csv(in, field);

    const auto parts = detail::split_list(center);
    double x0, t0;
    if (parts.size() != 2 || !detail::parse_double(parts[0], x0) || !detail::parse_double(parts[1], t0))
        throw ConfigError("rates: center must be '<x>,<t>', got '" + center + "'");
    std::vector<double> radii;
    for (const auto& s : detail::split_list(radii_text)) {
        double v;
        if (!detail::parse_double(s, v))
            throw ConfigError("rates: bad radius '" + s + "'");
        radii.push_back(v);
    }
    RateReport rep;
    if (quantity == "growth")
        rep = growth_rate_fit(field, x0, t0, radii);
    else if (quantity == "nondegeneracy")
        rep = nondegeneracy_fit(field, x0, t0, radii);
    else if (quantity == "gradient")
        rep = gradient_rate_fit(field, x0, t0, radii);
    else
        throw ConfigError("rates: --quantity must be growth, nondegeneracy or gradient");
    std::cout << to_json(rep).dump(2) << '\n';
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dead-core experiment runner"};
    app.require_subcommand(1);

    std::string config, configs_dir = DEADCORE_CONFIG_DIR, only, run_dir, center, radii, quantity = "growth";
    std::vector<std::string> sets;
    bool force = false;
    int nx = 0;

    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", config, "config file")->required();
    run->add_option("--set", sets, "override a config key (key=value)");
    run->add_flag("--force", force, "overwrite an existing output directory");

    auto* all = app.add_subcommand("verify-all", "run the bundled acceptance suite");
    all->add_option("--configs", configs_dir, "directory holding suite.txt and the configs");
    all->add_option("--only", only, "comma-separated experiment names");
    all->add_flag("--force", force, "overwrite existing output directories");

    auto* rates = app.add_subcommand("rates", "fit a rate on a stored run");
    rates->add_option("run-dir", run_dir, "output directory of a previous run")->required();
    rates->add_option("center", center, "x,t")->required();
    rates->add_option("--radii", radii, "comma-separated radii")->required();
    rates->add_option("--quantity", quantity, "growth | nondegeneracy | gradient");
    rates->add_option("--nx", nx, "refinement level to read (snapshots_nx<N>.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run)
            return cmd_run(config, sets, force);
        if (*all)
            return cmd_verify_all(configs_dir, only, force);
        return cmd_rates(run_dir, center, radii, quantity, nx);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
