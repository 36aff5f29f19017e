#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "nsblow/cli/runner.hpp"

int main(int argc, char** argv) {
    using namespace nsblow::cli;

    CLI::App app{
        "Numerical verification lab for an explicit forced blow-up "
        "construction: heat profiles, singular-integral velocity fields, "
        "decay audits, and the small-amplitude fixed-point solver.\n"
        "Worker count: set NSBLOW_WORKERS (default: hardware concurrency)."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    double tol = 0.0, grid_L = 0.0, delta = -1.0;
    long kmax = 0, grid_n = 0, seed = -1;
    std::string out;

    app.add_option("config", config_path,
                   "key = value configuration file (optional)");
    app.add_option("--tol", tol, "quadrature / fixed-point tolerance");
    app.add_option("--kmax", kmax, "time ladder depth");
    app.add_option("--grid-n", grid_n, "lattice cells per axis (even)");
    app.add_option("--grid-L", grid_L, "lattice half-width");
    app.add_option("--delta", delta, "perturbation amplitude");
    app.add_option("--seed", seed, "sample-cloud seed");
    app.add_option("--out", out, "output directory");

    for (const char* name : {"heat", "velocity", "audit", "picard",
                             "baseline", "all"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (app.count("--tol")) cfg.tol = tol;
        if (app.count("--kmax")) cfg.k_max = static_cast<int>(kmax);
        if (app.count("--grid-n")) cfg.grid_n = static_cast<int>(grid_n);
        if (app.count("--grid-L")) cfg.grid_L = grid_L;
        if (app.count("--delta")) cfg.delta = delta;
        if (app.count("--seed")) cfg.seed = static_cast<unsigned>(seed);
        if (app.count("--out")) cfg.out = out;
        cfg.validate();

        ReportBundle bundle;
        int status = run(app.get_subcommands().front()->get_name(), cfg,
                         bundle);
        for (const auto& a : bundle.audits)
            std::printf("[%s] %-32s %.6g  %s\n", a.pass ? "ok " : "FAIL",
                        a.name.c_str(), a.measure, a.detail.c_str());
        std::printf("reports written to %s (%s)\n", cfg.out.c_str(),
                    bundle.all_pass() ? "all audits passed"
                                      : "AUDIT FAILURES PRESENT");
        return status;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
