// vortexlab: numerical laboratory for a viscous vortex in a background flow.
//
// Subcommands
//   simulate     direct simulation with tracking diagnostics (per nu in the list)
//   approx       correction-profile assembly and equation-residual norms
//   relax        ill-prepared relaxation study across the nu list
//   spectrum     eigenvalues of the drift-diffusion operator per angular mode
//   relax-linear enhanced-dissipation decay rates of the linearized dynamics
//   burgers      steady asymmetric-strain profiles and their expansion gap
//   report       consolidate a run directory into summary.json

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "vortexlab/errors.hpp"
#include "vortexlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vortex-in-background-flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "csv";
    int workers = 1;
    std::uint64_t seed = 0;

    app.add_option("--config", config_path, "configuration file (dotted text or JSON)");
    app.add_option("--out", out_dir, "output directory (env VORTEXLAB_OUT overrides)");
    app.add_option("--format", format, "field dump format: csv or binary")
        ->check(CLI::IsMember({"csv", "binary"}));
    app.add_option("--workers", workers, "concurrent runs in parameter sweeps");
    app.add_option("--seed", seed, "seed recorded with the run (sampling diagnostics)");

    for (const char* name : {"simulate", "approx", "relax", "spectrum", "relax-linear",
                             "burgers", "report"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("VORTEXLAB_OUT"))
        out_dir = env;

    try {
        vortexlab::cli::Config cfg;
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub != "report") {
            if (config_path.empty())
                throw vortexlab::ConfigError("--config is required");
            cfg = vortexlab::cli::Config::parse_file(config_path);
        }
        vortexlab::cli::RunOptions opts;
        opts.out_dir = out_dir;
        opts.format = format;
        opts.workers = workers;
        opts.seed = seed;
        return vortexlab::cli::run_scenario(cfg, sub, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
