#include "vortexlab/runner.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "vortexlab/approx.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/diagnostics.hpp"
#include "vortexlab/lindyn.hpp"
#include "vortexlab/report.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab::cli {

namespace fs = std::filesystem;

namespace {

// --- shared assembly -------------------------------------------------------

std::shared_ptr<const flows::ExternalFlow> build_flow(const Config& cfg) {
    const std::string kind = cfg.get_string("flow.kind");
    std::map<std::string, double> params;
    for (const char* key : {"gamma", "U", "Lc", "omega_r"})
        if (cfg.has(std::string("flow.") + key))
            params[key] = cfg.get_double(std::string("flow.") + key);
    try {
        return flows::make_flow(kind, params);
    } catch (const UnknownKind& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

VortexScenario build_scenario(const Config& cfg, double nu) {
    return VortexScenario::make(cfg.get_double("scenario.circulation", 1.0), nu,
                                {cfg.get_double("scenario.z0_x", 0.0),
                                 cfg.get_double("scenario.z0_y", 0.0)},
                                cfg.get_double("scenario.t0"), cfg.get_double("scenario.T"),
                                build_flow(cfg));
}

std::shared_ptr<const spectral::PeriodicGrid> build_grid(const Config& cfg) {
    const double L = cfg.get_double("grid.L");
    const auto n = static_cast<std::size_t>(cfg.get_int("grid.N"));
    const Vec2 origin{cfg.get_double("grid.x0", -0.5 * L),
                      cfg.get_double("grid.y0", -0.5 * L)};
    return spectral::PeriodicGrid::make(L, n, origin);
}

spectral::SolverConfig build_solver(const Config& cfg) {
    spectral::SolverConfig sc;
    sc.cfl = cfg.get_double("solver.cfl", 0.4);
    sc.window_fraction = cfg.get_double("solver.window_fraction", 0.4);
    const double dealias = cfg.get_double("solver.dealias", 2.0 / 3.0);
    if (std::fabs(dealias - 2.0 / 3.0) > 1e-9)
        throw ConfigError("config: solver.dealias supports only the 2/3 rule");
    return sc;
}

std::vector<double> output_times(const Config& cfg, const VortexScenario& sc) {
    if (cfg.has("outputs.times")) {
        auto times = cfg.get_list("outputs.times");
        for (double t : times)
            if (t < sc.t_begin - 1e-12 || t > sc.t_end + 1e-12)
                throw ConfigError("config: outputs.times outside [t0, T]");
        return times;
    }
    const auto count = static_cast<std::size_t>(cfg.get_int("outputs.count", 16));
    const std::string spacing = cfg.get_string("outputs.spacing", "linear");
    std::vector<double> times;
    for (std::size_t i = 1; i <= count; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(count);
        if (spacing == "log")
            times.push_back(sc.t_begin * std::pow(sc.t_end / sc.t_begin, s));
        else if (spacing == "linear")
            times.push_back(sc.t_begin + (sc.t_end - sc.t_begin) * s);
        else
            throw ConfigError("config: outputs.spacing must be linear or log");
    }
    return times;
}

// the shared radial machinery: one grid, one cache, one quadrupole profile
struct RadialKit {
    std::shared_ptr<const radial::RadialGrid> grid;
    std::unique_ptr<approx::ProfileCache> cache;
};

const RadialKit& kit() {
    static RadialKit k = [] {
        RadialKit r;
        r.grid = radial::RadialGrid::uniform(30.0, 3000);
        r.cache = std::make_unique<approx::ProfileCache>(r.grid);
        return r;
    }();
    return k;
}

spectral::SpectralField build_initial(const Config& cfg, const VortexScenario& sc,
                                      const std::shared_ptr<const spectral::PeriodicGrid>& g,
                                      const approx::CenterTrajectory& traj) {
    const std::string init = cfg.get_string("scenario.init", "gaussian");
    const double ell0 = sc.core_size(sc.t_begin);
    if (init == "gaussian")
        return spectral::init_gaussian(g, sc.circulation, ell0, sc.z0);
    if (init == "omega_app") {
        const auto& w2 = kit().cache->w2();
        return spectral::init_from(g, sc.circulation, [&](Vec2 x) {
            return approx::eval_omega_app(sc.circulation, ell0, sc.z0, *sc.flow,
                                          sc.t_begin, x, w2);
        });
    }
    if (init == "omega_app_full") {
        auto ap = approx::build_approx(sc, sc.t_begin, traj, *kit().cache);
        return spectral::init_from(g, sc.circulation, [&](Vec2 x) {
            return sc.circulation / (ell0 * ell0) * ap.eval_full((x - sc.z0) / ell0);
        });
    }
    throw ConfigError("config: scenario.init must be gaussian, omega_app or "
                      "omega_app_full");
}

void dump_field(const fs::path& dir, const std::string& format, std::size_t index,
                const spectral::Snapshot& snap, const VortexScenario& sc) {
    fs::create_directories(dir);
    const auto& g = *snap.field.grid;
    nlohmann::json side = {{"t", snap.t},
                           {"L", g.box_size},
                           {"N", g.n},
                           {"Gamma", sc.circulation},
                           {"nu", sc.viscosity}};
    const std::string stem = "omega_" + std::to_string(index);
    std::ofstream(dir / (stem + ".json")) << side.dump(2) << "\n";
    auto phys = spectral::to_physical(snap.field);
    if (format == "binary") {
        std::ofstream out(dir / (stem + ".bin"), std::ios::binary);
        out.write(reinterpret_cast<const char*>(phys.data()),
                  static_cast<std::streamsize>(phys.size() * sizeof(double)));
    } else {
        std::ofstream out(dir / (stem + ".csv"));
        for (std::size_t a = 0; a < g.n; ++a) {
            for (std::size_t b = 0; b < g.n; ++b)
                out << (b ? "," : "") << format_double(phys[a * g.n + b]);
            out << "\n";
        }
    }
}

void write_resolved(const Config& cfg, const RunOptions& opts) {
    fs::create_directories(opts.out_dir);
    std::ofstream out(fs::path(opts.out_dir) / "config_resolved.txt");
    out << cfg.dump();
    out << "run.format = " << opts.format << "\n";
    out << "run.seed = " << opts.seed << "\n";
    out << "run.workers = " << opts.workers << "\n";
}

// --- subcommands ------------------------------------------------------------

void simulate_one(const Config& cfg, const RunOptions& opts, double nu, std::size_t index,
                  bool dump_fields) {
    auto sc = build_scenario(cfg, nu);
    auto grid = build_grid(cfg);
    auto solver = build_solver(cfg);
    auto traj_mod = approx::integrate_center(sc, approx::CenterVariant::modified);
    auto traj_nai = approx::integrate_center(sc, approx::CenterVariant::naive);
    auto init = build_initial(cfg, sc, grid, traj_mod);
    auto times = output_times(cfg, sc);

    const fs::path dir = fs::path(opts.out_dir) / ("nu" + std::to_string(index));
    fs::create_directories(dir);

    CsvTable table;
    table.columns = {"t",   "eps",    "l1_vs_lambOseen_zhat",
                     "l1_vs_lambOseen_z", "l1_vs_omega_app", "a_hat",
                     "b_hat", "zbar_x", "zbar_y",
                     "z_x",  "z_y",    "zhat_x",
                     "zhat_y"};
    std::size_t snap_index = 0;
    spectral::simulate(sc, init, solver, times, [&](const spectral::Snapshot& snap) {
        auto rec = diag::track_snapshot(snap, sc, traj_mod, traj_nai, kit().cache->w2());
        table.rows.push_back({rec.t, rec.eps, rec.l1_vs_lo_zhat, rec.l1_vs_lo_z,
                              rec.l1_vs_omega_app, rec.a_hat, rec.b_hat, rec.z_bar.x,
                              rec.z_bar.y, rec.z.x, rec.z.y, rec.z_hat.x, rec.z_hat.y});
        if (dump_fields)
            dump_field(dir / "fields", opts.format, snap_index, snap, sc);
        ++snap_index;
    });
    table.write((dir / "tracking.csv").string());

    // scalars the report folds in
    nlohmann::json meta = {{"nu", nu},
                           {"delta", sc.delta},
                           {"T0", sc.t0_char},
                           {"d", sc.d_eff},
                           {"circulation", sc.circulation}};
    std::ofstream(dir / "run.json") << meta.dump(2) << "\n";
}

int simulate_cmd(const Config& cfg, const RunOptions& opts) {
    auto nus = cfg.get_list("scenario.nu");
    const bool dump_fields = cfg.get_string("outputs.fields", "none") == "all";
    kit(); // initialize the shared radial machinery before any threads start

    const int workers = std::max(1, opts.workers);
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::vector<std::string> errors;
    std::size_t next = 0;
    std::mutex next_mutex;
    auto body = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= nus.size())
                    return;
                i = next++;
            }
            try {
                simulate_one(cfg, opts, nus[i], i, dump_fields);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                errors.emplace_back("nu" + std::to_string(i) + ": " + e.what());
            }
        }
    };
    if (workers == 1 || nus.size() == 1) {
        body();
    } else {
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body);
        for (auto& th : pool)
            th.join();
    }
    if (!errors.empty()) {
        std::string all;
        for (const auto& e : errors)
            all += e + "; ";
        throw RunError("simulate: " + all);
    }
    return 0;
}

int approx_cmd(const Config& cfg, const RunOptions& opts) {
    const double nu = cfg.get_list("scenario.nu").front();
    auto sc = build_scenario(cfg, nu);
    auto traj = approx::integrate_center(sc, approx::CenterVariant::modified);
    auto times = output_times(cfg, sc);

    CsvTable table;
    table.columns = {"t",        "eps",      "a",           "b",
                     "moment0",  "moment1_x", "moment1_y",
                     "residual_sup", "residual_l2"};
    for (double t : times) {
        auto ap = approx::build_approx(sc, t, traj, *kit().cache);
        auto norms = approx::residual_norm(sc, t, traj, *kit().cache);
        const Vec2 m1 = ap.moment1();
        table.rows.push_back({t, ap.eps, ap.strain.a, ap.strain.b, ap.moment0(), m1.x,
                              m1.y, norms.sup_weighted, norms.l2_weighted});
    }
    fs::create_directories(opts.out_dir);
    table.write((fs::path(opts.out_dir) / "approx.csv").string());

    // profile exports for plotting
    const auto& c = *kit().cache;
    radial::write_profile_csv((fs::path(opts.out_dir) / "w2.csv").string(), c.w2(), 2,
                              "sin");
    return 0;
}

int relax_cmd(const Config& cfg, const RunOptions& opts) {
    auto nus = cfg.get_list("scenario.nu");
    kit();
    CsvTable summary;
    summary.columns = {"delta", "beta_hat", "gap_t0", "gap_2t0", "quad_ratio_late"};

    for (std::size_t i = 0; i < nus.size(); ++i) {
        auto sc = build_scenario(cfg, nus[i]);
        auto grid = build_grid(cfg);
        auto solver = build_solver(cfg);
        auto traj_mod = approx::integrate_center(sc, approx::CenterVariant::modified);
        auto traj_nai = approx::integrate_center(sc, approx::CenterVariant::naive);
        auto init = spectral::init_gaussian(grid, sc.circulation,
                                            sc.core_size(sc.t_begin), sc.z0);
        auto times = output_times(cfg, sc);

        CsvTable hist;
        hist.columns = {"t", "eps", "l1_vs_omega_app", "a_hat", "b_hat", "a", "b"};
        spectral::simulate(sc, init, solver, times, [&](const spectral::Snapshot& snap) {
            auto rec =
                diag::track_snapshot(snap, sc, traj_mod, traj_nai, kit().cache->w2());
            auto s = flows::strain_rates(*sc.flow, rec.z, snap.t);
            hist.rows.push_back(
                {rec.t, rec.eps, rec.l1_vs_omega_app, rec.a_hat, rec.b_hat, s.a, s.b});
        });
        const fs::path dir = fs::path(opts.out_dir) / ("nu" + std::to_string(i));
        fs::create_directories(dir);
        hist.write((dir / "relax.csv").string());

        double beta = std::nan("");
        try {
            beta = diag::relaxation_fit(hist.values("t"), hist.values("l1_vs_omega_app"));
        } catch (const Error&) {
        }

        // initial-gap response to doubling the start time (no evolution)
        auto gap_at = [&](double t0) {
            const double ell = std::sqrt(sc.viscosity * t0);
            auto f = spectral::init_gaussian(grid, sc.circulation, ell, sc.z0);
            return diag::l1_error(
                f,
                [&](Vec2 x) {
                    return approx::eval_omega_app(sc.circulation, ell, sc.z0, *sc.flow,
                                                  t0, x, kit().cache->w2());
                },
                sc.circulation);
        };
        const double gap1 = gap_at(sc.t_begin);
        const double gap2 = gap_at(2.0 * sc.t_begin);

        // late-time quadrupole ratio
        double ratio = std::nan("");
        if (!hist.rows.empty()) {
            double acc = 0.0;
            std::size_t cnt = 0;
            for (std::size_t r = hist.rows.size() / 2; r < hist.rows.size(); ++r) {
                const double a = hist.rows[r][hist.column("a")];
                if (a != 0.0) {
                    acc += hist.rows[r][hist.column("a_hat")] / a;
                    ++cnt;
                }
            }
            if (cnt)
                ratio = acc / static_cast<double>(cnt);
        }
        summary.rows.push_back({sc.delta, beta, gap1, gap2, ratio});
    }
    fs::create_directories(opts.out_dir);
    summary.write((fs::path(opts.out_dir) / "relax_summary.csv").string());
    return 0;
}

int spectrum_cmd(const Config& cfg, const RunOptions& opts) {
    auto modes = cfg.get_list("spectrum.modes", {0.0, 1.0, 2.0});
    const double rmax = cfg.get_double("spectrum.rmax", 14.0);
    const auto cells = static_cast<std::size_t>(cfg.get_int("spectrum.cells", 400));
    fs::create_directories(opts.out_dir);
    for (double md : modes) {
        const int n = static_cast<int>(md);
        auto op = lindyn::assemble_operators(n, rmax, cells);
        auto ev = lindyn::diffusion_spectrum(op);
        CsvTable t;
        t.columns = {"index", "eigenvalue"};
        for (std::size_t i = 0; i < ev.size(); ++i)
            t.rows.push_back({static_cast<double>(i), ev[i]});
        t.write((fs::path(opts.out_dir) / ("spectrum_n" + std::to_string(n) + ".csv"))
                    .string());
    }
    return 0;
}

double broad_profile(double r) {
    return r * r * std::exp(-0.25 * r * r) * (1.0 + 0.5 * r);
}

int relax_linear_cmd(const Config& cfg, const RunOptions& opts) {
    auto deltas = cfg.get_list("relax_linear.deltas",
                               {1e-2, std::pow(10.0, -2.5), 1e-3});
    const int n = static_cast<int>(cfg.get_int("relax_linear.mode", 2));
    auto op = lindyn::assemble_operators(n);
    auto phi0 = lindyn::mode_vector(op, broad_profile);

    CsvTable t;
    t.columns = {"delta", "rate"};
    for (double delta : deltas) {
        lindyn::LinearDynamics dyn{&op, 1.0 / delta, true};
        lindyn::EvolveOptions o;
        o.dtau = cfg.get_double("relax_linear.dtau", 2e-4);
        o.tau_max = cfg.get_double("relax_linear.tau_max", 15.0);
        t.rows.push_back({delta, lindyn::decay_rate(lindyn::evolve_linear(dyn, phi0, o))});
    }
    fs::create_directories(opts.out_dir);
    t.write((fs::path(opts.out_dir) / "relax_linear.csv").string());
    return 0;
}

int burgers_cmd(const Config& cfg, const RunOptions& opts) {
    auto deltas = cfg.get_list("burgers.deltas", {0.04, 0.02, 0.01});
    const double lambda = cfg.get_double("burgers.lambda", 0.5);
    auto grid = radial::RadialGrid::uniform(20.0, 1000);
    const auto& w2 = kit().cache->w2();

    CsvTable t;
    t.columns = {"delta", "gap_first_order", "iterations"};
    for (double delta : deltas) {
        auto sol = approx::solve_burgers(delta, lambda, grid);
        const double gap = approx::l1_polar(grid, [&](double r, double th) {
            return sol.eval(r, th) - (radial::omega0(r) -
                                      0.5 * lambda * delta * w2.interp(r) *
                                          std::sin(2.0 * th));
        });
        t.rows.push_back({delta, gap, static_cast<double>(sol.iterations)});
    }
    fs::create_directories(opts.out_dir);
    t.write((fs::path(opts.out_dir) / "burgers.csv").string());
    return 0;
}

} // namespace

int run_scenario(const Config& cfg, const std::string& subcommand, const RunOptions& opts) {
    if (opts.out_dir.empty())
        throw ConfigError("config: output directory is required (--out or VORTEXLAB_OUT)");
    if (subcommand == "report") {
        const std::string summary = export_report(opts.out_dir);
        std::cout << summary << "\n";
        return 0;
    }
    write_resolved(cfg, opts);
    if (subcommand == "simulate")
        return simulate_cmd(cfg, opts);
    if (subcommand == "approx")
        return approx_cmd(cfg, opts);
    if (subcommand == "relax")
        return relax_cmd(cfg, opts);
    if (subcommand == "spectrum")
        return spectrum_cmd(cfg, opts);
    if (subcommand == "relax-linear")
        return relax_linear_cmd(cfg, opts);
    if (subcommand == "burgers")
        return burgers_cmd(cfg, opts);
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

} // namespace vortexlab::cli
