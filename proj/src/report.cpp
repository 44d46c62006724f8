#include "vortexlab/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "vortexlab/config.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/flows.hpp"

namespace vortexlab::cli {

namespace fs = std::filesystem;

namespace {

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_dat(const fs::path& path, const std::vector<double>& x,
               const std::vector<double>& y) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << " " << format_double(y[i]) << "\n";
}

} // namespace

std::string export_report(const std::string& run_dir) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir))
        throw MissingArtifacts("report: no such directory '" + run_dir + "'");

    nlohmann::json summary;
    bool found_any = false;

    // resolved config, if present (needed to recompute strain rates)
    std::shared_ptr<const flows::ExternalFlow> flow;
    double t_char = 0.0;
    if (fs::exists(dir / "config_resolved.txt")) {
        auto cfg = Config::parse_file((dir / "config_resolved.txt").string());
        summary["config"] = cfg.entries();
        if (cfg.has("flow.kind")) {
            std::map<std::string, double> params;
            for (const char* key : {"gamma", "U", "Lc", "omega_r"})
                if (cfg.has(std::string("flow.") + key))
                    params[key] = cfg.get_double(std::string("flow.") + key);
            flow = flows::make_flow(cfg.get_string("flow.kind"), params);
            t_char = flow->t_char();
        }
        found_any = true;
    }

    // tracked simulation sweeps
    std::vector<double> sweep_eps, sweep_err;
    nlohmann::json runs = nlohmann::json::array();
    for (std::size_t i = 0;; ++i) {
        const fs::path sub = dir / ("nu" + std::to_string(i));
        if (!fs::exists(sub / "tracking.csv"))
            break;
        found_any = true;
        auto t = CsvTable::read((sub / "tracking.csv").string());
        nlohmann::json run;
        run["rows"] = t.rows.size();
        if (fs::exists(sub / "run.json")) {
            std::ifstream in(sub / "run.json");
            nlohmann::json meta = nlohmann::json::parse(in);
            run["nu"] = meta["nu"];
            run["delta"] = meta["delta"];
        }
        if (!t.rows.empty()) {
            const auto& last = t.rows.back();
            run["final_t"] = last[t.column("t")];
            run["final_eps"] = last[t.column("eps")];
            run["final_l1_vs_omega_app"] = last[t.column("l1_vs_omega_app")];
            run["final_l1_vs_lambOseen_z"] = last[t.column("l1_vs_lambOseen_z")];
            run["final_l1_vs_lambOseen_zhat"] = last[t.column("l1_vs_lambOseen_zhat")];
            sweep_eps.push_back(last[t.column("eps")]);
            sweep_err.push_back(last[t.column("l1_vs_omega_app")]);

            // error ordering at every output
            bool ordered = true;
            for (const auto& row : t.rows)
                ordered = ordered &&
                          row[t.column("l1_vs_omega_app")] <=
                              row[t.column("l1_vs_lambOseen_z")] &&
                          row[t.column("l1_vs_lambOseen_z")] <=
                              row[t.column("l1_vs_lambOseen_zhat")];
            run["error_ordering_holds"] = ordered;

            // center hierarchy over the late window, and quadrupole ratio
            double worst_ratio = 0.0, quad_acc = 0.0;
            std::size_t quad_cnt = 0;
            for (const auto& row : t.rows) {
                const Vec2 zb{row[t.column("zbar_x")], row[t.column("zbar_y")]};
                const Vec2 z{row[t.column("z_x")], row[t.column("z_y")]};
                const Vec2 zh{row[t.column("zhat_x")], row[t.column("zhat_y")]};
                const double tt = row[t.column("t")];
                if (t_char > 0.0 && std::isfinite(t_char) && tt >= 0.3 * t_char) {
                    const double num = (zb - z).norm();
                    const double den = (zb - zh).norm();
                    if (den > 0.0)
                        worst_ratio = std::max(worst_ratio, num / den);
                }
                if (flow && tt >= 0.5 * (t.rows.front()[t.column("t")] +
                                         t.rows.back()[t.column("t")])) {
                    const auto s = flows::strain_rates(*flow, z, tt);
                    if (s.a != 0.0) {
                        quad_acc += row[t.column("a_hat")] / s.a;
                        ++quad_cnt;
                    }
                }
            }
            run["center_gap_ratio"] = worst_ratio;
            if (quad_cnt)
                run["quadrupole_ratio"] = quad_acc / static_cast<double>(quad_cnt);
        }
        runs.push_back(run);
    }
    if (!runs.empty()) {
        summary["runs"] = runs;
        double worst = 0.0, quad = std::nan("");
        for (const auto& r : runs) {
            if (r.contains("center_gap_ratio"))
                worst = std::max(worst, r["center_gap_ratio"].get<double>());
            if (r.contains("quadrupole_ratio"))
                quad = r["quadrupole_ratio"].get<double>();
        }
        summary["center_gap_ratio"] = worst;
        if (!std::isnan(quad))
            summary["quadrupole_ratio"] = quad;
    }
    if (sweep_eps.size() >= 2) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < sweep_eps.size(); ++i) {
            lx.push_back(std::log(sweep_eps[i]));
            ly.push_back(std::log(sweep_err[i]));
        }
        summary["theorem1_slope"] = lsq_slope(lx, ly);
        write_dat(dir / "eps_vs_error.dat", sweep_eps, sweep_err);
    }

    // relaxation study
    if (fs::exists(dir / "relax_summary.csv")) {
        found_any = true;
        auto t = CsvTable::read((dir / "relax_summary.csv").string());
        auto deltas = t.values("delta");
        auto betas = t.values("beta_hat");
        nlohmann::json rel;
        rel["delta"] = deltas;
        rel["beta_hat"] = betas;
        rel["gap_t0"] = t.values("gap_t0");
        rel["gap_2t0"] = t.values("gap_2t0");
        rel["quad_ratio_late"] = t.values("quad_ratio_late");
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < deltas.size(); ++i)
            if (std::isfinite(betas[i]) && betas[i] > 0.0) {
                lx.push_back(std::log(1.0 / deltas[i]));
                ly.push_back(std::log(betas[i]));
            }
        if (lx.size() >= 2)
            rel["beta_slope"] = lsq_slope(lx, ly);
        summary["relaxation"] = rel;
        write_dat(dir / "delta_vs_beta.dat", deltas, betas);
    }

    // linear enhanced-dissipation rates
    if (fs::exists(dir / "relax_linear.csv")) {
        found_any = true;
        auto t = CsvTable::read((dir / "relax_linear.csv").string());
        auto deltas = t.values("delta");
        auto rates = t.values("rate");
        nlohmann::json lin;
        lin["delta"] = deltas;
        lin["rate"] = rates;
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            lx.push_back(std::log(1.0 / deltas[i]));
            ly.push_back(std::log(rates[i]));
        }
        if (lx.size() >= 2)
            lin["rate_slope"] = lsq_slope(lx, ly);
        summary["linear_relaxation"] = lin;
        write_dat(dir / "delta_vs_rate.dat", deltas, rates);
    }

    // steady asymmetric-strain study
    if (fs::exists(dir / "burgers.csv")) {
        found_any = true;
        auto t = CsvTable::read((dir / "burgers.csv").string());
        auto deltas = t.values("delta");
        auto gaps = t.values("gap_first_order");
        nlohmann::json b;
        b["delta"] = deltas;
        b["gap_first_order"] = gaps;
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            lx.push_back(std::log(deltas[i]));
            ly.push_back(std::log(gaps[i]));
        }
        if (lx.size() >= 2)
            b["gap_slope"] = lsq_slope(lx, ly);
        summary["burgers"] = b;
        write_dat(dir / "delta_vs_gap.dat", deltas, gaps);
    }

    // operator spectra
    nlohmann::json spectra = nlohmann::json::object();
    for (int n = 0; n <= 4; ++n) {
        const fs::path f = dir / ("spectrum_n" + std::to_string(n) + ".csv");
        if (!fs::exists(f))
            continue;
        found_any = true;
        auto t = CsvTable::read(f.string());
        auto ev = t.values("eigenvalue");
        ev.resize(std::min<std::size_t>(ev.size(), 6));
        spectra["n" + std::to_string(n)] = ev;
    }
    if (!spectra.empty())
        summary["spectrum"] = spectra;

    if (!found_any)
        throw MissingArtifacts("report: no artifacts under '" + run_dir + "'");

    const std::string text = summary.dump(2);
    std::ofstream(dir / "summary.json") << text << "\n";
    return text;
}

} // namespace vortexlab::cli
