// Command-line front end: equilibria census, wave construction, parameter
// sweeps, PDE validation runs and wall sampling, with plot-ready CSV/JSON
// output. Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 no
// orbit found, 5 simulation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "angiowave/equilibria.hpp"
#include "angiowave/model.hpp"
#include "angiowave/orbits.hpp"
#include "angiowave/pde.hpp"
#include "angiowave/sweep.hpp"

using nlohmann::json;
using namespace angio;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNoOrbit = 4;
constexpr int kExitSimulation = 5;

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string param_header(const ModelParams& p) {
    return "# alpha=" + fmt17(p.alpha()) + " beta=" + fmt17(p.beta()) + " c=" + fmt17(p.c()) +
           " eps=" + fmt17(p.eps());
}

void write_file(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
}

json complex_json(const std::complex<double>& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

json record_json(const EquilibriumRecord& r) {
    json eig = json::array();
    for (const auto& l : r.eigenvalues) eig.push_back(complex_json(l));
    return json{{"kind", to_string(r.kind)},
                {"fold_index", r.fold_index},
                {"location", {{"u", r.location.u}, {"w", r.location.w}}},
                {"side", to_string(r.cls.side)},
                {"linear_type", to_string(r.cls.linear_type)},
                {"folded_type", to_string(r.cls.folded_type)},
                {"eigenvalues", eig}};
}

json params_json(const ModelParams& p) {
    return json{{"alpha", p.alpha()}, {"beta", p.beta()}, {"c", p.c()}, {"eps", p.eps()}};
}

struct ParamFlags {
    double alpha = 0.0, beta = 0.0, c = 0.0, eps = 0.0;
    void attach(CLI::App* cmd, bool need_alpha_beta = true) {
        if (need_alpha_beta) {
            cmd->add_option("--alpha", alpha, "kinetic rate ratio, > 0")->required();
            cmd->add_option("--beta", beta, "carrying-capacity ratio, > 1")->required();
        }
        cmd->add_option("--c", c, "wavespeed, > 0")->required();
        cmd->add_option("--eps", eps, "diffusion strength, >= 0");
    }
    ModelParams make() const { return ModelParams(alpha, beta, c, eps); }
};

// ---- equilibria ----------------------------------------------------------

int run_equilibria(const ParamFlags& pf, const std::string& out_path, bool human) {
    const ModelParams p = pf.make();
    const auto rep = census(p);

    json j;
    j["params"] = params_json(p);
    j["curves"]["c1"] = curve_c1(p.beta());
    const auto c2 = curve_c2(p.alpha(), p.beta());
    const auto c3 = curve_c3(p.alpha(), p.beta());
    j["curves"]["c2"] = c2 ? json(*c2) : json(nullptr);
    j["curves"]["c3"] = c3 ? json(*c3) : json(nullptr);
    j["quartic_roots"] = json::array();
    for (const auto& r : rep.quartic_roots) j["quartic_roots"].push_back(complex_json(r));
    j["records"] = json::array();
    for (const auto& r : rep.records) j["records"].push_back(record_json(r));

    write_file(out_path, j.dump(2) + "\n");

    if (human) {
        std::ostringstream os;
        os << "census at alpha=" << fmt6(p.alpha()) << " beta=" << fmt6(p.beta())
           << " c=" << fmt6(p.c()) << "\n";
        for (const auto& r : rep.records) {
            os << "  " << to_string(r.kind);
            if (r.fold_index) os << r.fold_index;
            os << " (" << fmt6(r.location.u) << ", " << fmt6(r.location.w) << ") "
               << to_string(r.cls.linear_type);
            if (r.cls.folded_type != FoldedType::None)
                os << " [" << to_string(r.cls.folded_type) << "]";
            os << " on " << to_string(r.cls.side) << "\n";
        }
        std::cerr << os.str();
    }
    return 0;
}

// ---- wave ----------------------------------------------------------------

std::string orbit_csv(const SingularOrbit& orb, const ModelParams& p) {
    std::ostringstream os;
    os << param_header(p) << " kind=" << (orb.kind == WaveKind::Smooth ? "smooth" : "shock")
       << "\n";
    os << "z,u,w,v,side,arc_id\n";
    for (const auto& s : orb.samples)
        os << fmt17(s.z) << ',' << fmt17(s.u) << ',' << fmt17(s.w) << ',' << fmt17(s.v) << ','
           << to_string(s.side) << ',' << s.arc_id << "\n";
    return os.str();
}

json orbit_json(const SingularOrbit& orb, const std::string& mode) {
    json jw;
    jw["kind"] = orb.kind == WaveKind::Smooth ? "smooth" : "shock";
    jw["mode"] = mode;
    jw["samples"] = orb.samples.size();
    jw["start_state"] = {{"u", orb.start_state.u}, {"w", orb.start_state.w}};
    jw["end_state"] = {{"u", orb.end_state.u}, {"w", orb.end_state.w}};
    if (orb.jump)
        jw["jump"] = {{"u_star", orb.jump->u_star},
                      {"w_depart", orb.jump->w_depart},
                      {"w_land", orb.jump->w_land},
                      {"mismatch", orb.jump->mismatch}};
    else
        jw["jump"] = nullptr;
    jw["transversality"] = orb.transversality;
    jw["transversality_degenerate"] = orb.transversality_degenerate;
    jw["wall_bracketing"] = {{"canard_fold_u", orb.canard_fold_u},
                             {"landing_fold_u", orb.landing_fold_u}};
    return jw;
}

int run_wave(const ParamFlags& pf, const std::string& mode, const std::string& orbit_path,
             const std::string& summary_path, bool scan_cycles) {
    const ModelParams p = pf.make();
    json summary;
    summary["params"] = params_json(p);
    summary["waves"] = json::array();
    summary["failures"] = json::object();

    std::vector<std::pair<std::string, WaveResult>> results;
    auto attempt = [&](const std::string& m) {
        WaveResult r;
        if (m == "smooth")
            r = construct_smooth_wave(p);
        else if (m == "shock")
            r = construct_shock_wave(p);
        else
            r = construct_sr_jump_wave(p);
        results.emplace_back(m, std::move(r));
    };
    if (mode == "auto") {
        attempt("smooth");
        attempt("shock");
        attempt("sr-jump");
    } else {
        attempt(mode);
    }

    const SingularOrbit* best = nullptr;
    std::string best_mode;
    for (const auto& [m, r] : results) {
        if (r.failure == WaveFailure::None && r.orbit) {
            summary["waves"].push_back(orbit_json(*r.orbit, m));
            if (!best) {
                best = &*r.orbit;
                best_mode = m;
            }
        } else {
            summary["failures"][m] = to_string(r.failure) + ": " + r.message;
        }
    }

    if (scan_cycles) {
        const auto scan = scan_limit_cycles(p);
        summary["limit_cycle_scan"] = {{"seeds", scan.seeds},
                                       {"converged_to_equilibrium", scan.converged_to_equilibrium},
                                       {"left_window", scan.left_window},
                                       {"undecided", scan.undecided},
                                       {"suspected_cycles", scan.suspected_cycles}};
    }

    write_file(summary_path, summary.dump(2) + "\n");
    if (!best) return kExitNoOrbit;
    if (!orbit_path.empty()) write_file(orbit_path, orbit_csv(*best, p));
    std::cerr << "wave: kind="
              << (best->kind == WaveKind::Smooth ? "smooth" : "shock") << " via " << best_mode
              << " (" << best->samples.size() << " samples)\n";
    return 0;
}

// ---- sweep ---------------------------------------------------------------

int run_sweep(double beta, double a0, double a1, double c0, double c1, int na, int nc, int jobs,
              const std::string& grid_path, const std::string& boundary_path) {
    const auto grid = sweep(beta, a0, a1, c0, c1, na, nc, jobs);

    std::ostringstream os;
    os << "# beta=" << fmt17(beta) << " alpha=(" << fmt17(a0) << ',' << fmt17(a1) << "] c=("
       << fmt17(c0) << ',' << fmt17(c1) << "] n_alpha=" << na << " n_c=" << nc << "\n";
    os << "alpha,c,census,H_side,H_type\n";
    std::size_t failed = 0;
    for (int j = 0; j < grid.n_c; ++j)
        for (int i = 0; i < grid.n_alpha; ++i) {
            const auto& lbl = grid.at(i, j);
            if (!lbl.error.empty()) ++failed;
            os << fmt17(grid.alpha_at(i)) << ',' << fmt17(grid.c_at(j)) << ','
               << census_string(lbl) << ',' << to_string(lbl.H_side) << ','
               << (lbl.degenerate ? "degenerate" : to_string(lbl.H_type)) << "\n";
        }
    write_file(grid_path, os.str());

    if (!boundary_path.empty()) {
        std::ostringstream ob;
        ob << "# beta=" << fmt17(beta) << " boundary segments between unlike cells\n";
        ob << "alpha0,c0,alpha1,c1,label\n";
        for (const auto& s : boundaries(grid))
            ob << fmt17(s.alpha0) << ',' << fmt17(s.c0) << ',' << fmt17(s.alpha1) << ','
               << fmt17(s.c1) << ',' << s.label << "\n";
        write_file(boundary_path, ob.str());
    }
    std::cerr << "sweep: " << grid.cells.size() << " cells, " << failed << " failed\n";
    return failed == grid.cells.size() ? kExitSolver : 0;
}

// ---- pde -----------------------------------------------------------------

int run_pde(const ParamFlags& pf, const std::string& mode, PdeConfig cfg, double t_end,
            const std::string& snap_path, const std::string& summary_path) {
    const ModelParams p = pf.make();
    cfg.eps = p.eps();
    validate(cfg);

    WaveResult wr;
    if (mode == "smooth")
        wr = construct_smooth_wave(p);
    else if (mode == "shock")
        wr = construct_shock_wave(p);
    else if (mode == "sr-jump")
        wr = construct_sr_jump_wave(p);
    else {
        wr = construct_smooth_wave(p);
        if (wr.failure != WaveFailure::None) wr = construct_shock_wave(p);
        if (wr.failure != WaveFailure::None) wr = construct_sr_jump_wave(p);
    }
    if (wr.failure != WaveFailure::None || !wr.orbit) {
        std::cerr << "pde: no orbit to seed (" << wr.message << ")\n";
        return kExitNoOrbit;
    }

    Field1D f = seed_from_orbit(*wr.orbit, p, cfg);
    std::vector<Field1D> history;
    std::ostringstream snaps;
    snaps << param_header(p) << " L=" << fmt17(cfg.L) << " N=" << cfg.N << " frame="
          << (cfg.frame == FrameMode::Comoving ? "comoving" : "lab") << "\n";
    snaps << "t,x,u,w\n";
    auto record = [&](const Field1D& g) {
        if (g.t >= cfg.transient_cutoff) history.push_back(g);
        if (snap_path.empty()) return;
        for (std::size_t i = 0; i < g.size(); ++i)
            snaps << fmt17(g.t) << ',' << fmt17(g.x_at(i)) << ',' << fmt17(g.u[i]) << ','
                  << fmt17(g.w[i]) << "\n";
    };

    record(f);
    try {
        for (double t = cfg.snapshot_dt; t <= t_end + 1e-12; t += cfg.snapshot_dt) {
            f = step_to(std::move(f), t, p, cfg);
            record(f);
        }
    } catch (...) {
        if (!snap_path.empty()) write_file(snap_path, snaps.str());
        throw;
    }
    if (!snap_path.empty()) write_file(snap_path, snaps.str());

    const auto fit = measure_wavespeed(history, p, cfg);
    json summary;
    summary["params"] = params_json(p);
    summary["seeded_kind"] = wr.orbit->kind == WaveKind::Smooth ? "smooth" : "shock";
    summary["measured_speed"] = fit.speed;
    summary["fit_residual"] = fit.residual;
    summary["snapshots"] = history.size();
    json widths = json::array();
    if (wr.orbit->kind == WaveKind::Shock)
        for (const auto& g : history) widths.push_back(shock_width(g, p));
    summary["shock_widths"] = widths;

    write_file(summary_path, summary.dump(2) + "\n");
    std::cerr << "pde: measured speed " << fmt6(fit.speed) << " (residual " << fmt6(fit.residual)
              << ")\n";
    return 0;
}

// ---- wall ----------------------------------------------------------------

int run_wall(double c, double u_min, int n, const std::string& out_path) {
    if (!(u_min > 0.0)) throw std::invalid_argument("--u-min must be > 0");
    const ModelParams p(1.0, 2.0, c);
    const double u_max = wall_u_zero(p);
    std::ostringstream os;
    os << "# c=" << fmt17(c) << " u_min=" << fmt17(u_min) << " u_max=" << fmt17(u_max) << "\n";
    os << "u,F\n";
    for (int i = 0; i < n; ++i) {
        const double u = u_min + (u_max - u_min) * i / (n - 1);
        os << fmt17(u) << ',' << fmt17(wall_F(u, p)) << "\n";
    }
    write_file(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"travelling-wave analysis of the capillary-tip / chemoattractant model"};
    app.require_subcommand(1);

    // equilibria
    auto* eq = app.add_subcommand("equilibria", "equilibrium and canard-point census");
    ParamFlags eq_p;
    eq_p.attach(eq);
    std::string eq_out = "-";
    bool eq_human = false;
    eq->add_option("--out", eq_out, "JSON report path ('-' for stdout)");
    eq->add_flag("--human", eq_human, "print a 6-digit summary to stderr");

    // wave
    auto* wv = app.add_subcommand("wave", "construct a singular travelling wave");
    ParamFlags wv_p;
    wv_p.attach(wv);
    std::string wv_mode = "auto";
    std::string wv_orbit, wv_summary = "-";
    bool wv_scan = false;
    wv->add_option("--mode", wv_mode, "auto|smooth|shock|sr-jump")
        ->check(CLI::IsMember({"auto", "smooth", "shock", "sr-jump"}));
    wv->add_option("--out-orbit", wv_orbit, "orbit CSV path");
    wv->add_option("--out-summary", wv_summary, "summary JSON path ('-' for stdout)");
    wv->add_flag("--scan-cycles", wv_scan, "include the limit-cycle seed scan");

    // sweep
    auto* sw = app.add_subcommand("sweep", "classify an (alpha, c) grid at fixed beta");
    double sw_beta = 2.5, sw_a0 = 0.0, sw_a1 = 2.0, sw_c0 = 0.0, sw_c1 = 2.0;
    int sw_na = 200, sw_nc = 200, sw_jobs = 1;
    std::string sw_grid = "-", sw_boundary;
    sw->add_option("--beta", sw_beta, "slice beta, > 1")->required();
    sw->add_option("--alpha-min", sw_a0);
    sw->add_option("--alpha-max", sw_a1);
    sw->add_option("--c-min", sw_c0);
    sw->add_option("--c-max", sw_c1);
    sw->add_option("--na", sw_na, "alpha resolution");
    sw->add_option("--nc", sw_nc, "c resolution");
    sw->add_option("--jobs", sw_jobs, "parallel workers");
    sw->add_option("--out-grid", sw_grid, "grid CSV path ('-' for stdout)");
    sw->add_option("--out-boundary", sw_boundary, "boundary CSV path");

    // pde
    auto* pd = app.add_subcommand("pde", "seeded PDE validation run");
    ParamFlags pd_p;
    pd_p.attach(pd);
    PdeConfig pd_cfg;
    std::string pd_mode = "auto", pd_snaps, pd_summary = "-", pd_frame = "lab";
    double pd_tend = 20.0;
    pd->add_option("--mode", pd_mode, "auto|smooth|shock|sr-jump")
        ->check(CLI::IsMember({"auto", "smooth", "shock", "sr-jump"}));
    pd->add_option("--N", pd_cfg.N, "grid points");
    pd->add_option("--L", pd_cfg.L, "domain length");
    pd->add_option("--t-end", pd_tend, "final time");
    pd->add_option("--snapshot-dt", pd_cfg.snapshot_dt);
    pd->add_option("--frame", pd_frame, "lab|comoving")
        ->check(CLI::IsMember({"lab", "comoving"}));
    pd->add_flag("--upwind", pd_cfg.upwind, "upwinded chemotaxis flux (required when eps = 0)");
    pd->add_option("--out-snapshots", pd_snaps, "snapshot CSV path");
    pd->add_option("--out-summary", pd_summary, "summary JSON path ('-' for stdout)");

    // wall
    auto* wl = app.add_subcommand("wall", "sample the wall of singularities");
    double wl_c = 0.0, wl_umin = 1e-2;
    int wl_n = 400;
    std::string wl_out = "-";
    wl->add_option("--c", wl_c, "wavespeed, > 0")->required();
    wl->add_option("--u-min", wl_umin, "left sampling limit, > 0");
    wl->add_option("--n", wl_n, "sample count");
    wl->add_option("--out", wl_out, "CSV path ('-' for stdout)");

    std::string config_path;
    for (auto* sub : {eq, wv, sw, pd, wl})
        sub->add_option("--config", config_path, "key=value configuration file; flags override");

    // expand the config file into trailing flags so explicit flags win and
    // unknown keys are rejected like any other unknown flag
    std::vector<std::string> args(argv, argv + argc);
    {
        std::string path;
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        }
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) {
                std::cerr << "invalid input: cannot open config file " << path << "\n";
                return kExitInvalid;
            }
            std::string line;
            while (std::getline(in, line)) {
                const auto start = line.find_first_not_of(" \t");
                if (start == std::string::npos || line[start] == '#') continue;
                const auto sep = line.find('=');
                if (sep == std::string::npos) {
                    std::cerr << "invalid input: config line without '=': " << line << "\n";
                    return kExitInvalid;
                }
                auto trim = [](std::string s) {
                    const auto a = s.find_first_not_of(" \t");
                    const auto b = s.find_last_not_of(" \t\r");
                    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
                };
                const std::string key = "--" + trim(line.substr(0, sep));
                const std::string value = trim(line.substr(sep + 1));
                const bool given = std::any_of(args.begin() + 1, args.end(),
                                               [&](const std::string& a) {
                                                   return a == key || a.rfind(key + "=", 0) == 0;
                                               });
                if (!given) {
                    args.push_back(key);
                    args.push_back(value);
                }
            }
        }
    }
    std::vector<char*> cargs;
    cargs.reserve(args.size());
    for (auto& a : args) cargs.push_back(a.data());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*eq) return run_equilibria(eq_p, eq_out, eq_human);
        if (*wv) return run_wave(wv_p, wv_mode, wv_orbit, wv_summary, wv_scan);
        if (*sw)
            return run_sweep(sw_beta, sw_a0, sw_a1, sw_c0, sw_c1, sw_na, sw_nc, sw_jobs, sw_grid,
                             sw_boundary);
        if (*pd) {
            pd_cfg.frame = pd_frame == "comoving" ? FrameMode::Comoving : FrameMode::Lab;
            return run_pde(pd_p, pd_mode, pd_cfg, pd_tend, pd_snaps, pd_summary);
        }
        if (*wl) return run_wall(wl_c, wl_umin, wl_n, wl_out);
    } catch (const SimulationBlowup& e) {
        std::cerr << "simulation failure: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
