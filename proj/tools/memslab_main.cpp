// memslab: simulation and verification runs for a squeeze-film MEMS capacitor
// model (quasilinear Reynolds pressure coupled to a semilinear membrane wave).
//
// Subcommands: simulate, steady, pullin, verify. Exit codes: 0 success
// (a quench event is a result, not a failure), 1 solver failure, 2 bad
// configuration or arguments.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memslab/config.hpp"
#include "memslab/errors.hpp"
#include "memslab/io.hpp"
#include "memslab/kernels.hpp"
#include "memslab/oracle.hpp"
#include "memslab/parabolic.hpp"
#include "memslab/steady.hpp"
#include "memslab/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace memslab;

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path output_root() {
    if (const char* env = std::getenv("MEMSLAB_OUT_ROOT")) return fs::path(env);
    return fs::path("memslab-out");
}

struct Manifest {
    json diagnostics = json::object();
    std::vector<std::string> artifacts;

    void add(const std::string& rel) { artifacts.push_back(rel); }

    void write(const fs::path& dir, std::uint64_t cfg_hash) {
        add("manifest.json");
        json j;
        j["config_hash"] = cfg_hash;
        j["created"] = timestamp_utc();
        j["artifacts"] = artifacts;
        j["diagnostics"] = diagnostics;
        std::ofstream out(dir / "manifest.json");
        out << j.dump(2) << '\n';
    }
};

json path_extrema(const FieldPath& p) {
    double lo = 1e300, hi = -1e300;
    for (const auto& f : p.entries)
        for (double v : f.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return json{{"min", lo}, {"max", hi}};
}

double rel_linf(const FieldPath& a, const FieldPath& b) {
    double worst = 0.0, scale = 0.0;
    const int n = std::min(a.size(), b.size());
    for (int j = 0; j < n; ++j)
        for (std::size_t i = 0; i < a.entries[j].values.size(); ++i) {
            worst = std::max(worst,
                             std::abs(a.entries[j].values[i] - b.entries[j].values[i]));
            scale = std::max(scale, std::abs(b.entries[j].values[i]));
        }
    // absolute difference when the reference field is numerically zero
    return scale > 1e-12 ? worst / scale : worst;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 std::optional<std::uint64_t> seed, int workers) {
    SolverConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (workers > 0) cfg.workers = workers;
    validate_config(cfg);
    if (cfg.workers > 0) kernels::set_worker_count(cfg.workers);

    fs::path dir;
    if (!out_override.empty()) dir = out_override;
    else if (!cfg.output_dir.empty()) dir = cfg.output_dir;
    else
        dir = output_root() / ("run-" + std::to_string(config_hash(cfg)));
    fs::create_directories(dir / "solver");
    fs::create_directories(dir / "oracle");

    const Grid1D grid = build_grid(cfg.length, cfg.n_nodes);
    const InitialData data = make_initial_data(cfg, grid);
    Manifest manifest;

    {
        std::ofstream out(dir / "config.txt");
        out << emit_config(cfg);
        manifest.add("config.txt");
    }

    // primary spectral solve; a gap collapse is recorded, not fatal
    bool solver_ok = false;
    json solver_diag = json::object();
    try {
        const CoupledSolution sol = gamma_fixed_point(cfg);
        write_path_csv((dir / "solver" / "u.csv").string(), grid, sol.u_path);
        write_path_csv((dir / "solver" / "v.csv").string(), grid, sol.v_path);
        write_path_csv((dir / "solver" / "w.csv").string(), grid, sol.w_path);
        manifest.add("solver/u.csv");
        manifest.add("solver/v.csv");
        manifest.add("solver/w.csv");
        solver_diag = {{"outer_iterations", sol.diag.outer_iterations},
                       {"final_ratio", sol.diag.final_ratio},
                       {"outer_ratios", sol.diag.outer_ratios},
                       {"min_gap", sol.diag.min_gap},
                       {"kappa", sol.diag.kappa},
                       {"L_G", sol.diag.L_G},
                       {"delta_o", sol.diag.delta_o},
                       {"T0", sol.diag.T0},
                       {"T0_active_term", sol.diag.T0_active_term},
                       {"garding_K", sol.diag.garding_K},
                       {"garding_Ko", sol.diag.garding_Ko},
                       {"sector_omega", sol.diag.sector_omega},
                       {"sector_M", sol.diag.sector_M},
                       {"u_range", path_extrema(sol.u_path)},
                       {"w_range", path_extrema(sol.w_path)}};
        solver_ok = true;

        double dev = 0.0;
        for (const auto& f : sol.u_path.entries)
            for (double v : f.values) dev = std::max(dev, std::abs(v - cfg.phys.theta1));
        std::cout << "solver: converged in " << sol.diag.outer_iterations
                  << " sweeps, max |u - theta1| = " << format_double(dev)
                  << ", min gap = " << format_double(sol.diag.min_gap) << "\n";
    } catch (const quench_imminent_error& e) {
        solver_diag = {{"quench_imminent",
                        {{"node", e.node_index}, {"time", e.time}, {"gap", e.gap_value}}}};
        std::cout << "solver: gap collapse imminent at node " << e.node_index
                  << ", t = " << format_double(e.time) << "\n";
    } catch (const horizon_error& e) {
        solver_diag = {{"horizon_exceeded",
                        {{"node", e.node_index}, {"time", e.time}, {"gap", e.gap_value}}}};
        std::cout << "solver: horizon too large, gap left the admissible ball at t = "
                  << format_double(e.time) << "\n";
    }

    // reference solve; carries the quench detector
    const MolResult mol =
        mol_solve(grid, cfg.phys, data.u0, data.v0, data.w0, cfg.horizon, cfg.n_steps,
                  resolved_quench_threshold(cfg));
    write_path_csv((dir / "oracle" / "u.csv").string(), grid, mol.u);
    write_path_csv((dir / "oracle" / "v.csv").string(), grid, mol.v);
    write_path_csv((dir / "oracle" / "w.csv").string(), grid, mol.w);
    manifest.add("oracle/u.csv");
    manifest.add("oracle/v.csv");
    manifest.add("oracle/w.csv");

    json oracle_diag = {{"internal_dt", mol.dt_internal},
                        {"steps_taken", mol.steps_taken},
                        {"u_range", path_extrema(mol.u)},
                        {"w_range", path_extrema(mol.w)}};
    if (mol.quench) {
        oracle_diag["quench"] = {{"time", mol.quench->time},
                                 {"node", mol.quench->node_index},
                                 {"w_value", mol.quench->w_value}};
        std::cout << "oracle: quench at t = " << format_double(mol.quench->time)
                  << ", node " << mol.quench->node_index << "\n";
    }

    json diff = json::object();
    if (solver_ok && !mol.quench) {
        const FieldPath su = read_path_csv((dir / "solver" / "u.csv").string(), grid);
        const FieldPath sv = read_path_csv((dir / "solver" / "v.csv").string(), grid);
        const FieldPath sw = read_path_csv((dir / "solver" / "w.csv").string(), grid);
        const double du = rel_linf(su, mol.u);
        const double dv = rel_linf(sv, mol.v);
        const double dw = rel_linf(sw, mol.w);
        diff = {{"u_rel_linf", du}, {"v_rel_linf", dv}, {"w_rel_linf", dw}};
        std::cout << "solver/oracle diff: u " << format_double(du) << ", v "
                  << format_double(dv) << ", w " << format_double(dw) << "\n";
    }

    {
        json d;
        d["solver"] = solver_diag;
        d["oracle"] = oracle_diag;
        d["diff"] = diff;
        std::ofstream out(dir / "diagnostics.json");
        out << d.dump(2) << '\n';
        manifest.add("diagnostics.json");
        manifest.diagnostics = {{"solver_converged", solver_ok},
                                {"oracle_quench", mol.quench.has_value()}};
    }
    manifest.write(dir, config_hash(cfg));
    std::cout << "outputs in " << dir.string() << "\n";
    return 0;
}

int cmd_steady(double beta_f, const std::string& sweep, int grid_n, double length,
               const std::string& out_path) {
    const Grid1D grid = build_grid(length, grid_n);
    if (!sweep.empty()) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        char colon1 = 0, colon2 = 0;
        std::istringstream ss(sweep);
        ss >> lo >> colon1 >> hi >> colon2 >> count;
        if (!ss || colon1 != ':' || colon2 != ':' || count < 1 || hi < lo || lo < 0.0)
            throw config_error("malformed sweep range '" + sweep + "', expected LO:HI:N");
        const auto rows = steady_sweep(grid, lo, hi, count);
        std::ostringstream csv;
        csv << "beta_F,w_min,solvable\n";
        for (const auto& row : rows)
            csv << format_double(row.beta_F) << ',' << format_double(row.w_min) << ','
                << (row.solvable ? 1 : 0) << '\n';
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << csv.str();
        }
        std::cout << csv.str();
        return 0;
    }

    if (beta_f < 0.0) throw config_error("--beta-f must be nonnegative");
    const SteadyResult res = steady_membrane(beta_f, grid);
    if (res.converged()) {
        std::cout << "beta_F=" << format_double(beta_f)
                  << " w_min=" << format_double(res.min_w)
                  << " residual=" << format_double(res.residual)
                  << " newton_iters=" << res.newton_iters << "\n";
        if (!out_path.empty()) write_field_csv(out_path, grid, res.w);
    } else {
        std::cout << "beta_F=" << format_double(beta_f)
                  << " no steady shape (last solvable load "
                  << format_double(res.last_solvable) << ")\n";
    }
    return 0;
}

int cmd_pullin(double tol, int grid_n, double length) {
    if (!(tol > 0.0)) throw config_error("--tol must be positive");
    const Grid1D grid = build_grid(length, grid_n);
    const PullinResult res = pullin_threshold(grid, tol);
    const double pi = 3.14159265358979323846;
    const double cap = 4.0 * (pi / length) * (pi / length) / 27.0;
    std::cout << "pull-in estimate beta_F* = " << format_double(res.beta_star)
              << "  bracket [" << format_double(res.lo) << ", " << format_double(res.hi)
              << "]\n"
              << "spectral upper bound 4 mu0 / 27 = " << format_double(cap) << "\n";
    if (!res.monotone)
        std::cout << "warning: solvability flipped during refinement (fold resolution)\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& config_path,
               const std::string& out_path, std::optional<std::uint64_t> seed,
               int workers) {
    SolverConfig cfg;
    if (!config_path.empty()) {
        cfg = load_config(config_path);
    } else {
        cfg.phys = PhysicalConstants{1.0, 1.0, 2.0, 1.0};
        cfg.n_nodes = 127;
        cfg.n_modes = 63;
        cfg.alpha = 0.2;
    }
    if (seed) cfg.seed = *seed;
    if (workers > 0) kernels::set_worker_count(workers);
    validate_config(cfg);

    std::vector<std::string> suites;
    if (suite == "all") suites = suite_names();
    else {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end())
            throw config_error("unknown verification suite '" + suite + "'");
        suites.push_back(suite);
    }

    int failures = 0;
    json all = json::array();
    for (const auto& name : suites) {
        const VerificationReport report = run_suite(name, cfg);
        std::cout << report_text(report);
        failures += report.failures();
        all.push_back(json::parse(report_json(report)));
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << all.dump(2) << '\n';
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeeze-film MEMS lab: coupled pressure/membrane solvers and "
                 "verification suites"};
    app.require_subcommand(1);

    int workers = 0;
    std::optional<std::uint64_t> seed;
    app.add_option("--workers", workers, "worker threads for the parallel kernels");
    app.add_option("--seed", seed, "seed override for randomized probes");

    auto* sim = app.add_subcommand("simulate", "run the coupled solver and the oracle");
    std::string config_path, out_dir;
    sim->add_option("--config", config_path, "flat key=value run configuration")
        ->required();
    sim->add_option("--out", out_dir, "output directory");

    auto* steady = app.add_subcommand("steady", "stationary membrane shapes");
    double beta_f = -1.0;
    std::string sweep, steady_out;
    int grid_n = 127;
    double length = 1.0;
    auto* beta_opt = steady->add_option("--beta-f", beta_f, "single load");
    auto* sweep_opt = steady->add_option("--sweep", sweep, "LO:HI:N load sweep");
    steady->add_option("--grid-n", grid_n, "interior nodes");
    steady->add_option("--length", length, "domain length");
    steady->add_option("--out", steady_out, "CSV output path");
    beta_opt->excludes(sweep_opt);

    auto* pullin = app.add_subcommand("pullin", "critical electrostatic load");
    double tol = 1e-4;
    int pull_n = 127;
    double pull_len = 1.0;
    pullin->add_option("--tol", tol, "bracket tolerance");
    pullin->add_option("--grid-n", pull_n, "interior nodes");
    pullin->add_option("--length", pull_len, "domain length");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all", verify_cfg, verify_out;
    verify->add_option("--suite", suite, "suite name or 'all'");
    verify->add_option("--config", verify_cfg, "run configuration");
    verify->add_option("--out", verify_out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (workers > 0) kernels::set_worker_count(workers);
        if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed, workers);
        if (steady->parsed()) {
            if (sweep.empty() && beta_opt->count() == 0)
                throw config_error("steady needs --beta-f or --sweep");
            return cmd_steady(beta_f, sweep, grid_n, length, steady_out);
        }
        if (pullin->parsed()) return cmd_pullin(tol, pull_n, pull_len);
        if (verify->parsed())
            return cmd_verify(suite, verify_cfg, verify_out, seed, workers);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const iteration_error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
