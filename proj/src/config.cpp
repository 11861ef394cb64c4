#include "memslab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "memslab/errors.hpp"

namespace memslab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key + ": expected a number, got '" + value + "'");
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key + ": expected an integer, got '" + value + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

Field profile_field(const std::string& key, const std::string& spec, double base,
                    const Grid1D& grid) {
    const int n = grid.n_nodes;
    Field f(n, base);
    if (spec == "equilibrium") return f;
    if (spec == "zero") {
        for (auto& v : f.values) v = 0.0;
        return f;
    }
    const auto parts = split(spec, ':');
    if (parts[0] == "bump") {
        double amp = 0.05;
        if (parts.size() == 2) amp = parse_double(key, parts[1]);
        else if (parts.size() > 2) throw config_error(key + ": malformed bump profile");
        for (int j = 0; j < n; ++j) {
            const double s = 2.0 * grid.x(j) / grid.length - 1.0;
            f.values[j] = base + amp * std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
        return f;
    }
    if (parts[0] == "mode") {
        if (parts.size() != 3) throw config_error(key + ": expected mode:k:amplitude");
        const long k = parse_int(key, parts[1]);
        const double amp = parse_double(key, parts[2]);
        if (k < 1 || k > n) throw config_error(key + ": mode index out of range");
        for (int j = 0; j < n; ++j)
            f.values[j] = base + amp * std::sin(k * std::numbers::pi * grid.x(j) / grid.length);
        return f;
    }
    if (parts[0] == "file") {
        if (parts.size() < 2) throw config_error(key + ": expected file:path");
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw config_error(key + ": cannot open '" + path + "'");
        std::string line;
        int j = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
            const auto cols = split(line, ',');
            if (cols.size() != 2) throw config_error(key + ": malformed row in " + path);
            if (j >= n) throw config_error(key + ": too many rows in " + path);
            const double x = parse_double(key, cols[0]);
            if (std::abs(x - grid.x(j)) > 1e-9 * grid.length)
                throw config_error(key + ": node " + std::to_string(j) +
                                   " does not match the grid in " + path);
            f.values[j] = parse_double(key, cols[1]);
            ++j;
        }
        if (j != n)
            throw config_error(key + ": " + path + " has " + std::to_string(j) +
                               " rows, grid needs " + std::to_string(n));
        return f;
    }
    throw config_error(key + ": unknown profile '" + spec + "'");
}

}  // namespace

SolverConfig parse_config(const std::string& text) {
    SolverConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);

        if (key == "physics.beta_F") cfg.phys.beta_F = parse_double(key, value);
        else if (key == "physics.beta_p") cfg.phys.beta_p = parse_double(key, value);
        else if (key == "physics.theta1") cfg.phys.theta1 = parse_double(key, value);
        else if (key == "physics.theta2") cfg.phys.theta2 = parse_double(key, value);
        else if (key == "init.u") cfg.init_u = value;
        else if (key == "init.v") cfg.init_v = value;
        else if (key == "init.w") cfg.init_w = value;
        else if (key == "grid.L") cfg.length = parse_double(key, value);
        else if (key == "grid.n_nodes") cfg.n_nodes = static_cast<int>(parse_int(key, value));
        else if (key == "grid.n_modes") cfg.n_modes = static_cast<int>(parse_int(key, value));
        else if (key == "time.T") cfg.horizon = parse_double(key, value);
        else if (key == "time.n_steps") cfg.n_steps = static_cast<int>(parse_int(key, value));
        else if (key == "time.alpha") cfg.alpha = parse_double(key, value);
        else if (key == "tol.picard") cfg.picard_tol = parse_double(key, value);
        else if (key == "tol.newton") cfg.newton_tol = parse_double(key, value);
        else if (key == "tol.gamma") cfg.gamma_tol = parse_double(key, value);
        else if (key == "tol.quench_threshold") cfg.quench_threshold = parse_double(key, value);
        else if (key == "picard.radius") cfg.picard_radius = parse_double(key, value);
        else if (key == "picard.max_iter") cfg.max_picard = static_cast<int>(parse_int(key, value));
        else if (key == "gamma.max_outer") cfg.max_outer = static_cast<int>(parse_int(key, value));
        else if (key == "output.dir") cfg.output_dir = value;
        else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "run.workers") cfg.workers = static_cast<int>(parse_int(key, value));
        else throw config_error("unknown config key '" + key + "'");
    }
    return cfg;
}

SolverConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string emit_config(const SolverConfig& cfg) {
    std::stringstream out;
    out << "physics.beta_F=" << fmt(cfg.phys.beta_F) << '\n'
        << "physics.beta_p=" << fmt(cfg.phys.beta_p) << '\n'
        << "physics.theta1=" << fmt(cfg.phys.theta1) << '\n'
        << "physics.theta2=" << fmt(cfg.phys.theta2) << '\n'
        << "init.u=" << cfg.init_u << '\n'
        << "init.v=" << cfg.init_v << '\n'
        << "init.w=" << cfg.init_w << '\n'
        << "grid.L=" << fmt(cfg.length) << '\n'
        << "grid.n_nodes=" << cfg.n_nodes << '\n'
        << "grid.n_modes=" << cfg.n_modes << '\n'
        << "time.T=" << fmt(cfg.horizon) << '\n'
        << "time.n_steps=" << cfg.n_steps << '\n'
        << "time.alpha=" << fmt(cfg.alpha) << '\n'
        << "tol.picard=" << fmt(cfg.picard_tol) << '\n'
        << "tol.newton=" << fmt(cfg.newton_tol) << '\n'
        << "tol.gamma=" << fmt(cfg.gamma_tol) << '\n'
        << "tol.quench_threshold=" << fmt(cfg.quench_threshold) << '\n'
        << "picard.radius=" << fmt(cfg.picard_radius) << '\n'
        << "picard.max_iter=" << cfg.max_picard << '\n'
        << "gamma.max_outer=" << cfg.max_outer << '\n'
        << "output.dir=" << cfg.output_dir << '\n'
        << "run.seed=" << cfg.seed << '\n'
        << "run.workers=" << cfg.workers << '\n';
    return out.str();
}

InitialData make_initial_data(const SolverConfig& cfg, const Grid1D& grid) {
    InitialData data;
    data.u0 = profile_field("init.u", cfg.init_u, cfg.phys.theta1, grid);
    data.v0 = profile_field("init.v", cfg.init_v, 0.0, grid);
    data.w0 = profile_field("init.w", cfg.init_w, cfg.phys.theta2, grid);
    return data;
}

double resolved_quench_threshold(const SolverConfig& cfg) {
    return cfg.quench_threshold > 0.0 ? cfg.quench_threshold : 0.01 * cfg.phys.theta2;
}

double resolved_picard_radius(const SolverConfig& cfg, double kappa,
                              double embedding_constant) {
    if (cfg.picard_radius > 0.0) return cfg.picard_radius;
    return 0.9 * kappa / (2.0 * embedding_constant);
}

PicardSettings picard_settings(const SolverConfig& cfg, const HyperbolicInit& init,
                               const EigenBasis& basis) {
    PicardSettings s;
    s.radius = resolved_picard_radius(cfg, init.kappa, basis.embedding_constant);
    s.tol = cfg.picard_tol;
    s.max_iter = cfg.max_picard;
    validate(s, init, basis);
    return s;
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.phys.beta_F > 0.0)) throw config_error("physics.beta_F: must be positive");
    if (!(cfg.phys.beta_p > 0.0)) throw config_error("physics.beta_p: must be positive");
    if (!(cfg.phys.theta1 > 0.0)) throw config_error("physics.theta1: must be positive");
    if (!(cfg.phys.theta2 > 0.0)) throw config_error("physics.theta2: must be positive");
    if (!(cfg.length > 0.0)) throw config_error("grid.L: must be positive");
    if (cfg.n_nodes < 3) throw config_error("grid.n_nodes: need at least 3 interior nodes");
    if (cfg.n_modes < 1 || cfg.n_modes > cfg.n_nodes)
        throw config_error("grid.n_modes: must lie in [1, n_nodes] (aliasing)");
    if (!(cfg.horizon > 0.0)) throw config_error("time.T: must be positive");
    if (cfg.n_steps < 1) throw config_error("time.n_steps: must be positive");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 0.25))
        throw config_error("time.alpha: must lie in (0, 1/4)");
    if (!(cfg.picard_tol > 0.0)) throw config_error("tol.picard: must be positive");
    if (!(cfg.newton_tol > 0.0)) throw config_error("tol.newton: must be positive");
    if (!(cfg.gamma_tol > 0.0)) throw config_error("tol.gamma: must be positive");
    if (cfg.quench_threshold < 0.0)
        throw config_error("tol.quench_threshold: must be nonnegative (0 = auto)");
    if (cfg.picard_radius < 0.0)
        throw config_error("picard.radius: must be nonnegative (0 = auto)");
    if (cfg.max_picard < 1) throw config_error("picard.max_iter: must be positive");
    if (cfg.max_outer < 1) throw config_error("gamma.max_outer: must be positive");

    const Grid1D grid = build_grid(cfg.length, cfg.n_nodes);
    const EigenBasis basis = sine_eigenbasis(grid, cfg.n_modes);
    const InitialData data = make_initial_data(cfg, grid);
    for (int j = 0; j < grid.n_nodes; ++j)
        if (!(data.u0.values[j] > 0.0))
            throw config_error("init.u: pressure must be positive at every node");
    const HyperbolicInit init =
        make_hyperbolic_init(data.v0, data.w0, cfg.phys.theta2);  // checks w0 > 0
    picard_settings(cfg, init, basis);                            // checks the radius cap
    if (resolved_quench_threshold(cfg) >= init.kappa)
        throw config_error("tol.quench_threshold: must stay below the initial gap floor");
}

std::uint64_t config_hash(const SolverConfig& cfg) {
    const std::string text = emit_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace memslab
