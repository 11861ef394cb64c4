#pragma once

#include <cstdint>
#include <string>

#include "memslab/grid.hpp"
#include "memslab/hyperbolic.hpp"

namespace memslab {

/// Full run description. Serialized as flat key=value lines with section
/// prefixes (physics.beta_F=1.0), one key per line, diff- and sweep-friendly.
struct SolverConfig {
    PhysicalConstants phys;

    // named profiles: "equilibrium", "zero", "bump[:amplitude]",
    // "mode:k:amplitude", or "file:path"
    std::string init_u = "equilibrium";
    std::string init_v = "zero";
    std::string init_w = "equilibrium";

    double length = 1.0;
    int n_nodes = 127;
    int n_modes = 64;

    double horizon = 0.01;
    int n_steps = 128;
    double alpha = 0.2;  // time-Holder exponent, in (0, 1/4)

    double picard_tol = 1e-10;
    double newton_tol = 1e-12;
    double gamma_tol = 1e-8;
    double quench_threshold = 0.0;  // 0: defaults to 0.01 * theta2
    double picard_radius = 0.0;     // 0: defaults to 0.9 * kappa / (2C)
    int max_picard = 200;
    int max_outer = 30;

    std::string output_dir;
    std::uint64_t seed = 1;
    int workers = 0;  // 0: library default

    bool operator==(const SolverConfig&) const = default;
};

SolverConfig parse_config(const std::string& text);
SolverConfig load_config(const std::string& path);
std::string emit_config(const SolverConfig& cfg);

/// Initial fields resolved from the named profiles; full nodal values with
/// boundary traces theta1 (u), 0 (v), theta2 (w) built in.
struct InitialData {
    Field u0, v0, w0;
};

InitialData make_initial_data(const SolverConfig& cfg, const Grid1D& grid);

double resolved_quench_threshold(const SolverConfig& cfg);
double resolved_picard_radius(const SolverConfig& cfg, double kappa,
                              double embedding_constant);
PicardSettings picard_settings(const SolverConfig& cfg, const HyperbolicInit& init,
                               const EigenBasis& basis);

/// Field-level validation; throws config_error naming the offending key.
/// Builds the grid, basis and initial data as a side check.
void validate_config(const SolverConfig& cfg);

/// FNV-1a hash of the canonical serialization, for run manifests.
std::uint64_t config_hash(const SolverConfig& cfg);

}  // namespace memslab
