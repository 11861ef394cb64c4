#pragma once

#include <optional>
#include <vector>

#include "memslab/grid.hpp"
#include "memslab/hyperbolic.hpp"

// Independent reference solver for the first-order coupled system
//   u_t = (1/w) d/dx (w^3 u u_x) - (v/w) u,
//   v_t = w_xx - beta_F / w^2 + beta_p (u - 1),
//   w_t = v,
// built from a deliberately different discretization family than the spectral
// solvers: second-order centered finite differences in space, linearized
// backward Euler for the pressure, kick-drift (leapfrog-style) updates for
// the wave pair.

namespace memslab {

/// Gap touchdown record: first time/node where w crossed the threshold.
struct QuenchEvent {
    double time = 0.0;
    int node_index = -1;
    double w_value = 0.0;
};

struct MolResult {
    FieldPath u, v, w;  // full nodal values; u has trace theta1, w theta2
    std::optional<QuenchEvent> quench;
    double dt_internal = 0.0;  // finest internal step used
    long steps_taken = 0;
};

/// Coupled method-of-lines solve. Internal step size obeys dt <= h (CFL for
/// the unit-speed wave), dt <= h^2 / (2 max w^3 u) (frozen-coefficient
/// diffusion) and dt <= 1/(2 max |v/w|) (reaction sign safety), subdivided so
/// output times are hit exactly. Integration stops early when min w drops
/// below quench_threshold; the returned paths then cover the completed output
/// steps and `quench` carries the interpolated crossing.
MolResult mol_solve(const Grid1D& grid, const PhysicalConstants& c, const Field& u0,
                    const Field& v0, const Field& w0, double horizon, int n_steps,
                    double quench_threshold);

/// Wave subsystem only, with the pressure path prescribed (linearly
/// interpolated between its samples). Returns (v, w) on the pressure path's
/// time grid.
std::pair<FieldPath, FieldPath> mol_wave_solve(const Grid1D& grid,
                                               const PhysicalConstants& c,
                                               const FieldPath& u_path, const Field& v0,
                                               const Field& w0);

/// First crossing of w below `threshold`, linearly interpolated in time.
std::optional<QuenchEvent> quench_scan(const FieldPath& w_path, double threshold);

/// Conservation-form diagnostic: per output step,
///   | d/dt int w u dx  -  [w^3 u u_x] at the boundary |,
/// with centered differences in t and one-sided second-order boundary
/// stencils for u_x.
std::vector<double> flux_balance_residual(const FieldPath& u_path, const FieldPath& w_path,
                                          const PhysicalConstants& c, const Grid1D& grid);

}  // namespace memslab
