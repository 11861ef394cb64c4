#pragma once

#include <vector>

#include "memslab/grid.hpp"

// Stationary membrane model: w'' = beta_F / w^2 on the interior with w = 1 at
// both ends. Tracks the maximal (upper) solution branch by damped Newton with
// continuation from below; above the pull-in load no steady shape exists.

namespace memslab {

struct SteadyResult {
    enum class Outcome { Converged, NoSolution };
    Outcome outcome = Outcome::NoSolution;
    Field w;
    int newton_iters = 0;
    double residual = 0.0;
    double min_w = 0.0;
    double last_solvable = 0.0;  // continuation bookmark when NoSolution

    bool converged() const { return outcome == Outcome::Converged; }
};

/// Damped Newton from a supplied starting shape; no continuation.
SteadyResult steady_newton(double beta_F, const Grid1D& grid, const Field& start,
                           double tol, int max_newton);

/// Steady shape at one load. Tries Newton from the flat state first, then
/// continuation from beta_F = 0 with step halving; NoSolution only after the
/// continuation step collapses below 1e-6.
SteadyResult steady_membrane(double beta_F, const Grid1D& grid, double tol = 1e-12,
                             int max_newton = 60);

struct PullinResult {
    double beta_star = 0.0;
    double lo = 0.0;  // largest load solved
    double hi = 0.0;  // smallest load that failed
    bool monotone = true;  // false if solvability flipped during refinement
};

/// Pull-in load by bisection between 0 and 4 mu0 / 27 (mu0 the principal
/// Dirichlet eigenvalue), using continuation from the last solvable shape as
/// the solvability predicate. Final bracket width <= bracket_tol.
PullinResult pullin_threshold(const Grid1D& grid, double bracket_tol = 1e-4,
                              double tol = 1e-12);

struct SweepRow {
    double beta_F = 0.0;
    double w_min = 0.0;
    bool solvable = false;
};

std::vector<SweepRow> steady_sweep(const Grid1D& grid, double lo, double hi, int count,
                                   double tol = 1e-12);

}  // namespace memslab
