#include "memslab/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "memslab/errors.hpp"

namespace memslab {

namespace {

// residual r_i = (w_{i-1} - 2 w_i + w_{i+1})/h^2 - beta / w_i^2, boundary 1
std::vector<double> residual_of(double beta, const Grid1D& grid,
                                const std::vector<double>& w) {
    const int n = grid.n_nodes;
    const double h2 = grid.spacing * grid.spacing;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        const double wl = (i == 0) ? 1.0 : w[i - 1];
        const double wr = (i == n - 1) ? 1.0 : w[i + 1];
        r[i] = (wl - 2.0 * w[i] + wr) / h2 - beta / (w[i] * w[i]);
    }
    return r;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Newton step: (D2 + 2 beta / w^3) delta = -r, tridiagonal
void newton_direction(double beta, const Grid1D& grid, const std::vector<double>& w,
                      const std::vector<double>& r, std::vector<double>& delta) {
    const int n = grid.n_nodes;
    const double h2 = grid.spacing * grid.spacing;
    std::vector<double> diag(n), lower(n), upper(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = -2.0 / h2 + 2.0 * beta / (w[i] * w[i] * w[i]);
        lower[i] = (i == 0) ? 0.0 : 1.0 / h2;
        upper[i] = (i == n - 1) ? 0.0 : 1.0 / h2;
        rhs[i] = -r[i];
    }
    for (int i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    delta.resize(n);
    delta[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) delta[i] = (rhs[i] - upper[i] * delta[i + 1]) / diag[i];
}

}  // namespace

SteadyResult steady_newton(double beta_F, const Grid1D& grid, const Field& start,
                           double tol, int max_newton) {
    SteadyResult out;
    std::vector<double> w = start.values;
    std::vector<double> r = residual_of(beta_F, grid, w);
    double rnorm = inf_norm(r);
    // the centered second difference cannot be evaluated below ~eps/h^2
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() /
                         (grid.spacing * grid.spacing);
    const double target = tol * (1.0 + beta_F) + floor;

    std::vector<double> delta, trial;
    for (int iter = 0; iter < max_newton; ++iter) {
        if (rnorm <= target) {
            out.outcome = SteadyResult::Outcome::Converged;
            out.w = Field(w);
            out.newton_iters = iter;
            out.residual = rnorm;
            out.min_w = *std::min_element(w.begin(), w.end());
            return out;
        }
        newton_direction(beta_F, grid, w, r, delta);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-8) {
            trial = w;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += lambda * delta[i];
            const double min_trial = *std::min_element(trial.begin(), trial.end());
            if (min_trial > 0.0) {
                const std::vector<double> r_trial = residual_of(beta_F, grid, trial);
                const double rn = inf_norm(r_trial);
                if (rn < rnorm * (1.0 - 0.25 * lambda) || rn <= target) {
                    w = trial;
                    r = r_trial;
                    rnorm = rn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) break;  // all damping retreats failed
    }
    if (rnorm <= target) {
        out.outcome = SteadyResult::Outcome::Converged;
        out.w = Field(w);
        out.residual = rnorm;
        out.min_w = *std::min_element(w.begin(), w.end());
        out.newton_iters = max_newton;
        return out;
    }
    out.outcome = SteadyResult::Outcome::NoSolution;
    out.residual = rnorm;
    out.min_w = *std::min_element(w.begin(), w.end());
    out.newton_iters = max_newton;
    return out;
}

SteadyResult steady_membrane(double beta_F, const Grid1D& grid, double tol, int max_newton) {
    if (beta_F < 0.0) throw config_error("beta_F must be nonnegative");
    const Field flat(grid.n_nodes, 1.0);
    if (beta_F == 0.0) {
        SteadyResult out;
        out.outcome = SteadyResult::Outcome::Converged;
        out.w = flat;
        out.residual = 0.0;
        out.min_w = 1.0;
        return out;
    }

    SteadyResult direct = steady_newton(beta_F, grid, flat, tol, max_newton);
    if (direct.converged()) return direct;

    // continuation from below with step halving near the fold
    double beta_cur = 0.0;
    Field w_cur = flat;
    double step = beta_F / 8.0;
    int iters = direct.newton_iters;
    while (beta_cur < beta_F) {
        if (step < 1e-6) {
            SteadyResult out;
            out.outcome = SteadyResult::Outcome::NoSolution;
            out.newton_iters = iters;
            out.last_solvable = beta_cur;
            out.min_w = *std::min_element(w_cur.values.begin(), w_cur.values.end());
            out.residual = direct.residual;
            return out;
        }
        const double beta_try = std::min(beta_F, beta_cur + step);
        SteadyResult res = steady_newton(beta_try, grid, w_cur, tol, max_newton);
        iters += res.newton_iters;
        if (res.converged()) {
            beta_cur = beta_try;
            w_cur = res.w;
            if (beta_cur >= beta_F) {
                res.newton_iters = iters;
                return res;
            }
            step *= 1.4;
        } else {
            step *= 0.5;
        }
    }
    SteadyResult res = steady_newton(beta_F, grid, w_cur, tol, max_newton);
    res.newton_iters = iters + res.newton_iters;
    return res;
}

PullinResult pullin_threshold(const Grid1D& grid, double bracket_tol, double tol) {
    if (!(bracket_tol > 0.0)) throw config_error("bracket tolerance must be positive");
    const double pi = std::numbers::pi;
    const double mu0 = (pi / grid.length) * (pi / grid.length);
    PullinResult out;
    out.lo = 0.0;
    out.hi = 4.0 * mu0 / 27.0;

    Field w_lo(grid.n_nodes, 1.0);
    bool seen_failure = false;
    while (out.hi - out.lo > bracket_tol) {
        const double mid = 0.5 * (out.lo + out.hi);
        // help Newton across the interval with four continuation substeps
        Field w_try = w_lo;
        bool ok = true;
        for (int sub = 1; sub <= 4 && ok; ++sub) {
            const double beta = out.lo + (mid - out.lo) * sub / 4.0;
            SteadyResult res = steady_newton(beta, grid, w_try, tol, 60);
            if (res.converged())
                w_try = res.w;
            else
                ok = false;
        }
        if (ok) {
            if (seen_failure && mid > out.hi) out.monotone = false;
            out.lo = mid;
            w_lo = w_try;
        } else {
            seen_failure = true;
            out.hi = mid;
        }
    }
    out.beta_star = 0.5 * (out.lo + out.hi);
    return out;
}

std::vector<SweepRow> steady_sweep(const Grid1D& grid, double lo, double hi, int count,
                                   double tol) {
    if (count < 1 || hi < lo) throw config_error("malformed sweep range");
    std::vector<SweepRow> rows(count);
    const Field flat(grid.n_nodes, 1.0);

    // independent loads solve in parallel from the flat start; loads near the
    // fold get a sequential continuation retry afterwards
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        const double beta = (count == 1) ? lo : lo + (hi - lo) * i / (count - 1);
        const SteadyResult res = steady_newton(beta, grid, flat, tol, 60);
        rows[i].beta_F = beta;
        rows[i].solvable = res.converged();
        rows[i].w_min = res.converged() ? res.min_w : 0.0;
    }
    for (int i = 0; i < count; ++i) {
        if (rows[i].solvable) continue;
        const SteadyResult res = steady_membrane(rows[i].beta_F, grid, tol, 60);
        rows[i].solvable = res.converged();
        rows[i].w_min = res.converged() ? res.min_w : 0.0;
    }
    return rows;
}

}  // namespace memslab
