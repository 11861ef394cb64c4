#include "memslab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "memslab/errors.hpp"

namespace memslab {

namespace {

struct WorkState {
    std::vector<double> u, v, w;
};

// second difference with Dirichlet boundary values
inline double lap(const std::vector<double>& f, int i, double left, double right,
                  double h2) {
    const int n = static_cast<int>(f.size());
    const double fl = (i == 0) ? left : f[i - 1];
    const double fr = (i == n - 1) ? right : f[i + 1];
    return (fl - 2.0 * f[i] + fr) / h2;
}

// Thomas algorithm for the tridiagonal system (lower, diag, upper)
void solve_tridiag(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

double stable_step(const Grid1D& grid, const PhysicalConstants& c, const WorkState& s) {
    const double h = grid.spacing;
    double max_diff = c.theta2 * c.theta2 * c.theta2 * c.theta1;  // boundary value
    double max_reac = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        max_diff = std::max(max_diff, s.w[i] * s.w[i] * s.w[i] * s.u[i]);
        max_reac = std::max(max_reac, std::abs(s.v[i]) / s.w[i]);
    }
    double dt = h;  // wave CFL
    dt = std::min(dt, h * h / (2.0 * max_diff));
    if (max_reac > 0.0) dt = std::min(dt, 0.5 / max_reac);
    return 0.9 * dt;
}

// kick-drift update of the wave pair; returns index of first node at or below
// the quench threshold, or -1
int wave_step(const Grid1D& grid, const PhysicalConstants& c, double dt,
              const std::vector<double>& u, std::vector<double>& v,
              std::vector<double>& w, double threshold) {
    const int n = grid.n_nodes;
    const double h2 = grid.spacing * grid.spacing;
    int hit = -1;
    for (int i = 0; i < n; ++i) {
        const double acc = lap(w, i, c.theta2, c.theta2, h2) - c.beta_F / (w[i] * w[i]) +
                           c.beta_p * (u[i] - 1.0);
        v[i] += dt * acc;
    }
    for (int i = 0; i < n; ++i) {
        w[i] += dt * v[i];
        if (hit < 0 && w[i] < threshold) hit = i;
    }
    return hit;
}

// linearized backward Euler for the pressure, coefficient w^3 u frozen at the
// previous step
void pressure_step(const Grid1D& grid, const PhysicalConstants& c, double dt,
                   const std::vector<double>& a_old, const std::vector<double>& v,
                   const std::vector<double>& w, std::vector<double>& u) {
    const int n = grid.n_nodes;
    const double h2 = grid.spacing * grid.spacing;
    const double a_bd = c.theta2 * c.theta2 * c.theta2 * c.theta1;

    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        const double a_left = 0.5 * (a_old[i] + (i == 0 ? a_bd : a_old[i - 1]));
        const double a_right = 0.5 * (a_old[i] + (i == n - 1 ? a_bd : a_old[i + 1]));
        const double inv_w = 1.0 / w[i];
        diag[i] = 1.0 / dt + v[i] * inv_w + inv_w * (a_left + a_right) / h2;
        lower[i] = (i == 0) ? 0.0 : -inv_w * a_left / h2;
        upper[i] = (i == n - 1) ? 0.0 : -inv_w * a_right / h2;
        rhs[i] = u[i] / dt;
        if (i == 0) rhs[i] += inv_w * a_left * c.theta1 / h2;
        if (i == n - 1) rhs[i] += inv_w * a_right * c.theta1 / h2;
    }
    solve_tridiag(lower, diag, upper, rhs);
    u = rhs;

    for (int i = 0; i < n; ++i)
        if (!(u[i] > 0.0))
            throw numeric_error("oracle pressure lost positivity at node " +
                                std::to_string(i));
}

}  // namespace

MolResult mol_solve(const Grid1D& grid, const PhysicalConstants& c, const Field& u0,
                    const Field& v0, const Field& w0, double horizon, int n_steps,
                    double quench_threshold) {
    const int n = grid.n_nodes;
    if (u0.size() != n || v0.size() != n || w0.size() != n)
        throw config_error("oracle initial data does not match the grid");
    for (int i = 0; i < n; ++i)
        if (!(u0.values[i] > 0.0) || !(w0.values[i] > 0.0))
            throw config_error("oracle requires positive initial pressure and gap");

    WorkState s{u0.values, v0.values, w0.values};

    MolResult out;
    out.u.horizon = out.v.horizon = out.w.horizon = horizon;
    out.u.n_steps = out.v.n_steps = out.w.n_steps = n_steps;
    out.u.entries.push_back(Field(s.u));
    out.v.entries.push_back(Field(s.v));
    out.w.entries.push_back(Field(s.w));
    out.dt_internal = horizon;

    const double dt_out = horizon / n_steps;
    std::vector<double> a_old(n);

    for (int step = 0; step < n_steps; ++step) {
        const double bound = stable_step(grid, c, s);
        if (!(bound > 1e-13 * horizon))
            throw numeric_error("oracle step size underflow: problem too stiff");
        const int substeps = std::max(1, static_cast<int>(std::ceil(dt_out / bound)));
        const double dt = dt_out / substeps;
        out.dt_internal = std::min(out.dt_internal, dt);

        for (int sub = 0; sub < substeps; ++sub) {
            const double t_before =
                step * dt_out + sub * dt;
            for (int i = 0; i < n; ++i) a_old[i] = s.w[i] * s.w[i] * s.w[i] * s.u[i];
            std::vector<double> w_before(s.w);
            const int hit = wave_step(grid, c, dt, s.u, s.v, s.w, quench_threshold);
            ++out.steps_taken;
            if (hit >= 0) {
                // interpolate the crossing of the first offending node
                const double w0v = w_before[hit];
                const double w1v = s.w[hit];
                const double frac = (w0v - quench_threshold) / (w0v - w1v);
                QuenchEvent ev;
                ev.time = t_before + frac * dt;
                ev.node_index = hit;
                ev.w_value = w1v;
                out.quench = ev;
                // truncate paths at the last completed output step
                out.u.n_steps = out.v.n_steps = out.w.n_steps = step;
                out.u.horizon = out.v.horizon = out.w.horizon = step * dt_out;
                return out;
            }
            pressure_step(grid, c, dt, a_old, s.v, s.w, s.u);
        }
        out.u.entries.push_back(Field(s.u));
        out.v.entries.push_back(Field(s.v));
        out.w.entries.push_back(Field(s.w));
    }
    return out;
}

std::pair<FieldPath, FieldPath> mol_wave_solve(const Grid1D& grid,
                                               const PhysicalConstants& c,
                                               const FieldPath& u_path, const Field& v0,
                                               const Field& w0) {
    const int n = grid.n_nodes;
    const double dt_out = u_path.dt();
    std::vector<double> v = v0.values;
    std::vector<double> w = w0.values;

    FieldPath v_out, w_out;
    v_out.horizon = w_out.horizon = u_path.horizon;
    v_out.n_steps = w_out.n_steps = u_path.n_steps;
    v_out.entries.push_back(Field(v));
    w_out.entries.push_back(Field(w));

    std::vector<double> u_mid(n);
    for (int step = 0; step < u_path.n_steps; ++step) {
        const double bound = 0.9 * grid.spacing;
        const int substeps = std::max(1, static_cast<int>(std::ceil(dt_out / bound)));
        const double dt = dt_out / substeps;
        const auto& u0v = u_path.entries[step].values;
        const auto& u1v = u_path.entries[step + 1].values;
        for (int sub = 0; sub < substeps; ++sub) {
            const double frac = (sub + 0.5) / substeps;
            for (int i = 0; i < n; ++i) u_mid[i] = (1.0 - frac) * u0v[i] + frac * u1v[i];
            const int hit = wave_step(grid, c, dt, u_mid, v, w, 0.0);
            if (hit >= 0)
                throw quench_imminent_error("gap collapsed in the wave oracle", hit,
                                            step * dt_out + sub * dt, w[hit]);
        }
        v_out.entries.push_back(Field(v));
        w_out.entries.push_back(Field(w));
    }
    return {std::move(v_out), std::move(w_out)};
}

std::optional<QuenchEvent> quench_scan(const FieldPath& w_path, double threshold) {
    for (int j = 1; j < w_path.size(); ++j) {
        const auto& now = w_path.entries[j].values;
        const auto& before = w_path.entries[j - 1].values;
        for (std::size_t i = 0; i < now.size(); ++i) {
            if (now[i] < threshold && before[i] >= threshold) {
                const double frac = (before[i] - threshold) / (before[i] - now[i]);
                QuenchEvent ev;
                ev.time = w_path.time(j - 1) + frac * w_path.dt();
                ev.node_index = static_cast<int>(i);
                ev.w_value = now[i];
                return ev;
            }
        }
    }
    return std::nullopt;
}

std::vector<double> flux_balance_residual(const FieldPath& u_path, const FieldPath& w_path,
                                          const PhysicalConstants& c, const Grid1D& grid) {
    if (u_path.size() != w_path.size())
        throw config_error("flux balance needs aligned pressure and gap paths");
    if (u_path.n_steps < 2) throw config_error("flux balance needs at least two steps");
    const int n = grid.n_nodes;
    const int steps = u_path.n_steps;
    const double h = grid.spacing;
    const double dt = u_path.dt();

    // mass int w u dx (trapezoid, boundary values theta1 theta2)
    std::vector<double> mass(steps + 1), flux(steps + 1);
    const double a_bd = c.theta2 * c.theta2 * c.theta2 * c.theta1;
    for (int j = 0; j <= steps; ++j) {
        const auto& u = u_path.entries[j].values;
        const auto& w = w_path.entries[j].values;
        double acc = c.theta1 * c.theta2;  // both boundary products, each weight 1/2
        for (int i = 0; i < n; ++i) acc += u[i] * w[i];
        mass[j] = acc * h;

        const double ux_left = (-3.0 * c.theta1 + 4.0 * u[0] - u[1]) / (2.0 * h);
        const double ux_right = (3.0 * c.theta1 - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
        flux[j] = a_bd * (ux_right - ux_left);
    }

    std::vector<double> residual(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        double dm;
        if (j == 0)
            dm = (-3.0 * mass[0] + 4.0 * mass[1] - mass[2]) / (2.0 * dt);
        else if (j == steps)
            dm = (3.0 * mass[steps] - 4.0 * mass[steps - 1] + mass[steps - 2]) / (2.0 * dt);
        else
            dm = (mass[j + 1] - mass[j - 1]) / (2.0 * dt);
        residual[j] = std::abs(dm - flux[j]);
    }
    return residual;
}

}  // namespace memslab
