#include "memslab/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memslab/errors.hpp"

namespace memslab {

namespace {

double path_distance(const EigenBasis& basis, const WavePath& a, const WavePath& b) {
    double sup = 0.0;
    const int n = basis.grid.n_nodes;
    std::vector<double> dv(n), dw(n);
    for (int j = 0; j < a.size(); ++j) {
        for (int i = 0; i < n; ++i) {
            dv[i] = a.entries[j].v.values[i] - b.entries[j].v.values[i];
            dw[i] = a.entries[j].w_tilde.values[i] - b.entries[j].w_tilde.values[i];
        }
        sup = std::max(sup, state_norm(basis, WaveState(Field(dv), Field(dw))));
    }
    return sup;
}

// first index/time at which the gap drops below kappa/2, or -1 if none
struct GapCheck {
    int node = -1;
    int step = -1;
    double gap = 0.0;
};

GapCheck find_gap_violation(const WavePath& path, double theta2, double floor) {
    for (int j = 0; j < path.size(); ++j) {
        const auto& w = path.entries[j].w_tilde.values;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double gap = w[i] + theta2;
            if (gap < floor) return {static_cast<int>(i), j, gap};
        }
    }
    return {};
}

double min_gap_of(const WavePath& path, double theta2) {
    double gap = theta2;  // boundary trace
    for (const auto& s : path.entries)
        for (double w : s.w_tilde.values) gap = std::min(gap, w + theta2);
    return gap;
}

}  // namespace

void validate(const PhysicalConstants& c) {
    if (!(c.beta_F > 0.0) || !(c.beta_p > 0.0) || !(c.theta1 > 0.0) || !(c.theta2 > 0.0))
        throw config_error("physical constants beta_F, beta_p, theta1, theta2 must be positive");
}

HyperbolicInit make_hyperbolic_init(Field v0, Field w0, double theta2) {
    HyperbolicInit init;
    double kappa = theta2;
    for (std::size_t i = 0; i < w0.values.size(); ++i) {
        if (!(w0.values[i] > 0.0))
            throw config_error("initial gap must be positive at every node (node " +
                               std::to_string(i) + ")");
        kappa = std::min(kappa, w0.values[i]);
    }
    if (!(kappa > 0.0)) throw config_error("initial gap floor must be positive");
    init.v0 = std::move(v0);
    init.w0 = std::move(w0);
    init.kappa = kappa;
    return init;
}

void validate(const PicardSettings& s, const HyperbolicInit& init, const EigenBasis& basis) {
    if (!(s.radius > 0.0)) throw config_error("picard radius must be positive");
    const double cap = init.kappa / (2.0 * basis.embedding_constant);
    if (!(s.radius < cap))
        throw config_error("picard radius " + std::to_string(s.radius) +
                           " must stay below kappa/(2C) = " + std::to_string(cap));
    if (!(s.tol > 0.0) || s.max_iter < 1) throw config_error("invalid picard tolerance");
}

Field g_reaction(const Field& w_tilde, const PhysicalConstants& c) {
    Field out(w_tilde.size());
    const double offset = c.beta_p * (c.theta1 - 1.0);
    for (int i = 0; i < w_tilde.size(); ++i) {
        const double gap = w_tilde.values[i] + c.theta2;
        if (!(gap > 0.0))
            throw quench_imminent_error("gap is nonpositive while evaluating the reaction term",
                                        i, 0.0, gap);
        out.values[i] = -c.beta_F / (gap * gap) + offset;
    }
    return out;
}

double estimate_L_G(const HyperbolicInit& init, const PhysicalConstants& c,
                    const EigenBasis& basis) {
    const double C = basis.embedding_constant;
    const double kappa = init.kappa;
    const double w0_h1 = nodal_h1(basis.grid, init.w0.values, c.theta2, c.theta2);
    const double ctilde = kappa / (2.0 * C) + w0_h1;
    const double c1_sq = 4.0 * C / (kappa * kappa) +
                         16.0 * ctilde * ctilde / (kappa * kappa * kappa * kappa);
    const double c1 = std::sqrt(c1_sq);
    const double c2 = 2.0 * c1 * c1 * c1;
    return c.beta_F * c2;
}

double strong_continuity_time(const HyperbolicInit& init, const PhysicalConstants& c,
                              const PicardSettings& s, const EigenBasis& basis,
                              double t_max) {
    const int n = init.w0.size();
    Field w_dev(n);
    for (int i = 0; i < n; ++i) w_dev.values[i] = init.w0.values[i] - c.theta2;
    const WaveState phi0(init.v0, w_dev);
    const double target = s.radius / 2.0;

    double t = t_max;
    for (int halving = 0; halving < 80; ++halving) {
        bool ok = true;
        for (int sample = 1; sample <= 8 && ok; ++sample) {
            const WaveState moved = apply_semigroup(t * sample / 8.0, phi0, basis);
            Field dv(n), dw(n);
            for (int i = 0; i < n; ++i) {
                dv.values[i] = moved.v.values[i] - phi0.v.values[i];
                dw.values[i] = moved.w_tilde.values[i] - phi0.w_tilde.values[i];
            }
            if (state_norm(basis, WaveState(dv, dw)) > target) ok = false;
        }
        if (ok) return t;
        t /= 2.0;
    }
    throw numeric_error("no strong-continuity time found above 2^-80 t_max");
}

HorizonT0 horizon_T0(const PhysicalConstants& c, const HyperbolicInit& init,
                     const PicardSettings& s, double M0, double L_G, double delta_o,
                     const Field& u_tilde0, const EigenBasis& basis) {
    HorizonT0 out;
    Field w_dev(init.w0.size());
    for (int i = 0; i < init.w0.size(); ++i) w_dev.values[i] = init.w0.values[i] - c.theta2;

    Field g0 = g_reaction(w_dev, c);
    for (int i = 0; i < g0.size(); ++i) g0.values[i] += c.beta_p * u_tilde0.values[i];
    const double g_boundary = -c.beta_F / (c.theta2 * c.theta2) + c.beta_p * (c.theta1 - 1.0);
    out.g0_h1 = nodal_h1(basis.grid, g0.values, g_boundary, g_boundary);

    const double C = basis.embedding_constant;
    out.terms[0] = delta_o;
    out.terms[1] = 1.0 / (2.0 * M0 * L_G);
    out.terms[2] = init.kappa /
                   (2.0 * M0 * ((L_G + 1.0) * init.kappa + 2.0 * C * out.g0_h1));
    out.value = out.terms[0];
    out.active_term = 0;
    for (int i = 1; i < 3; ++i) {
        if (out.terms[i] < out.value) {
            out.value = out.terms[i];
            out.active_term = i;
        }
    }
    (void)s;
    return out;
}

WaveSolve solve_wave_picard(const FieldPath& u_path, const HyperbolicInit& init,
                            const PhysicalConstants& c, const PicardSettings& s,
                            const EigenBasis& basis) {
    const int n = basis.grid.n_nodes;
    const int steps = u_path.n_steps;
    if (init.v0.size() != n || init.w0.size() != n)
        throw config_error("initial data does not match the basis grid");
    if (steps < 1 || u_path.size() != steps + 1)
        throw config_error("pressure path needs n_steps >= 1 and n_steps+1 entries");

    Field w_dev(n);
    for (int i = 0; i < n; ++i) w_dev.values[i] = init.w0.values[i] - c.theta2;
    const WaveState phi0(init.v0, w_dev);

    // pressure deviation path
    std::vector<Field> u_tilde(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        u_tilde[j] = Field(n);
        for (int i = 0; i < n; ++i)
            u_tilde[j].values[i] = u_path.entries[j].values[i] - c.theta1;
    }

    const double floor = init.kappa / 2.0;
    auto guard = [&](const WavePath& path) {
        const GapCheck bad = find_gap_violation(path, c.theta2, floor);
        if (bad.node >= 0)
            throw horizon_error(
                "horizon too large: gap fell below kappa/2 during Picard iteration",
                bad.node, path.time(bad.step), bad.gap);
    };

    // start from the homogeneous group orbit of the initial state
    WavePath current;
    current.horizon = u_path.horizon;
    current.n_steps = steps;
    current.entries.reserve(steps + 1);
    for (int j = 0; j <= steps; ++j)
        current.entries.push_back(apply_semigroup(u_path.time(j), phi0, basis));
    guard(current);

    WaveSolve out;
    double prev_dist = -1.0;
    for (int iter = 1; iter <= s.max_iter; ++iter) {
        FieldPath forcing;
        forcing.horizon = u_path.horizon;
        forcing.n_steps = steps;
        forcing.entries.reserve(steps + 1);
        for (int j = 0; j <= steps; ++j) {
            Field g = g_reaction(current.entries[j].w_tilde, c);
            for (int i = 0; i < n; ++i) g.values[i] += c.beta_p * u_tilde[j].values[i];
            forcing.entries.push_back(std::move(g));
        }
        WavePath next = duhamel(phi0, forcing, basis);
        guard(next);

        const double dist = path_distance(basis, next, current);
        if (prev_dist > 0.0) {
            out.ratio_history.push_back(dist / prev_dist);
            out.final_ratio = out.ratio_history.back();
        }
        prev_dist = dist;
        current = std::move(next);
        out.iterations = iter;
        if (dist < s.tol) {
            out.path = std::move(current);
            out.min_gap = min_gap_of(out.path, c.theta2);
            return out;
        }
    }
    throw iteration_error("wave Picard iteration did not converge within max_iter",
                          out.ratio_history);
}

FrechetSolve frechet_W(const FieldPath& u_path, const FieldPath& q_path,
                       const WaveSolve& solved, const PhysicalConstants& c,
                       const PicardSettings& s, const EigenBasis& basis) {
    const int n = basis.grid.n_nodes;
    const int steps = u_path.n_steps;
    if (q_path.n_steps != steps || solved.path.n_steps != steps)
        throw config_error("frechet_W requires aligned time grids");

    // inverse cubed gap along the solved trajectory
    std::vector<std::vector<double>> inv_w3(steps + 1, std::vector<double>(n));
    for (int j = 0; j <= steps; ++j) {
        for (int i = 0; i < n; ++i) {
            const double w = solved.path.entries[j].w_tilde.values[i] + c.theta2;
            inv_w3[j][i] = 1.0 / (w * w * w);
        }
    }

    const WaveState zero(n);
    WavePath current;
    current.horizon = u_path.horizon;
    current.n_steps = steps;
    current.entries.assign(steps + 1, zero);

    FrechetSolve out;
    double prev_dist = -1.0;
    for (int iter = 1; iter <= s.max_iter; ++iter) {
        FieldPath forcing;
        forcing.horizon = u_path.horizon;
        forcing.n_steps = steps;
        forcing.entries.reserve(steps + 1);
        for (int j = 0; j <= steps; ++j) {
            Field f(n);
            for (int i = 0; i < n; ++i)
                f.values[i] = c.beta_p * q_path.entries[j].values[i] +
                              2.0 * c.beta_F * current.entries[j].w_tilde.values[i] *
                                  inv_w3[j][i];
            forcing.entries.push_back(std::move(f));
        }
        WavePath next = duhamel(zero, forcing, basis);

        const double dist = path_distance(basis, next, current);
        if (prev_dist > 0.0) out.final_ratio = dist / prev_dist;
        prev_dist = dist;
        current = std::move(next);
        out.iterations = iter;
        if (dist < s.tol) {
            out.v_dot.horizon = out.w_dot.horizon = u_path.horizon;
            out.v_dot.n_steps = out.w_dot.n_steps = steps;
            for (auto& state : current.entries) {
                out.v_dot.entries.push_back(std::move(state.v));
                out.w_dot.entries.push_back(std::move(state.w_tilde));
            }
            return out;
        }
    }
    throw iteration_error("Volterra Picard iteration for the derivative did not converge",
                          {});
}

}  // namespace memslab
