#include "memslab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "memslab/errors.hpp"
#include "memslab/kernels.hpp"
#include "memslab/random_fields.hpp"

namespace memslab {

struct SemigroupCache {
    bool usable = false;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXcd values;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    Eigen::MatrixXd matrix;
    double max_gain = 0.0;
};

namespace {

using cd = std::complex<double>;

// (e^z - 1)/z and (e^z - 1 - z)/z^2 with series branches near 0
cd phi1(cd z) {
    if (std::abs(z) < 1e-2)
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))));
    return (std::exp(z) - 1.0) / z;
}

cd phi2(cd z) {
    if (std::abs(z) < 1e-2)
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z * (1.0 / 720.0 + z / 5040.0))));
    return (std::exp(z) - 1.0 - z) / (z * z);
}

SemigroupCache& ensure_cache(const LinearOperator1D& op) {
    if (op.cache) return *op.cache;
    auto cache = std::make_shared<SemigroupCache>();
    const int n = op.size();
    cache->matrix = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>(op.dense.data(), n, n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(cache->matrix);
    if (solver.info() == Eigen::Success) {
        cache->vectors = solver.eigenvectors();
        cache->values = solver.eigenvalues();
        cache->lu = Eigen::PartialPivLU<Eigen::MatrixXcd>(cache->vectors);
        const double norm_v = cache->vectors.cwiseAbs().sum();
        const double norm_vi = cache->lu.inverse().cwiseAbs().sum();
        const double cond = norm_v * norm_vi / n;
        cache->usable = std::isfinite(cond) && cond < 1e12;
    }
    op.cache = std::move(cache);
    return *op.cache;
}

double l2_zero(const Grid1D& grid, const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc * grid.spacing);
}

double h2_norm_full(const SpectralOps& ops, const std::vector<double>& values) {
    const auto coeffs = ops.modes(values);
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double lam = ops.lambda[k];
        acc += (1.0 + lam + lam * lam) * coeffs[k] * coeffs[k];
    }
    return std::sqrt(acc * ops.grid.length / 2.0);
}

// H2 norm of shift + deviation: the constant only enters the L2 part
double h2_norm_shifted(const SpectralOps& ops, const std::vector<double>& deviation,
                       double shift) {
    std::vector<double> full(deviation.size());
    for (std::size_t i = 0; i < full.size(); ++i) full[i] = deviation[i] + shift;
    const double l2 = nodal_l2(ops.grid, full, shift, shift);
    const auto coeffs = ops.modes(deviation);
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double lam = ops.lambda[k];
        acc += (lam + lam * lam) * coeffs[k] * coeffs[k];
    }
    return std::sqrt(l2 * l2 + acc * ops.grid.length / 2.0);
}

std::vector<double> diff_values(const Field& a, const Field& b) {
    std::vector<double> d(a.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
    return d;
}

double path_sup_h2(const SpectralOps& ops, const FieldPath& a, const FieldPath& b) {
    double sup = 0.0;
    for (int j = 0; j < a.size(); ++j)
        sup = std::max(sup, h2_norm_full(ops, diff_values(a.entries[j], b.entries[j])));
    return sup;
}

// sup_t N(x(t)) + sup over dyadic lags of N(x(t+h)-x(t)) / h^alpha
double path_calpha_norm(const FieldPath& path, double alpha,
                        const std::function<double(const std::vector<double>&)>& norm) {
    double sup = 0.0;
    for (const auto& f : path.entries) sup = std::max(sup, norm(f.values));
    double seminorm = 0.0;
    for (int lag = 1; lag <= path.n_steps; lag *= 2) {
        const double h = lag * path.dt();
        for (int j = 0; j + lag <= path.n_steps; ++j) {
            const double inc = norm(diff_values(path.entries[j + lag], path.entries[j]));
            seminorm = std::max(seminorm, inc / std::pow(h, alpha));
        }
    }
    return sup + seminorm;
}

}  // namespace

std::vector<double> LinearOperator1D::apply(const std::vector<double>& x) const {
    std::vector<double> y(x.size());
    kernels::dense_matvec(dense.data(), size(), x.data(), y.data());
    return y;
}

Field LinearOperator1D::apply(const Field& f) const { return Field(apply(f.values)); }

double LinearOperator1D::principal_form(const std::vector<double>& q) const {
    const int n = size();
    const double h = grid.spacing;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double qm = (j == 0) ? 0.0 : q[j - 1];
        const double qp = (j == n - 1) ? 0.0 : q[j + 1];
        const double div = a_half[j + 1] * (qp - q[j]) - a_half[j] * (q[j] - qm);
        acc += q[j] * inv_w[j] * div;
    }
    return acc / h;
}

LinearOperator1D assemble_linearization(const Field& u0, const Field& v0, const Field& w0,
                                        const PhysicalConstants& c, const Grid1D& grid) {
    const int n = grid.n_nodes;
    if (u0.size() != n || v0.size() != n || w0.size() != n)
        throw config_error("linearization data does not match the grid");
    for (int j = 0; j < n; ++j)
        if (!(w0.values[j] > 0.0) || !(u0.values[j] > 0.0))
            throw config_error("linearization needs positive u0 and w0");

    const SpectralOps ops = make_spectral_ops(grid);
    std::vector<double> u_tilde(n);
    for (int j = 0; j < n; ++j) u_tilde[j] = u0.values[j] - c.theta1;
    const std::vector<double> du = ops.deriv1(u_tilde);

    LinearOperator1D op;
    op.grid = grid;
    op.description = "Dirichlet linearization of the lubrication operator at t=0";
    op.dense.assign(static_cast<std::size_t>(n) * n, 0.0);
    op.a_half.resize(n + 1);
    op.inv_w.resize(n);
    op.b_nodes.resize(n);
    op.v_over_w.resize(n);

    const double a_bd = c.theta2 * c.theta2 * c.theta2 * c.theta1;
    std::vector<double> a(n);
    for (int j = 0; j < n; ++j) {
        const double w = w0.values[j];
        a[j] = w * w * w * u0.values[j];
        op.inv_w[j] = 1.0 / w;
        op.b_nodes[j] = w * w * w * du[j];
        op.v_over_w[j] = v0.values[j] / w;
    }
    op.a_half[0] = 0.5 * (a_bd + a[0]);
    for (int j = 1; j < n; ++j) op.a_half[j] = 0.5 * (a[j - 1] + a[j]);
    op.a_half[n] = 0.5 * (a[n - 1] + a_bd);

    const double h = grid.spacing;
    const double h2 = h * h;
    for (int j = 0; j < n; ++j) {
        double* row = op.dense.data() + static_cast<std::size_t>(j) * n;
        const double iw = op.inv_w[j];
        if (j > 0) row[j - 1] = iw * (op.a_half[j] / h2 - op.b_nodes[j - 1] / (2.0 * h));
        row[j] = -iw * (op.a_half[j] + op.a_half[j + 1]) / h2 - op.v_over_w[j];
        if (j < n - 1)
            row[j + 1] = iw * (op.a_half[j + 1] / h2 + op.b_nodes[j + 1] / (2.0 * h));
    }
    return op;
}

GardingReport garding_constants(const LinearOperator1D& op, const Field& u0,
                                const Field& w0, const PhysicalConstants& c,
                                const EigenBasis& basis, std::uint64_t seed,
                                int n_probes) {
    const Grid1D& grid = op.grid;
    const int n = grid.n_nodes;
    GardingReport report;
    report.epsilon1 = c.theta1;
    report.kappa = c.theta2;
    for (int j = 0; j < n; ++j) {
        report.epsilon1 = std::min(report.epsilon1, u0.values[j]);
        report.kappa = std::min(report.kappa, w0.values[j]);
    }

    const SpectralOps ops = make_spectral_ops(grid);
    std::vector<double> w_tilde(n);
    for (int j = 0; j < n; ++j) w_tilde[j] = w0.values[j] - c.theta2;
    double dw_left = 0.0, dw_right = 0.0;
    const std::vector<double> dw = ops.deriv1(w_tilde, &dw_left, &dw_right);
    report.k2_tight = std::max(std::abs(c.theta1 * c.theta2 * dw_left),
                               std::abs(c.theta1 * c.theta2 * dw_right));
    for (int j = 0; j < n; ++j)
        report.k2_tight =
            std::max(report.k2_tight, std::abs(u0.values[j] * w0.values[j] * dw[j]));

    const double u0_h1 = nodal_h1(grid, u0.values, c.theta1, c.theta1);
    const double w0_h2 = h2_norm_shifted(ops, w_tilde, c.theta2);
    report.k2_majorant = basis.embedding_constant * u0_h1 * w0_h2 * w0_h2;

    const double lead = report.epsilon1 * report.kappa * report.kappa;
    if (report.k2_tight <= 1e-12 * lead) {
        report.K = lead;
        report.K_o = 0.0;
    } else {
        const double eps_sq = lead / (2.0 * report.k2_tight);
        report.K = lead - eps_sq * report.k2_tight;  // = lead/2
        report.K_o = report.k2_tight / (4.0 * eps_sq);
    }

    std::mt19937_64 rng(seed);
    const int band = std::max(1, basis.n_modes / 4);
    report.min_form_ratio = std::numeric_limits<double>::infinity();
    report.probes = n_probes;
    for (int p = 0; p < n_probes; ++p) {
        const Field q = random_band_limited(rng, basis, band, 1.0);
        const double form = std::abs(op.principal_form(q.values));
        const double grad_sq = dirichlet_energy(grid, q.values, 0.0, 0.0);
        const double l2v = l2_zero(grid, q.values);
        const double mass_sq = l2v * l2v;
        const double bound = report.K * grad_sq - report.K_o * mass_sq;
        const double scale = report.K * grad_sq + report.K_o * mass_sq + 1e-300;
        if (form < bound - 1e-8 * scale) ++report.violations;
        report.min_form_ratio =
            std::min(report.min_form_ratio, (form + report.K_o * mass_sq) / grad_sq);
    }
    return report;
}

Field analytic_step(const LinearOperator1D& op, double t, const Field& f) {
    const int n = op.size();
    if (f.size() != n) throw config_error("analytic_step: field does not match operator");
    if (t == 0.0) return Field(std::vector<double>(f.values));

    SemigroupCache& cache = ensure_cache(op);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(f.values.data(), n);
    Eigen::VectorXd y;
    if (cache.usable) {
        Eigen::VectorXcd xh = cache.lu.solve(x.cast<cd>());
        for (int k = 0; k < n; ++k) xh[k] *= std::exp(cache.values[k] * t);
        y = (cache.vectors * xh).real();
    } else {
        const Eigen::MatrixXd e = (t * cache.matrix).exp();
        if (!e.allFinite()) throw numeric_error("matrix exponential overflowed");
        y = e * x;
    }
    const double fn = x.norm();
    if (fn > 0.0) cache.max_gain = std::max(cache.max_gain, y.norm() / fn);
    Field out(n);
    Eigen::Map<Eigen::VectorXd>(out.values.data(), n) = y;
    return out;
}

double observed_step_gain(const LinearOperator1D& op) {
    return op.cache ? op.cache->max_gain : 0.0;
}

SectorFit sector_fit(const LinearOperator1D& op) {
    const int n = op.size();
    SemigroupCache& cache = ensure_cache(op);
    SectorFit fit;
    fit.omega = -std::numeric_limits<double>::infinity();
    if (cache.usable) {
        for (int k = 0; k < n; ++k) fit.omega = std::max(fit.omega, cache.values[k].real());
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(cache.matrix);
        for (int k = 0; k < n; ++k)
            fit.omega = std::max(fit.omega, solver.eigenvalues()[k].real());
    }
    for (double s : {1.0, 10.0, 100.0, 1e3, 1e4}) {
        const Eigen::MatrixXd shifted =
            (fit.omega + s) * Eigen::MatrixXd::Identity(n, n) - cache.matrix;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted);
        fit.M = std::max(fit.M, s / svd.singularValues().minCoeff());
    }
    return fit;
}

FieldPath semigroup_duhamel(const LinearOperator1D& op, const Field& phi0,
                            const FieldPath& psi) {
    const int n = op.size();
    const int steps = psi.n_steps;
    if (steps < 1 || psi.size() != steps + 1)
        throw config_error("forcing path needs n_steps >= 1 and n_steps+1 entries");
    const double dt = psi.dt();
    SemigroupCache& cache = ensure_cache(op);

    FieldPath out;
    out.horizon = psi.horizon;
    out.n_steps = steps;
    out.entries.reserve(steps + 1);

    if (cache.usable) {
        Eigen::VectorXcd p0 =
            cache.lu.solve(Eigen::Map<const Eigen::VectorXd>(phi0.values.data(), n).cast<cd>());
        std::vector<Eigen::VectorXcd> ph(steps + 1);
        for (int j = 0; j <= steps; ++j)
            ph[j] = cache.lu.solve(
                Eigen::Map<const Eigen::VectorXd>(psi.entries[j].values.data(), n).cast<cd>());

        Eigen::VectorXcd ez(n), w_left(n), w_right(n);
        for (int k = 0; k < n; ++k) {
            const cd z = cache.values[k] * dt;
            ez[k] = std::exp(z);
            const cd p1 = phi1(z), p2 = phi2(z);
            w_left[k] = dt * (p1 - p2);
            w_right[k] = dt * p2;
        }

        Eigen::VectorXcd forced = Eigen::VectorXcd::Zero(n);
        Eigen::VectorXcd state(n);
        for (int j = 0; j <= steps; ++j) {
            if (j > 0) {
                for (int k = 0; k < n; ++k)
                    forced[k] = ez[k] * forced[k] + w_left[k] * ph[j - 1][k] +
                                w_right[k] * ph[j][k];
            }
            const double t = psi.time(j);
            for (int k = 0; k < n; ++k)
                state[k] = std::exp(cache.values[k] * t) * p0[k] + forced[k];
            Field f(n);
            Eigen::Map<Eigen::VectorXd>(f.values.data(), n) = (cache.vectors * state).real();
            out.entries.push_back(std::move(f));
        }
        return out;
    }

    // fallback: one-step matrix exponential with trapezoid forcing
    const Eigen::MatrixXd e = (dt * cache.matrix).exp();
    if (!e.allFinite()) throw numeric_error("matrix exponential overflowed");
    Eigen::VectorXd state = Eigen::Map<const Eigen::VectorXd>(phi0.values.data(), n);
    Field first(n);
    Eigen::Map<Eigen::VectorXd>(first.values.data(), n) = state;
    out.entries.push_back(std::move(first));
    for (int j = 1; j <= steps; ++j) {
        const Eigen::VectorXd prev =
            Eigen::Map<const Eigen::VectorXd>(psi.entries[j - 1].values.data(), n);
        const Eigen::VectorXd now =
            Eigen::Map<const Eigen::VectorXd>(psi.entries[j].values.data(), n);
        state = e * (state + 0.5 * dt * prev) + 0.5 * dt * now;
        Field f(n);
        Eigen::Map<Eigen::VectorXd>(f.values.data(), n) = state;
        out.entries.push_back(std::move(f));
    }
    return out;
}

Field reynolds_rhs(const SpectralOps& ops, const Field& u_tilde, const Field& v,
                   const Field& w, const PhysicalConstants& c, double kappa_floor) {
    const int n = ops.grid.n_nodes;
    for (int j = 0; j < n; ++j)
        if (w.values[j] < kappa_floor)
            throw quench_imminent_error("gap below kappa/2 in the quasilinear right-hand side",
                                        j, 0.0, w.values[j]);

    std::vector<double> w_tilde(n);
    for (int j = 0; j < n; ++j) w_tilde[j] = w.values[j] - c.theta2;
    const std::vector<double> du = ops.deriv1(u_tilde.values);
    const std::vector<double> ddu = ops.deriv2(u_tilde.values);
    const std::vector<double> dw = ops.deriv1(w_tilde);

    Field out(n);
    for (int j = 0; j < n; ++j) {
        const double wv = w.values[j];
        const double uv = u_tilde.values[j] + c.theta1;
        const double w2 = wv * wv;
        const double w3 = w2 * wv;
        const double div = w3 * uv * ddu[j] + (3.0 * w2 * dw[j] * uv + w3 * du[j]) * du[j];
        out.values[j] = div / wv - v.values[j] * uv / wv;
    }
    return out;
}

FieldPath apply_F_prime(const SpectralOps& ops, const FieldPath& u_path,
                        const FieldPath& q_path, const WaveSolve& solved,
                        const FrechetSolve& wprime, const PhysicalConstants& c,
                        double kappa_floor) {
    const int n = ops.grid.n_nodes;
    const int steps = u_path.n_steps;
    FieldPath out;
    out.horizon = u_path.horizon;
    out.n_steps = steps;
    out.entries.reserve(steps + 1);

    std::vector<double> u_tilde(n), w_tilde(n);
    for (int j = 0; j <= steps; ++j) {
        const auto& u = u_path.entries[j].values;
        const auto& q = q_path.entries[j].values;
        const auto& v = solved.path.entries[j].v.values;
        const auto& wq = wprime.w_dot.entries[j].values;
        const auto& vq = wprime.v_dot.entries[j].values;
        for (int i = 0; i < n; ++i) {
            u_tilde[i] = u[i] - c.theta1;
            w_tilde[i] = solved.path.entries[j].w_tilde.values[i];
        }
        const std::vector<double> dq = ops.deriv1(q);
        const std::vector<double> ddq = ops.deriv2(q);
        const std::vector<double> du = ops.deriv1(u_tilde);
        const std::vector<double> ddu = ops.deriv2(u_tilde);
        const std::vector<double> dw = ops.deriv1(w_tilde);
        const std::vector<double> dwq = ops.deriv1(wq);

        Field f(n);
        for (int i = 0; i < n; ++i) {
            const double wv = w_tilde[i] + c.theta2;
            if (wv < kappa_floor)
                throw quench_imminent_error("gap below kappa/2 in the linearized right-hand side",
                                            i, u_path.time(j), wv);
            const double uv = u[i];
            const double w2 = wv * wv;
            const double w3 = w2 * wv;

            // (1/w) d/dx { w^3 u q' + w^3 u' q }
            const double t1 = (w3 * uv * ddq[i] + (3.0 * w2 * dw[i] * uv + w3 * du[i]) * dq[i] +
                               (3.0 * w2 * dw[i] * du[i] + w3 * ddu[i]) * q[i] +
                               w3 * du[i] * dq[i]) /
                              wv;
            // (1/w) d/dx { 3 w^2 (w'q) u u' }
            const double t2 = 3.0 *
                              (2.0 * wv * dw[i] * wq[i] * uv * du[i] +
                               w2 * dwq[i] * uv * du[i] + w2 * wq[i] * du[i] * du[i] +
                               w2 * wq[i] * uv * ddu[i]) /
                              wv;
            // -(w'q / w^2) d/dx ( w^3 u u' )
            const double t3 = -(wq[i] / w2) *
                              (3.0 * w2 * dw[i] * uv * du[i] + w3 * du[i] * du[i] +
                               w3 * uv * ddu[i]);
            const double t4 = -v[i] / wv * q[i];
            const double t5 = -((wv * vq[i] - v[i] * wq[i]) / w2) * uv;
            f.values[i] = t1 + t2 + t3 + t4 + t5;
        }
        out.entries.push_back(std::move(f));
    }
    return out;
}

namespace {

struct Workspace {
    Grid1D grid;
    EigenBasis basis;
    SpectralOps ops;
    InitialData data;
    HyperbolicInit init;
    PicardSettings settings;
    Field u_tilde0;
};

Workspace make_workspace(const SolverConfig& cfg) {
    Workspace w{build_grid(cfg.length, cfg.n_nodes), {}, {}, {}, {}, {}, {}};
    w.basis = sine_eigenbasis(w.grid, cfg.n_modes);
    w.ops = make_spectral_ops(w.grid);
    w.data = make_initial_data(cfg, w.grid);
    w.init = make_hyperbolic_init(w.data.v0, w.data.w0, cfg.phys.theta2);
    w.settings = picard_settings(cfg, w.init, w.basis);
    w.u_tilde0 = Field(w.grid.n_nodes);
    for (int j = 0; j < w.grid.n_nodes; ++j)
        w.u_tilde0.values[j] = w.data.u0.values[j] - cfg.phys.theta1;
    return w;
}

FieldPath to_full_u(const FieldPath& u_tilde, double theta1) {
    FieldPath full = u_tilde;
    for (auto& f : full.entries) {
        for (auto& v : f.values) v += theta1;
        f.reset_modal();
    }
    return full;
}

// one Gamma sweep; also returns the wave solve used for it. The update is
// projected onto the configured sine band: the defect pairs the spectral
// right-hand side with the finite-difference linearization, and their
// eigenvalue mismatch on the top of the discrete spectrum would otherwise
// amplify from sweep to sweep (keep n_modes <= n_nodes/2 for a comfortable
// contraction margin).
FieldPath gamma_sweep(const Workspace& w, const SolverConfig& cfg,
                      const LinearOperator1D& op, const FieldPath& u_tilde,
                      WaveSolve* wave_out) {
    WaveSolve wave = solve_wave_picard(to_full_u(u_tilde, cfg.phys.theta1), w.init,
                                       cfg.phys, w.settings, w.basis);
    FieldPath psi;
    psi.horizon = u_tilde.horizon;
    psi.n_steps = u_tilde.n_steps;
    psi.entries.reserve(u_tilde.n_steps + 1);
    const double floor = w.init.kappa / 2.0;
    for (int j = 0; j <= u_tilde.n_steps; ++j) {
        Field w_full(w.grid.n_nodes);
        for (int i = 0; i < w.grid.n_nodes; ++i)
            w_full.values[i] = wave.path.entries[j].w_tilde.values[i] + cfg.phys.theta2;
        Field f;
        try {
            f = reynolds_rhs(w.ops, u_tilde.entries[j], wave.path.entries[j].v, w_full,
                             cfg.phys, floor);
        } catch (const quench_imminent_error& e) {
            throw quench_imminent_error(e.what(), e.node_index, u_tilde.time(j),
                                        e.gap_value);
        }
        const std::vector<double> pu = op.apply(u_tilde.entries[j].values);
        for (int i = 0; i < w.grid.n_nodes; ++i) f.values[i] -= pu[i];
        psi.entries.push_back(std::move(f));
    }
    if (wave_out) *wave_out = std::move(wave);
    FieldPath next = semigroup_duhamel(op, w.u_tilde0, psi);
    for (auto& f : next.entries) f = from_modes(w.basis, to_modes(w.basis, f));
    return next;
}

}  // namespace

double horizon_T0_star(const SolverConfig& cfg, double L_e, double L_B, double gamma0,
                       double I_T0, double P_norm) {
    const Workspace w = make_workspace(cfg);
    const double u0_h2 = h2_norm_shifted(w.ops, w.u_tilde0.values, cfg.phys.theta1);
    const double bracket =
        2.0 * gamma0 * I_T0 *
        (L_e + P_norm + 2.0 * L_B * (1.0 + u0_h2 +
                                     w.init.kappa / (2.0 * w.basis.embedding_constant)));
    return std::pow(bracket, -1.0 / cfg.alpha);
}

HorizonCertificates estimate_horizons(const SolverConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    const int n = w.grid.n_nodes;
    HorizonCertificates cert;

    cert.L_G = estimate_L_G(w.init, cfg.phys, w.basis);
    cert.delta_o = strong_continuity_time(w.init, cfg.phys, w.settings, w.basis);
    cert.T0 = horizon_T0(cfg.phys, w.init, w.settings, 1.0, cert.L_G, cert.delta_o,
                         w.u_tilde0, w.basis)
                  .value;

    const LinearOperator1D op =
        assemble_linearization(w.data.u0, w.data.v0, w.data.w0, cfg.phys, w.grid);

    // graph-norm equivalence constant and |P|_{H2->L2} from band-limited probes
    std::mt19937_64 rng(cfg.seed * 1315423911ull + 17ull);
    const int band = std::max(1, w.basis.n_modes / 4);
    cert.gamma0 = 1.0;
    cert.P_norm = 0.0;
    for (int p = 0; p < 32; ++p) {
        const Field g = random_band_limited(rng, w.basis, band, 1.0);
        const double h2 = h2_norm_full(w.ops, g.values);
        const double graph = l2_zero(w.grid, g.values) + l2_zero(w.grid, op.apply(g.values));
        cert.gamma0 = std::max({cert.gamma0, h2 / graph, graph / h2});
        cert.P_norm = std::max(cert.P_norm, l2_zero(w.grid, op.apply(g.values)) / h2);
    }

    // I(T0): probe the linear problem and measure the maximal-regularity ratio
    {
        const double T = cert.T0;
        const int steps = 64;
        auto graph_norm = [&](const std::vector<double>& f) {
            return l2_zero(w.grid, f) + l2_zero(w.grid, op.apply(f));
        };
        auto l2n = [&](const std::vector<double>& f) { return l2_zero(w.grid, f); };
        cert.I_T0 = 0.0;
        for (int p = 0; p < 4; ++p) {
            const Field g = random_band_limited(rng, w.basis, band, 1.0);
            FieldPath forcing = modulated_path(Field(n), g, T, steps, [&](double t) {
                return 1.0 + std::pow(t / T, cfg.alpha);
            });
            const FieldPath phi = semigroup_duhamel(op, w.u_tilde0, forcing);
            const double num = path_calpha_norm(phi, cfg.alpha, graph_norm);
            Field incompat = op.apply(w.u_tilde0);
            for (int i = 0; i < n; ++i) incompat.values[i] += forcing.entries[0].values[i];
            const double den = path_calpha_norm(forcing, cfg.alpha, l2n) +
                               l2_zero(w.grid, incompat.values) +
                               l2_zero(w.grid, w.u_tilde0.values) + 1e-300;
            cert.I_T0 = std::max(cert.I_T0, num / den);
        }
        cert.I_T0 = std::max(cert.I_T0, 1.0);
    }

    // Lipschitz constant of F between admissible pressure paths
    {
        const double T = cert.T0 / 2.0;
        const int steps = 32;
        const double amp = 0.4 * w.settings.radius;
        cert.L_e = 0.0;
        const double floor = w.init.kappa / 2.0;
        for (int p = 0; p < 4; ++p) {
            FieldPath pa, pb;
            for (int side = 0; side < 2; ++side) {
                const Field shape =
                    random_with_norm(rng, w.basis, band, SobolevOrder::H2, amp);
                FieldPath path = modulated_path(w.u_tilde0, shape, T, steps,
                                                [&](double t) { return t / T; });
                (side == 0 ? pa : pb) = std::move(path);
            }
            WaveSolve wa = solve_wave_picard(to_full_u(pa, cfg.phys.theta1), w.init,
                                             cfg.phys, w.settings, w.basis);
            WaveSolve wb = solve_wave_picard(to_full_u(pb, cfg.phys.theta1), w.init,
                                             cfg.phys, w.settings, w.basis);
            double num = 0.0;
            for (int j = 0; j <= steps; ++j) {
                Field w_full_a(n), w_full_b(n);
                for (int i = 0; i < n; ++i) {
                    w_full_a.values[i] = wa.path.entries[j].w_tilde.values[i] + cfg.phys.theta2;
                    w_full_b.values[i] = wb.path.entries[j].w_tilde.values[i] + cfg.phys.theta2;
                }
                const Field fa = reynolds_rhs(w.ops, pa.entries[j], wa.path.entries[j].v,
                                              w_full_a, cfg.phys, floor);
                const Field fb = reynolds_rhs(w.ops, pb.entries[j], wb.path.entries[j].v,
                                              w_full_b, cfg.phys, floor);
                num = std::max(num, l2_zero(w.grid, diff_values(fa, fb)));
            }
            const double den = path_sup_h2(w.ops, pa, pb) + 1e-300;
            cert.L_e = std::max(cert.L_e, num / den);
        }
    }

    // Holder constant of the linearization error (triple increments)
    {
        const double T = cert.T0 / 2.0;
        const int steps = 32;
        const double dt = T / steps;
        cert.L_B = 0.0;
        auto h2n = [&](const std::vector<double>& f) { return h2_norm_full(w.ops, f); };
        for (int p = 0; p < 3; ++p) {
            const Field u_shape =
                random_with_norm(rng, w.basis, band, SobolevOrder::H2, 0.3 * w.settings.radius);
            const Field q_shape = random_with_norm(rng, w.basis, band, SobolevOrder::H2,
                                                   0.3 * w.settings.radius);
            FieldPath u_tilde = modulated_path(w.u_tilde0, u_shape, T, steps, [&](double t) {
                return std::pow(t / T, cfg.alpha);
            });
            FieldPath q = modulated_path(Field(n), q_shape, T, steps, [&](double t) {
                return 1.0 + std::pow(t / T, cfg.alpha);
            });
            const FieldPath u_full = to_full_u(u_tilde, cfg.phys.theta1);
            WaveSolve wave =
                solve_wave_picard(u_full, w.init, cfg.phys, w.settings, w.basis);
            FrechetSolve wp = frechet_W(u_full, q, wave, cfg.phys, w.settings, w.basis);
            const FieldPath fq = apply_F_prime(w.ops, u_full, q, wave, wp, cfg.phys,
                                               w.init.kappa / 2.0);

            const double q_calpha = path_calpha_norm(q, cfg.alpha, h2n);
            double q_sup = 0.0;
            for (const auto& f : q.entries) q_sup = std::max(q_sup, h2n(f.values));
            // C-alpha magnitude of the full pressure path (constant shift drops
            // out of increments, enters the sup through the shifted norm)
            double u_sup = 0.0;
            for (const auto& f : u_tilde.entries)
                u_sup = std::max(u_sup, h2_norm_shifted(w.ops, f.values, cfg.phys.theta1));
            double u_semi = 0.0;
            for (int lag = 1; lag <= steps; lag *= 2)
                for (int j = 0; j + lag <= steps; ++j)
                    u_semi = std::max(
                        u_semi, h2n(diff_values(u_tilde.entries[j + lag], u_tilde.entries[j])) /
                                    std::pow(lag * dt, cfg.alpha));
            const double u_calpha = u_sup + u_semi;

            for (int lag = 1; lag <= steps; lag *= 2) {
                const double h = lag * dt;
                for (int j = 0; j + lag <= steps; ++j) {
                    std::vector<double> inc = diff_values(fq.entries[j + lag], fq.entries[j]);
                    const std::vector<double> qinc =
                        diff_values(q.entries[j + lag], q.entries[j]);
                    const std::vector<double> pq = op.apply(qinc);
                    for (int i = 0; i < n; ++i) inc[i] -= pq[i];
                    const double num = l2_zero(w.grid, inc);
                    const double den =
                        std::pow(h, cfg.alpha) *
                        (std::pow(T, cfg.alpha) * q_calpha * (1.0 + u_calpha) +
                         q_sup * (1.0 + u_calpha));
                    cert.L_B = std::max(cert.L_B, num / (den + 1e-300));
                }
            }
        }
    }

    cert.T0_star = horizon_T0_star(cfg, cert.L_e, cert.L_B, cert.gamma0, cert.I_T0,
                                   cert.P_norm);

    // delta*: largest dyadic T with |Gamma(u0) - u0|_{C^alpha H2} <= r/2
    {
        auto h2n = [&](const std::vector<double>& f) { return h2_norm_full(w.ops, f); };
        double T = cert.T0;
        cert.delta_star = 0.0;
        for (int halving = 0; halving < 60; ++halving) {
            SolverConfig probe = cfg;
            probe.horizon = T;
            probe.n_steps = 64;
            FieldPath u_tilde = constant_path(w.u_tilde0, T, probe.n_steps);
            FieldPath gamma = gamma_sweep(w, probe, op, u_tilde, nullptr);
            FieldPath deviation = gamma;
            for (int j = 0; j <= probe.n_steps; ++j)
                deviation.entries[j] =
                    Field(diff_values(gamma.entries[j], u_tilde.entries[j]));
            const double norm = path_calpha_norm(deviation, cfg.alpha, h2n);
            if (norm <= 0.5 * w.settings.radius) {
                cert.delta_star = T;
                break;
            }
            T /= 2.0;
        }
        if (cert.delta_star == 0.0)
            throw numeric_error("no admissible delta* found above 2^-60 T0");
    }

    cert.T1 = std::min({cert.T0, cert.T0_star, cert.delta_star});
    return cert;
}

CoupledSolution gamma_fixed_point(const SolverConfig& cfg, const HorizonCertificates* certs) {
    const Workspace w = make_workspace(cfg);
    const int n = w.grid.n_nodes;
    const LinearOperator1D op =
        assemble_linearization(w.data.u0, w.data.v0, w.data.w0, cfg.phys, w.grid);

    CoupledSolution sol;
    sol.diag.kappa = w.init.kappa;
    sol.diag.L_G = estimate_L_G(w.init, cfg.phys, w.basis);
    sol.diag.delta_o = strong_continuity_time(w.init, cfg.phys, w.settings, w.basis);
    const HorizonT0 t0 = horizon_T0(cfg.phys, w.init, w.settings, 1.0, sol.diag.L_G,
                                    sol.diag.delta_o, w.u_tilde0, w.basis);
    sol.diag.T0 = t0.value;
    sol.diag.T0_active_term = t0.active_term;
    if (certs) {
        sol.diag.T1 = certs->T1;
        sol.diag.horizon_certified = cfg.horizon < certs->T1;
    }

    FieldPath u_tilde = constant_path(w.u_tilde0, cfg.horizon, cfg.n_steps);
    WaveSolve wave;
    double prev_dist = -1.0;
    bool converged = false;
    for (int iter = 1; iter <= cfg.max_outer; ++iter) {
        FieldPath next = gamma_sweep(w, cfg, op, u_tilde, &wave);
        const double dist = path_sup_h2(w.ops, next, u_tilde);
        if (prev_dist > 0.0) {
            sol.diag.outer_ratios.push_back(dist / prev_dist);
            sol.diag.final_ratio = sol.diag.outer_ratios.back();
        }
        prev_dist = dist;
        u_tilde = std::move(next);
        sol.diag.outer_iterations = iter;
        if (dist < cfg.gamma_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw iteration_error("Gamma iteration did not converge within gamma.max_outer",
                              sol.diag.outer_ratios);

    // final wave refresh so (v, w) matches the accepted pressure path
    wave = solve_wave_picard(to_full_u(u_tilde, cfg.phys.theta1), w.init, cfg.phys,
                             w.settings, w.basis);
    sol.diag.wave_iterations = wave.iterations;
    sol.diag.wave_ratio = wave.final_ratio;
    sol.diag.min_gap = wave.min_gap;

    const GardingReport garding =
        garding_constants(op, w.data.u0, w.data.w0, cfg.phys, w.basis, cfg.seed);
    sol.diag.garding_K = garding.K;
    sol.diag.garding_Ko = garding.K_o;
    const SectorFit sector = sector_fit(op);
    sol.diag.sector_omega = sector.omega;
    sol.diag.sector_M = sector.M;

    sol.u_path = to_full_u(u_tilde, cfg.phys.theta1);
    sol.v_path.horizon = sol.w_path.horizon = cfg.horizon;
    sol.v_path.n_steps = sol.w_path.n_steps = cfg.n_steps;
    for (int j = 0; j <= cfg.n_steps; ++j) {
        sol.v_path.entries.push_back(wave.path.entries[j].v);
        Field w_full(n);
        for (int i = 0; i < n; ++i)
            w_full.values[i] = wave.path.entries[j].w_tilde.values[i] + cfg.phys.theta2;
        sol.w_path.entries.push_back(std::move(w_full));
    }
    for (int j = 0; j <= cfg.n_steps; ++j)
        for (int i = 0; i < n; ++i)
            if (!(sol.u_path.entries[j].values[i] > 0.0))
                throw numeric_error("accepted pressure lost positivity at node " +
                                    std::to_string(i));
    return sol;
}

}  // namespace memslab
