#include "memslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "memslab/errors.hpp"
#include "memslab/kernels.hpp"

namespace memslab {

Grid1D build_grid(double length, int n_nodes) {
    if (!(length > 0.0)) throw config_error("grid length must be positive");
    if (n_nodes < 3) throw config_error("grid needs at least 3 interior nodes");
    Grid1D g;
    g.length = length;
    g.n_nodes = n_nodes;
    g.spacing = length / (n_nodes + 1);
    return g;
}

EigenBasis sine_eigenbasis(const Grid1D& grid, int n_modes) {
    if (n_modes < 1) throw config_error("need at least one mode");
    if (n_modes > grid.n_nodes)
        throw config_error("n_modes exceeds n_nodes: sine modes would alias on the mesh");

    EigenBasis basis;
    basis.grid = grid;
    basis.n_modes = n_modes;
    basis.eigenvalues.resize(n_modes);
    basis.omega.resize(n_modes);
    basis.table.resize(static_cast<std::size_t>(n_modes) * grid.n_nodes);

    const double pi = std::numbers::pi;
    for (int k = 0; k < n_modes; ++k) {
        const double freq = (k + 1) * pi / grid.length;
        basis.eigenvalues[k] = freq * freq;
        basis.omega[k] = freq;
        double* row = basis.table.data() + static_cast<std::size_t>(k) * grid.n_nodes;
        for (int j = 0; j < grid.n_nodes; ++j) {
            // sin(k pi x_j / L) = sin(k pi (j+1) / (n+1)), exact at mesh nodes
            row[j] = std::sin((k + 1) * pi * (j + 1) / (grid.n_nodes + 1));
        }
    }

    // sup-norm embedding constant, largest over the basis of |phi|_inf/|phi|_H1
    double c_emb = 0.0;
    for (int k = 0; k < n_modes; ++k) {
        const double* row = basis.mode_row(k);
        double sup = 0.0;
        for (int j = 0; j < grid.n_nodes; ++j) sup = std::max(sup, std::abs(row[j]));
        const double h1 = std::sqrt((1.0 + basis.eigenvalues[k]) * grid.length / 2.0);
        c_emb = std::max(c_emb, sup / h1);
    }
    basis.embedding_constant = c_emb;
    return basis;
}

std::vector<double> to_modes(const EigenBasis& basis, const Field& f) {
    const int n = basis.grid.n_nodes;
    if (f.size() != n) throw config_error("field size does not match grid");
    if (f.modal && static_cast<int>(f.modal->size()) == basis.n_modes) return *f.modal;
    std::vector<double> coeffs(basis.n_modes);
    const double scale = 2.0 / (n + 1);
    kernels::sine_analysis(basis.table.data(), basis.n_modes, n, f.values.data(), scale,
                           coeffs.data());
    f.modal = coeffs;
    return coeffs;
}

Field from_modes(const EigenBasis& basis, const std::vector<double>& coeffs) {
    if (static_cast<int>(coeffs.size()) != basis.n_modes)
        throw config_error("coefficient count does not match basis");
    Field f(basis.grid.n_nodes);
    kernels::sine_synthesis(basis.table.data(), basis.n_modes, basis.grid.n_nodes,
                            coeffs.data(), f.values.data());
    f.modal = coeffs;
    return f;
}

double sobolev_norm_modal(const EigenBasis& basis, const std::vector<double>& coeffs,
                          SobolevOrder order) {
    double acc = 0.0;
    for (int k = 0; k < basis.n_modes; ++k) {
        const double lam = basis.eigenvalues[k];
        double weight = 1.0;
        if (order == SobolevOrder::H1) weight += lam;
        if (order == SobolevOrder::H2) weight += lam + lam * lam;
        acc += weight * coeffs[k] * coeffs[k];
    }
    return std::sqrt(acc * basis.grid.length / 2.0);
}

double sobolev_norm(const EigenBasis& basis, const Field& f, SobolevOrder order) {
    return sobolev_norm_modal(basis, to_modes(basis, f), order);
}

double nodal_l2(const Grid1D& grid, const std::vector<double>& values, double left,
                double right) {
    double acc = 0.5 * (left * left + right * right);
    for (double v : values) acc += v * v;
    return std::sqrt(acc * grid.spacing);
}

double dirichlet_energy(const Grid1D& grid, const std::vector<double>& values,
                        double left, double right) {
    const int n = static_cast<int>(values.size());
    double acc = 0.0;
    double prev = left;
    for (int j = 0; j < n; ++j) {
        const double d = values[j] - prev;
        acc += d * d;
        prev = values[j];
    }
    const double d = right - prev;
    acc += d * d;
    return acc / grid.spacing;
}

double nodal_h1(const Grid1D& grid, const std::vector<double>& values, double left,
                double right) {
    const double l2 = nodal_l2(grid, values, left, right);
    return std::sqrt(l2 * l2 + dirichlet_energy(grid, values, left, right));
}

double sup_norm(const std::vector<double>& values, double left, double right) {
    double sup = std::max(std::abs(left), std::abs(right));
    for (double v : values) sup = std::max(sup, std::abs(v));
    return sup;
}

SpectralOps make_spectral_ops(const Grid1D& grid) {
    SpectralOps ops;
    ops.grid = grid;
    const int n = grid.n_nodes;
    ops.lambda.resize(n);
    ops.sin_table.resize(static_cast<std::size_t>(n) * n);
    ops.cos_table.resize(static_cast<std::size_t>(n) * n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < n; ++k) {
        const double freq = (k + 1) * pi / grid.length;
        ops.lambda[k] = freq * freq;
        for (int j = 0; j < n; ++j) {
            const double arg = (k + 1) * pi * (j + 1) / (n + 1);
            ops.sin_table[static_cast<std::size_t>(k) * n + j] = std::sin(arg);
            ops.cos_table[static_cast<std::size_t>(k) * n + j] = std::cos(arg);
        }
    }
    return ops;
}

std::vector<double> SpectralOps::modes(const std::vector<double>& values) const {
    const int n = grid.n_nodes;
    std::vector<double> coeffs(n);
    kernels::sine_analysis(sin_table.data(), n, n, values.data(), 2.0 / (n + 1),
                           coeffs.data());
    return coeffs;
}

std::vector<double> SpectralOps::deriv1(const std::vector<double>& values) const {
    return deriv1(values, nullptr, nullptr);
}

std::vector<double> SpectralOps::deriv1(const std::vector<double>& values, double* left,
                                        double* right) const {
    const int n = grid.n_nodes;
    std::vector<double> coeffs = modes(values);
    for (int k = 0; k < n; ++k) coeffs[k] *= std::sqrt(lambda[k]);
    std::vector<double> out(n);
    kernels::sine_synthesis(cos_table.data(), n, n, coeffs.data(), out.data());
    if (left) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += coeffs[k];
        *left = acc;
    }
    if (right) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += (k % 2 == 0 ? -1.0 : 1.0) * coeffs[k];
        *right = acc;
    }
    return out;
}

std::vector<double> SpectralOps::deriv2(const std::vector<double>& values) const {
    const int n = grid.n_nodes;
    std::vector<double> coeffs = modes(values);
    for (int k = 0; k < n; ++k) coeffs[k] *= -lambda[k];
    std::vector<double> out(n);
    kernels::sine_synthesis(sin_table.data(), n, n, coeffs.data(), out.data());
    return out;
}

HolderFit holder_fit(int n_entries, double dt,
                     const std::function<double(int, int)>& dist, double scale_hint) {
    HolderFit fit;
    const int n_steps = n_entries - 1;
    if (n_steps < 8) return fit;

    // dyadic lags up to T/4; drop the top octave when at least two lags remain
    std::vector<int> lags;
    for (int lag = 1; 4 * lag <= n_steps; lag *= 2) lags.push_back(lag);
    if (lags.size() > 2) {
        std::vector<int> kept;
        for (int lag : lags)
            if (8 * lag <= n_steps) kept.push_back(lag);
        if (kept.size() >= 2) lags = kept;
    }
    if (lags.size() < 2) return fit;

    double scale = 0.0;
    std::vector<double> sup_inc(lags.size(), 0.0);
    for (std::size_t p = 0; p < lags.size(); ++p) {
        const int lag = lags[p];
        for (int i = 0; i + lag <= n_steps; ++i)
            sup_inc[p] = std::max(sup_inc[p], dist(i, i + lag));
        scale = std::max(scale, sup_inc[p]);
    }
    if (scale <= 1e-14 * scale_hint + 1e-300) {
        // constant path: zero prefactor, exponent undefined
        fit.prefactor = 0.0;
        return fit;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t p = 0; p < lags.size(); ++p) {
        if (sup_inc[p] <= 1e-300) continue;
        const double lx = std::log(lags[p] * dt);
        const double ly = std::log(sup_inc[p]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 2) {
        fit.prefactor = 0.0;
        return fit;
    }
    const double denom = count * sxx - sx * sx;
    fit.alpha = (count * sxy - sx * sy) / denom;
    fit.prefactor = std::exp((sy - fit.alpha * sx) / count);
    fit.defined = true;
    return fit;
}

HolderFit holder_fit(const EigenBasis& basis, const FieldPath& path, SobolevOrder order) {
    // transform once per entry, then fit on coefficient differences
    std::vector<std::vector<double>> coeffs(path.entries.size());
    for (std::size_t i = 0; i < path.entries.size(); ++i)
        coeffs[i] = to_modes(basis, path.entries[i]);
    auto dist = [&](int i, int j) {
        std::vector<double> diff(coeffs[i].size());
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = coeffs[j][k] - coeffs[i][k];
        return sobolev_norm_modal(basis, diff, order);
    };
    double scale = 0.0;
    for (const auto& c : coeffs)
        scale = std::max(scale, sobolev_norm_modal(basis, c, order));
    return holder_fit(path.size(), path.dt(), dist, scale);
}

}  // namespace memslab
