#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace memslab {

/// Uniform interior mesh on (0, L). Nodes x_j = (j+1) h, j = 0..n_nodes-1;
/// the boundary points 0 and L are not stored, their values are supplied by
/// the calling context (theta1, theta2 or 0).
struct Grid1D {
    double length = 1.0;
    int n_nodes = 0;
    double spacing = 0.0;

    double x(int j) const { return spacing * (j + 1); }
};

Grid1D build_grid(double length, int n_nodes);

/// One scalar function on the interior mesh. `modal` caches sine coefficients
/// when a transform has been applied; mutate `values` through `reset_modal`.
struct Field {
    std::vector<double> values;
    mutable std::optional<std::vector<double>> modal;

    Field() = default;
    explicit Field(int n, double fill = 0.0) : values(static_cast<std::size_t>(n), fill) {}
    explicit Field(std::vector<double> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    void reset_modal() { modal.reset(); }
};

/// Dirichlet sine eigensystem on a Grid1D: eigenvalues lambda_k = (k pi / L)^2
/// and mode shapes sin(k pi x / L) sampled on the mesh, k = 1..n_modes.
/// Also carries the numerically estimated sup-norm embedding constant
/// C with |f|_inf <= C |f|_H1, taken as the max of |phi|_inf / |phi|_H1 over
/// the basis.
struct EigenBasis {
    Grid1D grid;
    int n_modes = 0;
    std::vector<double> eigenvalues;
    std::vector<double> omega;  // sqrt(eigenvalues)
    std::vector<double> table;  // n_modes x n_nodes, row k = phi_{k+1} at nodes
    double embedding_constant = 0.0;

    const double* mode_row(int k) const {
        return table.data() + static_cast<std::size_t>(k) * grid.n_nodes;
    }
};

EigenBasis sine_eigenbasis(const Grid1D& grid, int n_modes);

/// Forward/inverse discrete sine transform against a basis. Exact inverse on
/// band-limited data (n_modes coefficients reproduce the sampled field when
/// the field lies in the span of the first n_modes shapes).
std::vector<double> to_modes(const EigenBasis& basis, const Field& f);
Field from_modes(const EigenBasis& basis, const std::vector<double>& coeffs);

enum class SobolevOrder { L2, H1, H2 };

/// Modal Sobolev norms: sum over modes of (1 [+ lambda [+ lambda^2]]) c_k^2
/// times L/2. Exact on the eigenbasis, consistent with the domain of the
/// Dirichlet Laplacian. Intended for fields with zero boundary trace.
double sobolev_norm(const EigenBasis& basis, const Field& f, SobolevOrder order);
double sobolev_norm_modal(const EigenBasis& basis, const std::vector<double>& coeffs,
                          SobolevOrder order);

/// Nodal norms for fields whose boundary trace is not zero. Trapezoid rule
/// for the L2 part, first differences on the staggered grid for the
/// derivative energy; `left`/`right` are the boundary values.
double nodal_l2(const Grid1D& grid, const std::vector<double>& values,
                double left, double right);
double dirichlet_energy(const Grid1D& grid, const std::vector<double>& values,
                        double left, double right);
double nodal_h1(const Grid1D& grid, const std::vector<double>& values,
                double left, double right);
double sup_norm(const std::vector<double>& values, double left, double right);

/// Time-indexed sequence on a uniform grid of [0, T], entries at t_j = j dt.
template <class Entry>
struct Path {
    double horizon = 0.0;
    int n_steps = 0;
    std::vector<Entry> entries;  // n_steps + 1

    double dt() const { return horizon / n_steps; }
    double time(int j) const { return dt() * j; }
    int size() const { return static_cast<int>(entries.size()); }
};

using FieldPath = Path<Field>;

/// Result of the empirical time-regularity fit. `defined` is false for
/// constant paths (all increments at machine-noise level); the prefactor is
/// then 0 and alpha is meaningless.
struct HolderFit {
    double alpha = 0.0;
    double prefactor = 0.0;
    bool defined = false;
};

/// Full-resolution spectral differentiation workspace for one grid: sine and
/// cosine tables with as many modes as interior nodes. Differentiates fields
/// with zero boundary trace through their sine expansion; first derivatives
/// of non-zero-trace quantities are assembled by the product rule from these.
struct SpectralOps {
    Grid1D grid;
    std::vector<double> lambda;     // (k pi / L)^2, k = 1..n
    std::vector<double> sin_table;  // n x n, sin(k pi j / (n+1))
    std::vector<double> cos_table;  // n x n, cos(k pi j / (n+1))

    std::vector<double> modes(const std::vector<double>& values) const;
    /// d/dx of a zero-trace field at the interior nodes.
    std::vector<double> deriv1(const std::vector<double>& values) const;
    /// same, plus the derivative values at the two boundary points
    std::vector<double> deriv1(const std::vector<double>& values, double* left,
                               double* right) const;
    /// d2/dx2 of a zero-trace field at the interior nodes.
    std::vector<double> deriv2(const std::vector<double>& values) const;
};

SpectralOps make_spectral_ops(const Grid1D& grid);

/// Least-squares fit of log sup_t |x(t+h)-x(t)| against log h over dyadic
/// lags h = dt, 2 dt, ... capped at T/4, with the largest octave discarded
/// when enough lags remain. `dist(i, j)` returns the norm of x(t_j) - x(t_i);
/// `scale_hint` (typically the norm of an entry) sets the machine-noise
/// threshold below which the path counts as constant.
HolderFit holder_fit(int n_entries, double dt,
                     const std::function<double(int, int)>& dist,
                     double scale_hint = 0.0);

HolderFit holder_fit(const EigenBasis& basis, const FieldPath& path, SobolevOrder order);

}  // namespace memslab
