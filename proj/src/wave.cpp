#include "memslab/wave.hpp"

#include <cmath>

#include "memslab/errors.hpp"
#include "memslab/kernels.hpp"

namespace memslab {

double state_norm_modal(const EigenBasis& basis, const std::vector<double>& v_modes,
                        const std::vector<double>& w_modes) {
    double acc = 0.0;
    for (int k = 0; k < basis.n_modes; ++k)
        acc += v_modes[k] * v_modes[k] + basis.eigenvalues[k] * w_modes[k] * w_modes[k];
    return std::sqrt(acc * basis.grid.length / 2.0);
}

double state_norm(const EigenBasis& basis, const WaveState& s) {
    return state_norm_modal(basis, to_modes(basis, s.v), to_modes(basis, s.w_tilde));
}

WaveState apply_semigroup(double t, const WaveState& s, const EigenBasis& basis) {
    if (s.v.size() != basis.grid.n_nodes || s.w_tilde.size() != basis.grid.n_nodes)
        throw config_error("wave state does not match the basis grid");
    const auto v_modes = to_modes(basis, s.v);
    const auto w_modes = to_modes(basis, s.w_tilde);
    std::vector<double> v_out(basis.n_modes), w_out(basis.n_modes);
    kernels::rotate_modes(basis.omega.data(), basis.n_modes, t, v_modes.data(),
                          w_modes.data(), v_out.data(), w_out.data());
    return WaveState(from_modes(basis, v_out), from_modes(basis, w_out));
}

WavePath duhamel(const WaveState& init, const FieldPath& forcing, const EigenBasis& basis) {
    const int n = basis.grid.n_nodes;
    const int m = basis.n_modes;
    const int steps = forcing.n_steps;
    if (init.v.size() != n || init.w_tilde.size() != n)
        throw config_error("initial state does not match the basis grid");
    if (steps < 1 || forcing.size() != steps + 1)
        throw config_error("forcing path needs n_steps >= 1 and n_steps+1 entries");

    // forcing samples in modal coordinates, step-major
    std::vector<double> g(static_cast<std::size_t>(steps + 1) * m);
    for (int j = 0; j <= steps; ++j) {
        const auto coeffs = to_modes(basis, forcing.entries[j]);
        std::copy(coeffs.begin(), coeffs.end(), g.begin() + static_cast<std::size_t>(j) * m);
    }

    std::vector<double> v_forced(g.size()), w_forced(g.size());
    kernels::duhamel_modes(basis.omega.data(), m, forcing.dt(), steps, g.data(),
                           v_forced.data(), w_forced.data());

    const auto v0 = to_modes(basis, init.v);
    const auto w0 = to_modes(basis, init.w_tilde);

    WavePath out;
    out.horizon = forcing.horizon;
    out.n_steps = steps;
    out.entries.reserve(steps + 1);
    std::vector<double> v_modes(m), w_modes(m);
    for (int j = 0; j <= steps; ++j) {
        kernels::rotate_modes(basis.omega.data(), m, forcing.time(j), v0.data(), w0.data(),
                              v_modes.data(), w_modes.data());
        const double* vf = v_forced.data() + static_cast<std::size_t>(j) * m;
        const double* wf = w_forced.data() + static_cast<std::size_t>(j) * m;
        for (int k = 0; k < m; ++k) {
            v_modes[k] += vf[k];
            w_modes[k] += wf[k];
        }
        out.entries.emplace_back(from_modes(basis, v_modes), from_modes(basis, w_modes));
    }
    return out;
}

}  // namespace memslab
