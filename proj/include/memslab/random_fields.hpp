#pragma once

#include <random>

#include "memslab/grid.hpp"

// Seeded band-limited probe generators shared by the verification suites and
// tests. Probes stay in the lowest quarter of the mode range so the constants
// they estimate reflect the continuum objects rather than mesh-top noise.

namespace memslab {

inline Field random_band_limited(std::mt19937_64& rng, const EigenBasis& basis,
                                 int max_mode, double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> coeffs(basis.n_modes, 0.0);
    const int top = std::min(max_mode, basis.n_modes);
    for (int k = 0; k < top; ++k) coeffs[k] = amplitude * unit(rng) / (k + 1);
    return from_modes(basis, coeffs);
}

/// Band-limited probe rescaled to a prescribed Sobolev norm.
inline Field random_with_norm(std::mt19937_64& rng, const EigenBasis& basis, int max_mode,
                              SobolevOrder order, double target_norm) {
    Field f = random_band_limited(rng, basis, max_mode, 1.0);
    const double norm = sobolev_norm(basis, f, order);
    for (auto& v : f.values) v *= target_norm / norm;
    f.reset_modal();
    return f;
}

/// Path t -> base + envelope(t) * shape with a fixed band-limited shape.
inline FieldPath modulated_path(const Field& base, const Field& shape, double horizon,
                                int n_steps, const std::function<double(double)>& envelope) {
    FieldPath path;
    path.horizon = horizon;
    path.n_steps = n_steps;
    path.entries.reserve(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) {
        const double e = envelope(path.dt() * j);
        Field f(base.size());
        for (int i = 0; i < base.size(); ++i)
            f.values[i] = base.values[i] + e * shape.values[i];
        path.entries.push_back(std::move(f));
    }
    return path;
}

inline FieldPath constant_path(const Field& value, double horizon, int n_steps) {
    FieldPath path;
    path.horizon = horizon;
    path.n_steps = n_steps;
    path.entries.assign(n_steps + 1, value);
    return path;
}

}  // namespace memslab
