#pragma once

#include "memslab/grid.hpp"

namespace memslab {

/// Point of the wave state space: velocity v in L2 and gap deviation
/// w_tilde = w - theta2 with zero boundary trace in H1_0.
struct WaveState {
    Field v;
    Field w_tilde;

    WaveState() = default;
    WaveState(Field v_, Field w_) : v(std::move(v_)), w_tilde(std::move(w_)) {}
    explicit WaveState(int n) : v(n), w_tilde(n) {}
};

using WavePath = Path<WaveState>;

/// Norm of the state space: velocity in L2 plus the Dirichlet energy of the
/// gap deviation. The block wave operator is skew adjoint for the matching
/// inner product, so the group below is an exact isometry for this norm.
double state_norm(const EigenBasis& basis, const WaveState& s);
double state_norm_modal(const EigenBasis& basis, const std::vector<double>& v_modes,
                        const std::vector<double>& w_modes);

/// Action of the wave group at time t (any sign): per mode k with
/// omega = sqrt(lambda_k),
///   w_k(t) = w_k cos(omega t) + v_k sin(omega t)/omega,
///   v_k(t) = -w_k omega sin(omega t) + v_k cos(omega t).
WaveState apply_semigroup(double t, const WaveState& s, const EigenBasis& basis);

/// Variation-of-constants solution of the forced wave system: the group
/// applied to `init` plus the convolution of the group with (g(s), 0),
/// evaluated on the forcing path's time grid. The convolution uses the exact
/// per-mode rotation kernel with trapezoid quadrature of the forcing samples.
WavePath duhamel(const WaveState& init, const FieldPath& forcing,
                 const EigenBasis& basis);

}  // namespace memslab
