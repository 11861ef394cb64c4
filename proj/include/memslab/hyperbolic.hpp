#pragma once

#include <array>
#include <vector>

#include "memslab/grid.hpp"
#include "memslab/wave.hpp"

namespace memslab {

struct PhysicalConstants {
    double beta_F = 1.0;   // electrostatic coefficient
    double beta_p = 1.0;   // pressure coupling
    double theta1 = 1.0;   // boundary pressure
    double theta2 = 1.0;   // boundary gap

    bool operator==(const PhysicalConstants&) const = default;
};

void validate(const PhysicalConstants& c);

/// Initial data for the wave subsystem. kappa is the gap floor
/// inf w0 (> 0), taken over the interior nodes and the boundary trace.
struct HyperbolicInit {
    Field v0;       // velocity, zero boundary trace
    Field w0;       // gap, boundary trace theta2
    double kappa = 0.0;
};

HyperbolicInit make_hyperbolic_init(Field v0, Field w0, double theta2);

/// Picard ball and stopping parameters; radius must satisfy
/// r < kappa / (2 C) with the embedding constant C of the basis in use.
struct PicardSettings {
    double radius = 0.0;
    double tol = 1e-10;
    int max_iter = 200;
};

void validate(const PicardSettings& s, const HyperbolicInit& init, const EigenBasis& basis);

/// Reaction term of the gap equation evaluated nodewise:
///   G(w_tilde) = -beta_F / (w_tilde + theta2)^2 + beta_p (theta1 - 1).
/// The pressure coupling beta_p * u_tilde is added by the caller.
/// Throws quench_imminent_error if the gap is nonpositive at any node.
Field g_reaction(const Field& w_tilde, const PhysicalConstants& c);

/// Constant chain for the local Lipschitz modulus of G on the radius-r ball:
///   L_G = beta_F C2,  C2 = 2 C1^3,  C1^2 = 4C/kappa^2 + 16 Ctilde^2/kappa^4,
///   Ctilde = kappa/(2C) + |w0|_H1,
/// with C the embedding constant. Deliberately conservative; the verification
/// harness cross-checks it against a random-pair supremum.
double estimate_L_G(const HyperbolicInit& init, const PhysicalConstants& c,
                    const EigenBasis& basis);

/// Strong-continuity time of the wave group at the initial state: the largest
/// dyadic t <= t_max with |T(s)Phi0 - Phi0| <= r/2 for sampled s in (0, t].
double strong_continuity_time(const HyperbolicInit& init, const PhysicalConstants& c,
                              const PicardSettings& s, const EigenBasis& basis,
                              double t_max = 1.0);

struct HorizonT0 {
    double value = 0.0;
    int active_term = 0;             // index of the minimizing term below
    std::array<double, 3> terms{};   // delta_o, 1/(2 M0 L_G), ball-confinement term
    double g0_h1 = 0.0;              // |G(w0_tilde) + beta_p u0_tilde|_H1
};

/// Admissible Picard horizon
///   T0 = min{ delta_o, 1/(2 M0 L_G),
///             kappa / (2 M0 [(L_G + 1) kappa + 2 C |G0|_H1]) }.
/// u_tilde0 = u(0) - theta1 enters through G0.
HorizonT0 horizon_T0(const PhysicalConstants& c, const HyperbolicInit& init,
                     const PicardSettings& s, double M0, double L_G, double delta_o,
                     const Field& u_tilde0, const EigenBasis& basis);

struct WaveSolve {
    WavePath path;
    int iterations = 0;
    double final_ratio = 0.0;
    std::vector<double> ratio_history;
    double min_gap = 0.0;
};

/// Solution operator of the wave subsystem for a prescribed pressure path:
/// Picard iteration on the integral formulation
///   (v, w_tilde)(t) = T(t) Phi0 + int_0^t T(t-s) (G(w_tilde)(s) + beta_p u_tilde(s), 0) ds
/// until the successive-iterate sup distance in the state norm drops below
/// s.tol. u_path carries the full pressure u (trace theta1). The returned gap
/// satisfies w_tilde + theta2 >= kappa/2 at every node and time; leaving that
/// ball raises horizon_error.
WaveSolve solve_wave_picard(const FieldPath& u_path, const HyperbolicInit& init,
                            const PhysicalConstants& c, const PicardSettings& s,
                            const EigenBasis& basis);

struct FrechetSolve {
    FieldPath v_dot;  // v'(u) q
    FieldPath w_dot;  // w'(u) q
    int iterations = 0;
    double final_ratio = 0.0;
};

/// Directional derivative of the solution operator, from the Volterra system
///   [w'(u)q](t) = int_0^t T21(t-s) { beta_p q(s) + 2 beta_F [w'(u)q](s)/w(u)^3(s) } ds
/// and its v-component analogue, solved by Picard iteration on the whole path.
/// Both components vanish identically at t = 0.
FrechetSolve frechet_W(const FieldPath& u_path, const FieldPath& q_path,
                       const WaveSolve& solved, const PhysicalConstants& c,
                       const PicardSettings& s, const EigenBasis& basis);

}  // namespace memslab
