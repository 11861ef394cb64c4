#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "memslab/config.hpp"
#include "memslab/grid.hpp"
#include "memslab/hyperbolic.hpp"

namespace memslab {

struct SemigroupCache;  // lazy eigendecomposition, defined in parabolic.cpp

/// Dense Dirichlet realization of a second-order operator on the interior
/// nodes, together with the assembly coefficients needed by the elliptic-form
/// diagnostics.
struct LinearOperator1D {
    Grid1D grid;
    std::string description;
    std::vector<double> dense;  // n x n, row-major

    std::vector<double> a_half;    // n+1 interface values of w0^3 u0
    std::vector<double> inv_w;     // 1/w0 at the nodes
    std::vector<double> b_nodes;   // w0^3 u0' at the nodes
    std::vector<double> v_over_w;  // v0/w0 at the nodes

    mutable std::shared_ptr<SemigroupCache> cache;

    int size() const { return grid.n_nodes; }
    std::vector<double> apply(const std::vector<double>& x) const;
    Field apply(const Field& f) const;

    /// Value of the leading quadratic form h sum (q/w0) [a q']' at a nodal
    /// vector, the discrete counterpart of the integral the elliptic estimate
    /// bounds from below.
    double principal_form(const std::vector<double>& q) const;
};

/// Second-order finite-difference assembly of the linearization around the
/// initial data,
///   P q = (1/w0) d/dx { w0^3 u0 q' + (w0^3 u0') q } - (v0/w0) q,
/// with homogeneous Dirichlet rows eliminated; u0' is computed spectrally.
/// u0, v0, w0 are full nodal values with traces theta1, 0, theta2.
LinearOperator1D assemble_linearization(const Field& u0, const Field& v0, const Field& w0,
                                        const PhysicalConstants& c, const Grid1D& grid);

struct GardingReport {
    double K = 0.0;
    double K_o = 0.0;
    double min_form_ratio = 0.0;  // worst (|form| + K_o |q|^2) / |q'|^2 over probes
    double k2_tight = 0.0;        // sup |u0 w0 w0'|, drives the Young split
    double k2_majorant = 0.0;     // C |u0|_H1 |w0|_H2^2 majorant
    double epsilon1 = 0.0;        // inf u0
    double kappa = 0.0;           // inf w0
    int probes = 0;
    int violations = 0;
    bool valid() const { return K > 0.0 && violations == 0; }
};

/// Coercivity constants for |form(q)| >= K |q'|^2 - K_o |q|^2. The cross term
/// is bounded by k2_tight |q| |q'| and split by Young's inequality with
/// eps^2 = eps1 kappa^2 / (2 k2_tight), giving K = eps1 kappa^2 / 2; when the
/// cross term vanishes (constant coefficients) K = eps1 kappa^2 and K_o = 0.
/// The inequality is then verified on seeded band-limited probes.
GardingReport garding_constants(const LinearOperator1D& op, const Field& u0,
                                const Field& w0, const PhysicalConstants& c,
                                const EigenBasis& basis, std::uint64_t seed = 1,
                                int n_probes = 120);

/// e^{tP} f through the cached eigendecomposition of the dense operator
/// (scaling-and-squaring fallback if the eigenbasis is ill-conditioned).
Field analytic_step(const LinearOperator1D& op, double t, const Field& f);

/// Mild solution of phi' = P phi + psi(t), phi(0) = phi0 on psi's time grid:
/// the forcing is interpolated linearly on each step and integrated exactly
/// against the semigroup kernel (phi-function weights), so stiff modes are
/// handled without step-size restrictions.
FieldPath semigroup_duhamel(const LinearOperator1D& op, const Field& phi0,
                            const FieldPath& psi);

/// Largest observed |e^{tP} f| / |f| over the calls made so far.
double observed_step_gain(const LinearOperator1D& op);

/// Spectrum top and resolvent-ray constant of the dense operator:
/// omega = max Re lambda, and M = max over s in {1, 10, ..., 1e4} of
/// s * |(omega + s - P)^{-1}|_2.
struct SectorFit {
    double omega = 0.0;
    double M = 0.0;
};
SectorFit sector_fit(const LinearOperator1D& op);

/// Quasilinear right-hand side
///   F(u~) = (1/w) d/dx ( w^3 (u~+theta1) u~' ) - (v/w)(u~+theta1),
/// evaluated with spectral derivatives of the zero-trace factors and nodal
/// products. w carries full gap values; requires w >= kappa_floor nodewise.
Field reynolds_rhs(const SpectralOps& ops, const Field& u_tilde, const Field& v,
                   const Field& w, const PhysicalConstants& c, double kappa_floor);

/// Directional derivative of F at a path, assembled compositionally from the
/// solved wave trajectory and the Volterra derivative (chain rule through the
/// solution operator).
FieldPath apply_F_prime(const SpectralOps& ops, const FieldPath& u_path,
                        const FieldPath& q_path, const WaveSolve& solved,
                        const FrechetSolve& wprime, const PhysicalConstants& c,
                        double kappa_floor);

struct CoupledDiagnostics {
    std::vector<double> outer_ratios;
    double final_ratio = 0.0;
    int outer_iterations = 0;
    double min_gap = 0.0;
    double kappa = 0.0;
    double L_G = 0.0;
    double delta_o = 0.0;
    double T0 = 0.0;
    int T0_active_term = 0;
    double T1 = 0.0;  // 0 when no full certificate was computed
    bool horizon_certified = false;
    int wave_iterations = 0;
    double wave_ratio = 0.0;
    double garding_K = 0.0;
    double garding_Ko = 0.0;
    double sector_omega = 0.0;
    double sector_M = 0.0;
};

struct CoupledSolution {
    FieldPath u_path, v_path, w_path;  // full nodal values
    CoupledDiagnostics diag;
};

/// Estimated horizon certificates for the outer contraction. T0 comes from
/// the wave subsystem; T0_star from the parabolic contraction constant with
/// empirically estimated L_e, L_B, gamma0 and I(T0); delta_star from
/// bisection on the first Gamma sweep. T1 = min of the three. The starred
/// quantities are heuristics: the linear-problem constant I is probed, not
/// proved.
struct HorizonCertificates {
    double L_G = 0.0;
    double delta_o = 0.0;
    double T0 = 0.0;
    double gamma0 = 0.0;
    double I_T0 = 0.0;
    double L_e = 0.0;
    double L_B = 0.0;
    double P_norm = 0.0;  // |P|_{H2 -> L2} probe estimate
    double T0_star = 0.0;
    double delta_star = 0.0;
    double T1 = 0.0;
};

HorizonCertificates estimate_horizons(const SolverConfig& cfg);

/// T0_star formula given the constants:
///   [ 2 gamma0 I(T0) (L_e + |P| + 2 L_B (1 + |u0|_H2 + kappa/(2C))) ]^(-1/alpha).
double horizon_T0_star(const SolverConfig& cfg, double L_e, double L_B, double gamma0,
                       double I_T0, double P_norm);

/// Outer fixed-point iteration for the coupled system: each sweep refreshes
/// (v, w) = W(u) with the wave Picard solver, evaluates F along the path and
/// applies the analytic-semigroup update
///   Gamma(u~)(t) = e^{tP} u~0 + int_0^t e^{(t-s)P} { F(u~)(s) - P u~(s) } ds,
/// stopping when the sup-H2 distance of successive pressure paths drops below
/// cfg.gamma_tol. Certificates, when supplied, are recorded in the
/// diagnostics along with whether cfg.horizon is inside them.
CoupledSolution gamma_fixed_point(const SolverConfig& cfg,
                                  const HorizonCertificates* certs = nullptr);

}  // namespace memslab
