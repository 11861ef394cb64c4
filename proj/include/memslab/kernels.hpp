#pragma once

#include <cstddef>

// Hot inner loops shared by the spectral solvers. Every kernel exists twice:
// the default (OpenMP-parallel when compiled with OpenMP) version and a plain
// serial reference under kernels::serial. Both compute each output element
// with the same fixed-order inner summation, so results agree bit for bit and
// do not depend on the thread count. tests/test_kernels.cpp pins that down and
// tools/bench_kernels.cpp compares throughput.

namespace memslab::kernels {

/// coeffs[k] = scale * sum_j table[k*n + j] * values[j], k = 0..m-1.
void sine_analysis(const double* table, int m, int n, const double* values,
                   double scale, double* coeffs);

/// values[j] = sum_k coeffs[k] * table[k*n + j], j = 0..n-1.
void sine_synthesis(const double* table, int m, int n, const double* coeffs,
                    double* values);

/// Per-mode rotation of the wave pair (v, w) by angle omega[k]*t:
///   w_out = w cos(wt) + v sin(wt)/w,  v_out = -w w sin(wt) + v cos(wt).
void rotate_modes(const double* omega, int m, double t, const double* v_in,
                  const double* w_in, double* v_out, double* w_out);

/// Forced part of the variation-of-constants integral, per mode, with the
/// exact rotation kernel and trapezoid quadrature of the forcing samples.
/// g is (n_steps+1) x m, step-major; v_out/w_out use the same layout and
/// receive only the forced contribution (row 0 is zero).
void duhamel_modes(const double* omega, int m, double dt, int n_steps,
                   const double* g, double* v_out, double* w_out);

/// y = A x for a dense row-major n x n matrix.
void dense_matvec(const double* a, int n, const double* x, double* y);

namespace serial {
void sine_analysis(const double* table, int m, int n, const double* values,
                   double scale, double* coeffs);
void sine_synthesis(const double* table, int m, int n, const double* coeffs,
                    double* values);
void rotate_modes(const double* omega, int m, double t, const double* v_in,
                  const double* w_in, double* v_out, double* w_out);
void duhamel_modes(const double* omega, int m, double dt, int n_steps,
                   const double* g, double* v_out, double* w_out);
void dense_matvec(const double* a, int n, const double* x, double* y);
}  // namespace serial

/// Worker count used by the parallel kernels (1 when OpenMP is absent).
int worker_count();
void set_worker_count(int n);

}  // namespace memslab::kernels
