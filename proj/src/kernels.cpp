#include "memslab/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace memslab::kernels {

namespace {

inline double analysis_one(const double* table, int n, const double* values,
                           double scale, int k) {
    const double* row = table + static_cast<std::size_t>(k) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * values[j];
    return scale * acc;
}

inline double synthesis_one(const double* table, int m, int n,
                            const double* coeffs, int j) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += coeffs[k] * table[static_cast<std::size_t>(k) * n + j];
    return acc;
}

inline void rotate_one(double w, double t, double v, double x, double* v_out,
                       double* x_out) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    *x_out = x * c + v * s / w;
    *v_out = -x * w * s + v * c;
}

// Trapezoid prefix sums of cos(ws)g and sin(ws)g turn the convolution with
// the rotation kernel into two running integrals per mode:
//   w(t) = (sin(wt) A(t) - cos(wt) B(t)) / w,  v(t) = cos(wt) A(t) + sin(wt) B(t).
inline void duhamel_one(double w, double dt, int n_steps, const double* g,
                        int m, int k, double* v_out, double* w_out) {
    double acc_a = 0.0;
    double acc_b = 0.0;
    v_out[k] = 0.0;
    w_out[k] = 0.0;
    double c0 = 1.0;
    double s0 = 0.0;
    for (int j = 0; j < n_steps; ++j) {
        const double t1 = dt * (j + 1);
        const double c1 = std::cos(w * t1);
        const double s1 = std::sin(w * t1);
        const double g0 = g[static_cast<std::size_t>(j) * m + k];
        const double g1 = g[static_cast<std::size_t>(j + 1) * m + k];
        acc_a += 0.5 * dt * (c0 * g0 + c1 * g1);
        acc_b += 0.5 * dt * (s0 * g0 + s1 * g1);
        w_out[static_cast<std::size_t>(j + 1) * m + k] = (s1 * acc_a - c1 * acc_b) / w;
        v_out[static_cast<std::size_t>(j + 1) * m + k] = c1 * acc_a + s1 * acc_b;
        c0 = c1;
        s0 = s1;
    }
}

inline double matvec_one(const double* a, int n, const double* x, int i) {
    const double* row = a + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    return acc;
}

}  // namespace

void sine_analysis(const double* table, int m, int n, const double* values,
                   double scale, double* coeffs) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < m; ++k) coeffs[k] = analysis_one(table, n, values, scale, k);
}

void sine_synthesis(const double* table, int m, int n, const double* coeffs,
                    double* values) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) values[j] = synthesis_one(table, m, n, coeffs, j);
}

void rotate_modes(const double* omega, int m, double t, const double* v_in,
                  const double* w_in, double* v_out, double* w_out) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < m; ++k)
        rotate_one(omega[k], t, v_in[k], w_in[k], &v_out[k], &w_out[k]);
}

void duhamel_modes(const double* omega, int m, double dt, int n_steps,
                   const double* g, double* v_out, double* w_out) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < m; ++k)
        duhamel_one(omega[k], dt, n_steps, g, m, k, v_out, w_out);
}

void dense_matvec(const double* a, int n, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[i] = matvec_one(a, n, x, i);
}

namespace serial {

void sine_analysis(const double* table, int m, int n, const double* values,
                   double scale, double* coeffs) {
    for (int k = 0; k < m; ++k) coeffs[k] = analysis_one(table, n, values, scale, k);
}

void sine_synthesis(const double* table, int m, int n, const double* coeffs,
                    double* values) {
    for (int j = 0; j < n; ++j) values[j] = synthesis_one(table, m, n, coeffs, j);
}

void rotate_modes(const double* omega, int m, double t, const double* v_in,
                  const double* w_in, double* v_out, double* w_out) {
    for (int k = 0; k < m; ++k)
        rotate_one(omega[k], t, v_in[k], w_in[k], &v_out[k], &w_out[k]);
}

void duhamel_modes(const double* omega, int m, double dt, int n_steps,
                   const double* g, double* v_out, double* w_out) {
    for (int k = 0; k < m; ++k)
        duhamel_one(omega[k], dt, n_steps, g, m, k, v_out, w_out);
}

void dense_matvec(const double* a, int n, const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] = matvec_one(a, n, x, i);
}

}  // namespace serial

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace memslab::kernels
