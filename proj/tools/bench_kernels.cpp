// Throughput comparison of the OpenMP kernels against the serial reference.
// Build target `bench_kernels`; not part of the test suite.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "memslab/kernels.hpp"

using namespace memslab;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = unit(rng);
    return v;
}

template <class F>
double time_ms(int reps, F&& fn) {
    using clock = std::chrono::steady_clock;
    fn();  // warm up
    const auto start = clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto stop = clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-18s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::mt19937_64 rng(12345);
    const int m = 1024, n = 2047, steps = 512, nn = 512;

    const auto table = random_vec(rng, static_cast<std::size_t>(m) * n);
    const auto values = random_vec(rng, n);
    const auto coeffs = random_vec(rng, m);
    auto omega = random_vec(rng, m);
    for (auto& w : omega) w = 1.0 + std::abs(w) * 100.0;
    const auto forcing = random_vec(rng, static_cast<std::size_t>(steps + 1) * m);
    const auto matrix = random_vec(rng, static_cast<std::size_t>(nn) * nn);
    const auto x = random_vec(rng, nn);

    std::vector<double> out_m(m), out_n(n), out_m2(m);
    std::vector<double> out_path_a(forcing.size()), out_path_b(forcing.size());
    std::vector<double> out_nn(nn);

    std::printf("kernel                  serial     parallel   speedup  (%d workers)\n",
                kernels::worker_count());

    row("sine_analysis",
        time_ms(20, [&] {
            kernels::serial::sine_analysis(table.data(), m, n, values.data(), 0.5,
                                           out_m.data());
        }),
        time_ms(20, [&] {
            kernels::sine_analysis(table.data(), m, n, values.data(), 0.5, out_m.data());
        }));

    row("sine_synthesis",
        time_ms(20, [&] {
            kernels::serial::sine_synthesis(table.data(), m, n, coeffs.data(),
                                            out_n.data());
        }),
        time_ms(20, [&] {
            kernels::sine_synthesis(table.data(), m, n, coeffs.data(), out_n.data());
        }));

    row("rotate_modes",
        time_ms(200, [&] {
            kernels::serial::rotate_modes(omega.data(), m, 0.37, coeffs.data(),
                                          out_m.data(), out_m2.data(), out_m.data());
        }),
        time_ms(200, [&] {
            kernels::rotate_modes(omega.data(), m, 0.37, coeffs.data(), out_m.data(),
                                  out_m2.data(), out_m.data());
        }));

    row("duhamel_modes",
        time_ms(5, [&] {
            kernels::serial::duhamel_modes(omega.data(), m, 1e-3, steps, forcing.data(),
                                           out_path_a.data(), out_path_b.data());
        }),
        time_ms(5, [&] {
            kernels::duhamel_modes(omega.data(), m, 1e-3, steps, forcing.data(),
                                   out_path_a.data(), out_path_b.data());
        }));

    row("dense_matvec",
        time_ms(100, [&] {
            kernels::serial::dense_matvec(matrix.data(), nn, x.data(), out_nn.data());
        }),
        time_ms(100, [&] {
            kernels::dense_matvec(matrix.data(), nn, x.data(), out_nn.data());
        }));

    return 0;
}
