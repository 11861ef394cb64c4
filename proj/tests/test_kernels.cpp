#include <random>
#include <vector>

#include "doctest.h"
#include "memslab/kernels.hpp"

// The OpenMP kernels must agree with the serial reference bit for bit: each
// output element is computed by the same fixed-order inner loop, only the
// outer loop is distributed.

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = unit(rng);
    return v;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference exactly") {
    using namespace memslab::kernels;
    std::mt19937_64 rng(42);
    const int m = 96, n = 160;
    const auto table = random_vec(rng, m * n);
    const auto values = random_vec(rng, n);
    const auto omega = [&] {
        auto w = random_vec(rng, m);
        for (auto& x : w) x = 1.0 + std::abs(x);
        return w;
    }();

    SUBCASE("sine_analysis") {
        std::vector<double> a(m), b(m);
        sine_analysis(table.data(), m, n, values.data(), 0.125, a.data());
        serial::sine_analysis(table.data(), m, n, values.data(), 0.125, b.data());
        for (int k = 0; k < m; ++k) CHECK(a[k] == b[k]);
    }

    SUBCASE("sine_synthesis") {
        const auto coeffs = random_vec(rng, m);
        std::vector<double> a(n), b(n);
        sine_synthesis(table.data(), m, n, coeffs.data(), a.data());
        serial::sine_synthesis(table.data(), m, n, coeffs.data(), b.data());
        for (int j = 0; j < n; ++j) CHECK(a[j] == b[j]);
    }

    SUBCASE("rotate_modes") {
        const auto v = random_vec(rng, m);
        const auto w = random_vec(rng, m);
        std::vector<double> va(m), wa(m), vb(m), wb(m);
        rotate_modes(omega.data(), m, 0.37, v.data(), w.data(), va.data(), wa.data());
        serial::rotate_modes(omega.data(), m, 0.37, v.data(), w.data(), vb.data(), wb.data());
        for (int k = 0; k < m; ++k) {
            CHECK(va[k] == vb[k]);
            CHECK(wa[k] == wb[k]);
        }
    }

    SUBCASE("duhamel_modes") {
        const int steps = 33;
        const auto g = random_vec(rng, (steps + 1) * m);
        std::vector<double> va((steps + 1) * m), wa((steps + 1) * m);
        std::vector<double> vb((steps + 1) * m), wb((steps + 1) * m);
        duhamel_modes(omega.data(), m, 0.01, steps, g.data(), va.data(), wa.data());
        serial::duhamel_modes(omega.data(), m, 0.01, steps, g.data(), vb.data(), wb.data());
        for (std::size_t i = 0; i < va.size(); ++i) {
            CHECK(va[i] == vb[i]);
            CHECK(wa[i] == wb[i]);
        }
    }

    SUBCASE("dense_matvec") {
        const int nn = 120;
        const auto a_mat = random_vec(rng, nn * nn);
        const auto x = random_vec(rng, nn);
        std::vector<double> ya(nn), yb(nn);
        dense_matvec(a_mat.data(), nn, x.data(), ya.data());
        serial::dense_matvec(a_mat.data(), nn, x.data(), yb.data());
        for (int i = 0; i < nn; ++i) CHECK(ya[i] == yb[i]);
    }
}

TEST_CASE("results do not depend on the worker count") {
    using namespace memslab::kernels;
    std::mt19937_64 rng(7);
    const int m = 64, n = 64;
    const auto table = random_vec(rng, m * n);
    const auto values = random_vec(rng, n);

    const int saved = worker_count();
    std::vector<double> one(m), many(m);
    set_worker_count(1);
    sine_analysis(table.data(), m, n, values.data(), 1.0, one.data());
    set_worker_count(4);
    sine_analysis(table.data(), m, n, values.data(), 1.0, many.data());
    set_worker_count(saved);
    for (int k = 0; k < m; ++k) CHECK(one[k] == many[k]);
}
