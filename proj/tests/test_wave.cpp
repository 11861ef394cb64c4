#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "memslab/random_fields.hpp"
#include "memslab/wave.hpp"

using namespace memslab;

namespace {
constexpr double pi = std::numbers::pi;

Field sampled(const Grid1D& grid, const std::function<double(double)>& f) {
    Field out(grid.n_nodes);
    for (int j = 0; j < grid.n_nodes; ++j) out.values[j] = f(grid.x(j));
    return out;
}

double state_distance(const EigenBasis& b, const WaveState& x, const WaveState& y) {
    Field dv(x.v.size()), dw(x.v.size());
    for (int i = 0; i < x.v.size(); ++i) {
        dv.values[i] = x.v.values[i] - y.v.values[i];
        dw.values[i] = x.w_tilde.values[i] - y.w_tilde.values[i];
    }
    return state_norm(b, WaveState(dv, dw));
}

}  // namespace

TEST_CASE("group action: identity, half period, quarter period") {
    const Grid1D g = build_grid(1.0, 127);
    const EigenBasis b = sine_eigenbasis(g, 127);

    const Field sin1 = sampled(g, [](double x) { return std::sin(pi * x); });
    const Field sin2 = sampled(g, [](double x) { return std::sin(2.0 * pi * x); });
    const Field zero(g.n_nodes);

    SUBCASE("t = 0 is the identity") {
        const WaveState s(sin2, sin1);
        const WaveState out = apply_semigroup(0.0, s, b);
        for (int j = 0; j < g.n_nodes; ++j) {
            CHECK(std::abs(out.v.values[j] - s.v.values[j]) <= 1e-13);
            CHECK(std::abs(out.w_tilde.values[j] - s.w_tilde.values[j]) <= 1e-13);
        }
    }

    SUBCASE("(0, sin(pi x)) at t = 1 flips sign") {
        const WaveState out = apply_semigroup(1.0, WaveState(zero, sin1), b);
        for (int j = 0; j < g.n_nodes; ++j) {
            CHECK(out.w_tilde.values[j] == doctest::Approx(-sin1.values[j]).epsilon(1e-12));
            CHECK(out.v.values[j] == doctest::Approx(0.0).epsilon(1e-10));
        }
    }

    SUBCASE("(sin(2 pi x), 0) at t = 0.25 transfers to the gap") {
        // omega = 2 pi: quarter period, w picks up v/omega
        const WaveState out = apply_semigroup(0.25, WaveState(sin2, zero), b);
        for (int j = 0; j < g.n_nodes; ++j) {
            CHECK(out.w_tilde.values[j] ==
                  doctest::Approx(sin2.values[j] / (2.0 * pi)).epsilon(1e-12));
            CHECK(out.v.values[j] == doctest::Approx(0.0).epsilon(1e-10));
        }
    }

    SUBCASE("(0, sin(pi x)) returns after a full period") {
        const WaveState out = apply_semigroup(2.0, WaveState(zero, sin1), b);
        for (int j = 0; j < g.n_nodes; ++j)
            CHECK(out.w_tilde.values[j] == doctest::Approx(sin1.values[j]).epsilon(1e-12));
    }
}

TEST_CASE("group properties: isometry, composition, inverse") {
    const Grid1D g = build_grid(1.0, 64);
    const EigenBasis b = sine_eigenbasis(g, 64);
    std::mt19937_64 rng(19);

    for (int trial = 0; trial < 10; ++trial) {
        const WaveState s(random_band_limited(rng, b, 16, 1.0),
                          random_band_limited(rng, b, 16, 1.0));
        const double norm0 = state_norm(b, s);
        for (double t : {0.1, 1.0, 10.0}) {
            const WaveState moved = apply_semigroup(t, s, b);
            CHECK(std::abs(state_norm(b, moved) - norm0) <= 1e-10 * norm0);

            const WaveState composed = apply_semigroup(0.3, apply_semigroup(t - 0.3, s, b), b);
            CHECK(state_distance(b, composed, moved) <= 1e-10 * norm0);

            const WaveState back = apply_semigroup(-t, moved, b);
            CHECK(state_distance(b, back, s) <= 1e-10 * norm0);
        }
    }
}

TEST_CASE("duhamel with zero forcing reproduces the group orbit") {
    const Grid1D g = build_grid(1.0, 64);
    const EigenBasis b = sine_eigenbasis(g, 64);
    std::mt19937_64 rng(23);
    const WaveState init(random_band_limited(rng, b, 16, 1.0),
                         random_band_limited(rng, b, 16, 1.0));

    FieldPath forcing;
    forcing.horizon = 0.5;
    forcing.n_steps = 32;
    forcing.entries.assign(33, Field(g.n_nodes));

    const WavePath path = duhamel(init, forcing, b);
    for (int j = 0; j <= 32; ++j) {
        const WaveState expected = apply_semigroup(forcing.time(j), init, b);
        CHECK(state_distance(b, path.entries[j], expected) <= 1e-12);
    }
}

TEST_CASE("duhamel matches closed forms for single-mode forcing") {
    const Grid1D g = build_grid(1.0, 127);
    const EigenBasis b = sine_eigenbasis(g, 127);
    const Field shape = sampled(g, [](double x) { return std::sin(pi * x); });
    const double omega = pi;
    const double T = 0.1;
    const int steps = 512;
    const WaveState zero_state(g.n_nodes);

    SUBCASE("resonant forcing sin(omega s) phi_1") {
        FieldPath forcing;
        forcing.horizon = T;
        forcing.n_steps = steps;
        for (int j = 0; j <= steps; ++j) {
            Field f(g.n_nodes);
            const double amp = std::sin(omega * forcing.time(j));
            for (int i = 0; i < g.n_nodes; ++i) f.values[i] = amp * shape.values[i];
            forcing.entries.push_back(std::move(f));
        }
        const WavePath path = duhamel(zero_state, forcing, b);
        for (int j : {steps / 2, steps}) {
            const double t = forcing.time(j);
            const double w_exact =
                std::sin(omega * t) / (2.0 * omega * omega) -
                t * std::cos(omega * t) / (2.0 * omega);
            const double v_exact = t * std::sin(omega * t) / 2.0;
            const int mid = g.n_nodes / 2;  // x = 0.5, where phi_1 = 1
            CHECK(path.entries[j].w_tilde.values[mid] == doctest::Approx(w_exact).epsilon(1e-8));
            CHECK(path.entries[j].v.values[mid] == doctest::Approx(v_exact).epsilon(1e-8));
        }
    }

    SUBCASE("non-resonant forcing sin(omega s / 2) phi_1") {
        const double cap_omega = omega / 2.0;
        FieldPath forcing;
        forcing.horizon = T;
        forcing.n_steps = steps;
        for (int j = 0; j <= steps; ++j) {
            Field f(g.n_nodes);
            const double amp = std::sin(cap_omega * forcing.time(j));
            for (int i = 0; i < g.n_nodes; ++i) f.values[i] = amp * shape.values[i];
            forcing.entries.push_back(std::move(f));
        }
        const WavePath path = duhamel(zero_state, forcing, b);
        const double t = T;
        const double denom = omega * omega - cap_omega * cap_omega;
        const double w_exact =
            (omega * std::sin(cap_omega * t) - cap_omega * std::sin(omega * t)) /
            (omega * denom);
        const double v_exact =
            cap_omega * (std::cos(cap_omega * t) - std::cos(omega * t)) / denom;
        const int mid = g.n_nodes / 2;
        CHECK(path.entries[steps].w_tilde.values[mid] ==
              doctest::Approx(w_exact).epsilon(1e-8));
        CHECK(path.entries[steps].v.values[mid] == doctest::Approx(v_exact).epsilon(1e-8));
    }
}

TEST_CASE("constant unit forcing reproduces w = t^2/2 before boundary influence") {
    // forced linear wave with zero data: at x = 0.5 the solution is t^2/2
    // until the boundary signal arrives at t = 0.5
    const Grid1D g = build_grid(1.0, 511);
    const EigenBasis b = sine_eigenbasis(g, 256);
    FieldPath forcing;
    forcing.horizon = 0.25;
    forcing.n_steps = 128;
    forcing.entries.assign(129, Field(g.n_nodes, 1.0));

    const WavePath path = duhamel(WaveState(g.n_nodes), forcing, b);
    const int mid = g.n_nodes / 2;
    CHECK(path.entries[128].w_tilde.values[mid] == doctest::Approx(0.03125).epsilon(2e-3));
}
