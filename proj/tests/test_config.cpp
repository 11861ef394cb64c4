#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "memslab/config.hpp"
#include "memslab/errors.hpp"
#include "memslab/io.hpp"

using namespace memslab;

TEST_CASE("config round trip") {
    SolverConfig cfg;
    cfg.phys = {0.7, 2.5, 1.3, 0.9};
    cfg.init_u = "mode:2:0.05";
    cfg.init_w = "bump:0.03";
    cfg.n_nodes = 63;
    cfg.n_modes = 31;
    cfg.horizon = 0.037;
    cfg.n_steps = 48;
    cfg.alpha = 0.21;
    cfg.picard_tol = 3e-11;
    cfg.output_dir = "some/dir";
    cfg.seed = 99;
    const SolverConfig back = parse_config(emit_config(cfg));
    CHECK(back == cfg);
    CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("unknown keys and malformed values are field-level errors") {
    CHECK_THROWS_WITH_AS(parse_config("bogus.key=1\n"), "unknown config key 'bogus.key'",
                         config_error);
    CHECK_THROWS_AS(parse_config("physics.beta_F=abc\n"), config_error);
    CHECK_THROWS_AS(parse_config("no equals sign"), config_error);
}

TEST_CASE("validation pins the config invariants") {
    SolverConfig cfg;  // defaults are valid
    validate_config(cfg);

    SolverConfig bad = cfg;
    bad.phys.beta_F = 0.0;
    CHECK_THROWS_AS(validate_config(bad), config_error);

    bad = cfg;
    bad.n_modes = bad.n_nodes + 1;  // aliasing
    CHECK_THROWS_AS(validate_config(bad), config_error);

    bad = cfg;
    bad.alpha = 0.3;  // outside (0, 1/4)
    CHECK_THROWS_AS(validate_config(bad), config_error);

    bad = cfg;
    bad.picard_radius = 10.0;  // violates r < kappa/(2C)
    CHECK_THROWS_AS(validate_config(bad), config_error);

    bad = cfg;
    bad.init_w = "mode:1:-2.0";  // gap would touch zero
    CHECK_THROWS_AS(validate_config(bad), config_error);
}

TEST_CASE("named profiles") {
    const Grid1D g = build_grid(1.0, 31);
    SolverConfig cfg;
    cfg.phys.theta1 = 2.0;
    cfg.n_nodes = 31;

    SUBCASE("equilibrium and zero") {
        const InitialData data = make_initial_data(cfg, g);
        for (int j = 0; j < g.n_nodes; ++j) {
            CHECK(data.u0.values[j] == 2.0);
            CHECK(data.v0.values[j] == 0.0);
            CHECK(data.w0.values[j] == 1.0);
        }
    }

    SUBCASE("mode profile") {
        cfg.init_u = "mode:2:0.1";
        const InitialData data = make_initial_data(cfg, g);
        for (int j = 0; j < g.n_nodes; ++j)
            CHECK(data.u0.values[j] ==
                  doctest::Approx(2.0 + 0.1 * std::sin(2.0 * 3.14159265358979 * g.x(j))));
    }

    SUBCASE("bump vanishes at the ends and peaks in the middle") {
        cfg.init_w = "bump:0.2";
        const InitialData data = make_initial_data(cfg, g);
        CHECK(data.w0.values[g.n_nodes / 2] == doctest::Approx(1.2));
        CHECK(data.w0.values[0] < 1.0 + 1e-3);
    }

    SUBCASE("file profile round trips through the field CSV") {
        Field f(g.n_nodes);
        for (int j = 0; j < g.n_nodes; ++j) f.values[j] = 1.0 + 0.01 * j;
        write_field_csv("/tmp/memslab_profile.csv", g, f);
        cfg.init_u = "file:/tmp/memslab_profile.csv";
        const InitialData data = make_initial_data(cfg, g);
        for (int j = 0; j < g.n_nodes; ++j)
            CHECK(data.u0.values[j] == doctest::Approx(f.values[j]));
    }

    SUBCASE("unknown profile") {
        cfg.init_u = "wiggle";
        CHECK_THROWS_AS(make_initial_data(cfg, g), config_error);
    }
}

TEST_CASE("derived defaults") {
    SolverConfig cfg;
    cfg.phys.theta2 = 2.0;
    CHECK(resolved_quench_threshold(cfg) == doctest::Approx(0.02));
    cfg.quench_threshold = 0.5;
    CHECK(resolved_quench_threshold(cfg) == 0.5);
}

TEST_CASE("modal coefficients serialize as a JSON array") {
    write_field_json("/tmp/memslab_modes.json", {1.0, -0.25, 3e-7});
    std::ifstream in("/tmp/memslab_modes.json");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.rfind("[1,-0.25,", 0) == 0);
    CHECK(text.find("e-07]") != std::string::npos);
}

TEST_CASE("trajectory CSV round trip") {
    const Grid1D g = build_grid(1.0, 15);
    FieldPath p;
    p.horizon = 0.5;
    p.n_steps = 4;
    for (int j = 0; j <= 4; ++j) {
        Field f(g.n_nodes);
        for (int i = 0; i < g.n_nodes; ++i) f.values[i] = std::sin(0.3 * (j + 1) * (i + 1));
        p.entries.push_back(std::move(f));
    }
    write_path_csv("/tmp/memslab_path.csv", g, p);
    const FieldPath back = read_path_csv("/tmp/memslab_path.csv", g);
    REQUIRE(back.size() == p.size());
    CHECK(back.horizon == doctest::Approx(p.horizon));
    for (int j = 0; j <= 4; ++j)
        for (int i = 0; i < g.n_nodes; ++i)
            CHECK(back.entries[j].values[i] == p.entries[j].values[i]);
}
