#include <map>
#include <set>

#include "doctest.h"
#include "memslab/verify.hpp"

using namespace memslab;

TEST_CASE("coverage manifest maps every invariant to exactly one suite") {
    std::set<std::string> seen;
    std::map<std::string, std::set<std::string>> by_suite;
    for (const auto& entry : coverage_manifest()) {
        INFO(entry.invariant);
        CHECK(seen.insert(entry.invariant).second);  // unique
        by_suite[entry.suite].insert(entry.invariant);
    }
    CHECK(seen.size() == 25);

    // the mapped suite actually emits each check, and identical config+seed
    // produces an identical report
    SolverConfig cfg;
    cfg.phys = {1.0, 1.0, 2.0, 1.0};
    cfg.n_nodes = 63;
    cfg.n_modes = 31;
    cfg.alpha = 0.2;
    for (const auto& [suite, invariants] : by_suite) {
        const VerificationReport rep = run_suite(suite, cfg);
        std::set<std::string> names;
        for (const auto& c : rep.checks) names.insert(c.name);
        for (const auto& inv : invariants) {
            INFO(suite, "/", inv);
            CHECK(names.count(inv) == 1);
        }
        const VerificationReport again = run_suite(suite, cfg);
        REQUIRE(again.checks.size() == rep.checks.size());
        for (std::size_t i = 0; i < rep.checks.size(); ++i) {
            CHECK(again.checks[i].name == rep.checks[i].name);
            CHECK(again.checks[i].measured == rep.checks[i].measured);  // bit identical
            CHECK(again.checks[i].pass == rep.checks[i].pass);
        }
        CHECK(rep.failures() == 0);
    }
}

TEST_CASE("unknown suite raises a configuration error") {
    SolverConfig cfg;
    CHECK_THROWS(run_suite("bogus", cfg));
}
