#pragma once

#include <string>
#include <vector>

#include "memslab/config.hpp"

// Named, repeatable verification programs: each suite executes the invariants
// of one solver layer (group identities, contraction certificates, Holder
// fits, coercivity and sectoriality diagnostics, steady-state comparisons,
// Sobolev-inequality constants) against seeded probes. Reports are
// deterministic for a fixed config and seed.

namespace memslab {

struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // pass iff measured <= bound * (1 + slack) + tiny
    bool pass = false;
    std::string detail;  // mesh levels, probe counts

    bool operator<(const CheckRecord& other) const { return name < other.name; }
};

struct VerificationReport {
    std::string suite;
    std::string fingerprint;  // grid sizes and seed
    std::vector<CheckRecord> checks;

    int failures() const {
        int n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }
};

/// Suites: semigroup, hyperbolic, frechet, parabolic, coupled, steady,
/// appendixA. Unknown names raise config_error.
VerificationReport run_suite(const std::string& name, const SolverConfig& cfg);

const std::vector<std::string>& suite_names();

std::string report_text(const VerificationReport& report);
std::string report_json(const VerificationReport& report);

/// Static map: every invariant of the solver modules appears in exactly one
/// suite; run_suite emits a check with the mapped name.
struct CoverageEntry {
    std::string invariant;
    std::string suite;
};
const std::vector<CoverageEntry>& coverage_manifest();

}  // namespace memslab
