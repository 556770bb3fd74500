#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polyagg {

// One failed case of a law suite, with enough data to replay it.
struct LawFailure {
    int case_index = 0;
    std::uint64_t seed = 0; // the engine seed that reproduces this case
    std::string witness;
};

struct LawSuiteReport {
    std::string suite;
    int cases_run = 0;
    std::vector<LawFailure> failures;
    double elapsed_seconds = 0;

    bool ok() const { return failures.empty(); }
};

// Names accepted by run_suite, in a stable order.
std::vector<std::string> law_suite_names();

// Runs n_cases seeded checks of the named suite.  Deterministic given
// (name, seed, n_cases, cap); throws UnknownSuite for unknown names.
LawSuiteReport run_suite(const std::string& name, std::uint64_t seed, int n_cases,
                         std::uint64_t cap = 100000);

std::string report_to_text(const LawSuiteReport& r);
std::string report_to_json(const LawSuiteReport& r);

} // namespace polyagg
