// Acceptance gate: one line per criterion, each a law suite run with a
// pinned case count and time budget.  Exits nonzero if any line fails.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "polyagg/laws.hpp"

int main() {
    std::uint64_t seed = 1;
    if (const char* env = std::getenv("POLYAGG_SEED")) seed = std::stoull(env);

    struct Criterion {
        const char* label;
        const char* suite;
        int cases;
        double budget_seconds;
    };
    const std::vector<Criterion> criteria = {
        {"poly monoidal structure vs brute force", "poly-monoidal", 500, 5.0},
        {"tensor/coclosure adjunction counts", "poly-adjunctions", 200, 10.0},
        {"category <-> comonoid round trip + mutations", "category-roundtrip", 100, 5.0},
        {"composite bicomodules apply compositionally", "compositionality", 50, 30.0},
        {"duc-query engine vs nested-loop oracle", "query-oracle", 20, 5.0},
        {"data-migration adjunction counts", "migration-adjunctions", 100, 10.0},
        {"span duality involution and transposes", "span-duality", 200, 5.0},
        {"truncated finite-set skeleton", "fin-skeleton", 1, 2.0},
        {"finitary classification + reconstruction", "finitary-classification", 100, 5.0},
        {"aggregation coherence laws", "aggregation-coherence", 200, 5.0},
        {"commutative monoids as skeleton modules", "monoid-module", 2, 2.0},
    };

    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        polyagg::LawSuiteReport r = polyagg::run_suite(c.suite, seed, c.cases);
        bool in_budget = r.elapsed_seconds < c.budget_seconds;
        bool ok = r.ok() && in_budget;
        std::printf("[%2zu/11] %-46s %s (%d cases, %.2fs < %.0fs)\n", i + 1, c.label,
                    ok ? "pass" : "FAIL", r.cases_run, r.elapsed_seconds, c.budget_seconds);
        if (!r.ok())
            for (const auto& f : r.failures)
                std::printf("        case %d seed %llu: %s\n", f.case_index,
                            (unsigned long long)f.seed, f.witness.c_str());
        if (!in_budget) std::printf("        over time budget\n");
        failed += ok ? 0 : 1;
    }
    // the harness itself must catch planted violations
    polyagg::LawSuiteReport sanity = polyagg::run_suite("mutation-sanity", seed, 50);
    std::printf("[self ] mutation-detection sanity                    %s (%d cases, %.2fs)\n",
                sanity.ok() ? "pass" : "FAIL", sanity.cases_run, sanity.elapsed_seconds);
    failed += sanity.ok() ? 0 : 1;

    return failed == 0 ? 0 : 1;
}
