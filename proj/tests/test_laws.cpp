#include "doctest.h"

#include "polyagg/errors.hpp"
#include "polyagg/laws.hpp"

using namespace polyagg;

TEST_CASE("suite registry lists every suite and rejects unknown names") {
    auto names = law_suite_names();
    CHECK(names.size() == 12);
    for (const auto& n : names) {
        LawSuiteReport r = run_suite(n, 1, 1);
        CHECK(r.suite == n);
        CHECK(r.cases_run >= 1);
    }
    CHECK_THROWS_AS(run_suite("no-such-suite", 1, 1), UnknownSuite);
}

TEST_CASE("same seed gives an identical report, different seed may differ") {
    LawSuiteReport a = run_suite("poly-monoidal", 42, 10);
    LawSuiteReport b = run_suite("poly-monoidal", 42, 10);
    CHECK(a.cases_run == b.cases_run);
    REQUIRE(a.failures.size() == b.failures.size());
    for (size_t i = 0; i < a.failures.size(); ++i) {
        CHECK(a.failures[i].case_index == b.failures[i].case_index);
        CHECK(a.failures[i].seed == b.failures[i].seed);
        CHECK(a.failures[i].witness == b.failures[i].witness);
    }
}

TEST_CASE("small runs of every suite are green") {
    for (const auto& n : law_suite_names()) {
        LawSuiteReport r = run_suite(n, 7, 3);
        INFO(report_to_text(r));
        CHECK(r.ok());
    }
}

TEST_CASE("json report carries suite, counts and failures") {
    LawSuiteReport r = run_suite("mutation-sanity", 3, 5);
    std::string j = report_to_json(r);
    CHECK(j.find("\"suite\": \"mutation-sanity\"") != std::string::npos);
    CHECK(j.find("\"cases\": 5") != std::string::npos);
    CHECK(j.find("\"ok\": true") != std::string::npos);
    CHECK(j.find("\"failures\": []") != std::string::npos);
}
