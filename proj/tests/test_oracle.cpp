#include <catch2/catch_amalgamated.hpp>

#include "tests/support/fixtures.hpp"
#include "tests/support/oracle.hpp"

using namespace cipherlint;
using testsupport::fixture;

TEST_CASE("the interpreter agrees with every resolved fixture finding") {
    testsupport::OracleOutcome outcome = testsupport::oracle_check_tree(testsupport::fixture_root());
    INFO("files: " << outcome.files << ", values checked: " << outcome.checked);
    for (const std::string& note : outcome.notes) {
        INFO(note);
        CHECK(false);
    }
    CHECK(outcome.mismatches == 0);
    // the sweep is only meaningful if it actually exercised resolved values
    CHECK(outcome.files > 10);
    CHECK(outcome.checked > 20);
}

TEST_CASE("the oracle notices a deliberately wrong value") {
    // sanity check of the harness itself: compare against a falsified finding
    auto path = fixture("seeded/r5_violation.py");
    auto analyzed = testsupport::analyze_path(path);
    REQUIRE(analyzed.findings.size() == 1);
    std::vector<Finding> tampered = analyzed.findings;
    REQUIRE(tampered[0].resolved);
    tampered[0].resolved = ConstValue::integer(12345);
    testsupport::OracleOutcome outcome;
    testsupport::oracle_check_file(path, tampered, outcome);
    CHECK(outcome.mismatches == 1);
}
