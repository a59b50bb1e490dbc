#include <catch2/catch_amalgamated.hpp>

#include "tests/support/fixtures.hpp"

using namespace cipherlint;
using testsupport::analyze_path;
using testsupport::analyze_source;
using testsupport::fixture;

namespace {

Finding single(const testsupport::Analyzed& a) {
    REQUIRE(a.parsed);
    REQUIRE(a.findings.size() == 1);
    return a.findings.front();
}

} // namespace

TEST_CASE("ecb mode flagged definite at the call site") {
    auto a = analyze_path(fixture("seeded/r1_violation.py"));
    const Finding& f = single(a);
    CHECK(f.rule == Rule::R1);
    CHECK(f.library == Library::PyCrypto);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 5);
    CHECK(f.column == 6);
    REQUIRE(f.resolved);
    CHECK(f.resolved->kind == ConstValue::Kind::EnumConst);
    CHECK(f.resolved->enum_path == "Crypto.Cipher.AES.MODE_ECB");
}

TEST_CASE("constant cbc iv flagged definite") {
    auto a = analyze_path(fixture("seeded/r2_violation.py"));
    const Finding& f = single(a);
    CHECK(f.rule == Rule::R2);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 5);
    CHECK(f.column == 6);
    REQUIRE(f.resolved);
    CHECK(f.resolved->kind == ConstValue::Kind::Bytes);
    CHECK(f.resolved->data == std::string(16, '\0'));
}

TEST_CASE("constant key flagged definite") {
    auto a = analyze_path(fixture("seeded/r3_violation.py"));
    const Finding& f = single(a);
    CHECK(f.rule == Rule::R3);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 5);
    CHECK(f.column == 6);
    REQUIRE(f.resolved);
    CHECK(f.resolved->data == std::string(32, '\0'));
}

TEST_CASE("constant salt flagged definite") {
    auto a = analyze_path(fixture("seeded/r4_violation.py"));
    const Finding& f = single(a);
    CHECK(f.rule == Rule::R4);
    CHECK(f.library == Library::Cryptography);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 4);
    CHECK(f.column == 6);
}

TEST_CASE("single iteration flagged definite") {
    auto a = analyze_path(fixture("seeded/r5_violation.py"));
    const Finding& f = single(a);
    CHECK(f.rule == Rule::R5);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 6);
    CHECK(f.column == 6);
    REQUIRE(f.resolved);
    CHECK(f.resolved->number == 1);
}

TEST_CASE("compliant twins stay silent") {
    for (const char* name : {"r1_compliant.py", "r2_compliant.py", "r3_compliant.py",
                             "r4_compliant.py", "r5_compliant.py"}) {
        auto a = analyze_path(fixture(std::string("seeded/") + name));
        INFO(name);
        REQUIRE(a.parsed);
        CHECK(a.findings.empty());
        CHECK(a.outcome.matched_calls > 0);
    }
}

TEST_CASE("resolved insecure key is definite") {
    const Finding& f = single(analyze_path(fixture("classification/a_resolved_insecure.py")));
    CHECK(f.rule == Rule::R3);
    CHECK(f.library == Library::PyNaCl);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.line == 3);
    CHECK(f.column == 6);
}

TEST_CASE("resolved secure key produces nothing") {
    auto a = analyze_path(fixture("classification/b_resolved_secure.py"));
    REQUIRE(a.parsed);
    CHECK(a.findings.empty());
    CHECK(a.outcome.matched_calls == 1);
}

TEST_CASE("parameter without callers is potential") {
    const Finding& f = single(analyze_path(fixture("classification/c_no_callers.py")));
    CHECK(f.rule == Rule::R3);
    CHECK(f.confidence == Confidence::Potential);
    REQUIRE(f.reason);
    CHECK(*f.reason == UnresolvedReason::NoCallers);
    CHECK(!f.resolved);
    CHECK(f.line == 5);
    CHECK(f.column == 11);
}

TEST_CASE("conflicting callers are potential") {
    const Finding& f = single(analyze_path(fixture("classification/d_conflicting_callers.py")));
    CHECK(f.rule == Rule::R3);
    CHECK(f.confidence == Confidence::Potential);
    REQUIRE(f.reason);
    CHECK(*f.reason == UnresolvedReason::DynamicValue);
    CHECK(!f.resolved);
}

TEST_CASE("global constant resolves in two steps") {
    const Finding& f = single(analyze_path(fixture("classification/e_global_two_step.py")));
    CHECK(f.rule == Rule::R3);
    CHECK(f.confidence == Confidence::Definite);
    REQUIRE(f.resolved);
    CHECK(f.resolved->data == std::string(32, '\x07'));
    REQUIRE(f.trace.size() == 2);
    CHECK(f.trace[0].kind == SliceStep::Kind::GlobalAssign);
    CHECK(f.trace[1].kind == SliceStep::Kind::HardCoded);
    CHECK(f.line == 7);
    CHECK(f.column == 11);
}

TEST_CASE("iteration boundary is exact") {
    const Finding& low = single(analyze_path(fixture("boundary/iterations_999.py")));
    CHECK(low.rule == Rule::R5);
    CHECK(low.confidence == Confidence::Definite);
    REQUIRE(low.resolved);
    CHECK(low.resolved->number == 999);

    auto ok = analyze_path(fixture("boundary/iterations_1000.py"));
    REQUIRE(ok.parsed);
    CHECK(ok.findings.empty());
}

TEST_CASE("omitted mode falls back to ecb") {
    const Finding& f = single(analyze_path(fixture("extra/implicit_ecb.py")));
    CHECK(f.rule == Rule::R1);
    CHECK(f.confidence == Confidence::Definite);
    CHECK(f.implicit_default);
    CHECK(!f.resolved);
    REQUIRE(f.trace.size() == 1);
    CHECK(f.trace[0].kind == SliceStep::Kind::HardCoded);

    AnalyzerConfig quiet;
    quiet.implicit_default_ecb = false;
    auto off = analyze_path(fixture("extra/implicit_ecb.py"), quiet);
    CHECK(off.findings.empty());
}

TEST_CASE("keyword arguments select the judged value") {
    const Finding& f = single(analyze_path(fixture("extra/kwargs_call.py")));
    CHECK(f.rule == Rule::R1);
    CHECK(f.arg_keyword == "mode");
    REQUIRE(f.resolved);
    CHECK(f.resolved->enum_path == "Crypto.Cipher.AES.MODE_ECB");
}

TEST_CASE("package aliases normalize to the canonical root") {
    auto a = analyze_path(fixture("extra/alias_root.py"));
    REQUIRE(a.parsed);
    REQUIRE(a.findings.size() == 2);
    CHECK(a.findings[0].rule == Rule::R1);
    CHECK(a.findings[0].library == Library::Ucryptolib);
    REQUIRE(a.findings[0].resolved);
    CHECK(a.findings[0].resolved->number == 1);
    CHECK(a.findings[1].rule == Rule::R3);
    CHECK(a.findings[1].callee == "ucryptolib.aes");
}

TEST_CASE("value of the wrong kind downgrades to potential") {
    auto a = analyze_source("from Crypto.Cipher import AES\n"
                            "import os\n"
                            "c = AES.new(os.urandom(16), b\"weird\")\n");
    REQUIRE(a.parsed);
    REQUIRE(a.findings.size() == 1);
    const Finding& f = a.findings.front();
    CHECK(f.rule == Rule::R1);
    CHECK(f.confidence == Confidence::Potential);
    CHECK(!f.resolved);
    REQUIRE(f.reason);
    CHECK(*f.reason == UnresolvedReason::DynamicValue);
    CHECK(f.message.find("[") != std::string::npos);
}

TEST_CASE("findings are ordered and unique per call and rule") {
    auto a = analyze_path(fixture("matrix/m2crypto_cells.py"));
    REQUIRE(a.parsed);
    std::set<std::pair<uint32_t, int>> keys;
    uint32_t last_begin = 0;
    for (const auto& f : a.findings) {
        CHECK(f.span.begin >= last_begin);
        last_begin = f.span.begin;
        CHECK(keys.insert({f.span.begin, static_cast<int>(f.rule)}).second);
    }
}

TEST_CASE("external input is its own unresolved reason") {
    auto a = analyze_source("import os\n"
                            "import nacl.secret\n"
                            "box = nacl.secret.SecretBox(os.getenv(\"KEY\"))\n");
    REQUIRE(a.parsed);
    REQUIRE(a.findings.size() == 1);
    REQUIRE(a.findings[0].reason);
    CHECK(*a.findings[0].reason == UnresolvedReason::ExternalInput);
}
