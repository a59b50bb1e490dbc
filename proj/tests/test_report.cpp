#include <catch2/catch_amalgamated.hpp>

#include "tests/support/fixtures.hpp"

using namespace cipherlint;
using cipherlint::detail::const_value_from_json;
using cipherlint::detail::const_value_to_json;
using cipherlint::detail::finding_from_json;
using cipherlint::detail::finding_to_json;
using testsupport::fixture;

namespace {

const RuleCatalog& catalog() {
    static const RuleCatalog cat = RuleCatalog::builtin();
    return cat;
}

CorpusReport mini_report() {
    std::string err;
    auto layout = load_manifest(fixture("corpus_mini/manifest.json"), err);
    REQUIRE(layout);
    auto result = scan(*layout, catalog(), &err);
    REQUIRE(result);
    return aggregate(*result);
}

Finding stub_finding(Rule rule, Library lib, Confidence conf, const std::string& project,
                     FileOrigin origin) {
    Finding f;
    f.rule = rule;
    f.library = lib;
    f.confidence = conf;
    f.project = project;
    f.origin = origin;
    f.path = project + "/x.py";
    f.content_hash = "hash-" + project;
    f.callee = "x.y";
    f.argument = "arg";
    return f;
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("the mini corpus aggregates to the expected metrics") {
    CorpusReport r = mini_report();
    CHECK(r.total_findings == 5);
    CHECK(r.unique_findings == 3);
    CHECK(r.definite_count == 5);
    CHECK(r.potential_count == 0);

    CHECK(r.matrix_at(Library::PyCrypto, Rule::R3) == 3);
    CHECK(r.matrix_at(Library::PyCrypto, Rule::R1) == 1);
    CHECK(r.matrix_at(Library::PyCrypto, Rule::R5) == 1);
    int matrix_total = 0;
    for (Library lib : all_libraries())
        for (Rule rule : all_rules()) matrix_total += r.matrix_at(lib, rule);
    CHECK(matrix_total == 5);

    CHECK(r.projects_with_crypto == 6);
    CHECK(r.projects_with_misuse == 4);
    CHECK(r.pct_projects_with_misuse == Catch::Approx(66.6667).margin(0.01));
    CHECK(r.pct_app_code_misuses == 40.0);

    CHECK(r.per_rule_project_pct[0] == Catch::Approx(16.6667).margin(0.01));
    CHECK(r.per_rule_project_pct[2] == 50.0);
    CHECK(r.per_rule_project_pct[4] == Catch::Approx(16.6667).margin(0.01));
    CHECK(r.per_rule_project_pct[1] == 0.0);
    CHECK(r.per_rule_project_pct[3] == 0.0);
    CHECK(r.per_rule_project_pct[5] == 0.0);

    int mult_total = 0;
    for (int m : r.multiplicity) mult_total += m;
    CHECK(mult_total == r.total_findings);
}

TEST_CASE("half the crypto projects with misuses is fifty percent") {
    std::vector<Finding> findings = {
        stub_finding(Rule::R1, Library::PyCrypto, Confidence::Definite, "p1",
                     FileOrigin::Application),
        stub_finding(Rule::R3, Library::PyNaCl, Confidence::Potential, "p2",
                     FileOrigin::Application),
    };
    std::vector<ProjectIndex> projects = {
        {"p1", {0}, {}, true, 1},
        {"p2", {1}, {}, true, 1},
        {"p3", {}, {}, true, 1},
        {"p4", {}, {}, true, 1},
    };
    CorpusReport r = aggregate(findings, findings, {1, 1}, projects, {}, false);
    CHECK(r.projects_with_crypto == 4);
    CHECK(r.projects_with_misuse == 2);
    CHECK(r.pct_projects_with_misuse == 50.0);
    // only the definite finding counts toward the per-rule share
    CHECK(r.per_rule_project_pct[0] == 25.0);
    CHECK(r.per_rule_project_pct[2] == 0.0);
    CHECK(r.pct_app_code_misuses == 100.0);
}

TEST_CASE("dependency only findings have no application share") {
    std::vector<Finding> findings = {
        stub_finding(Rule::R3, Library::PyCrypto, Confidence::Definite, "p1",
                     FileOrigin::Dependency),
    };
    std::vector<ProjectIndex> projects = {{"p1", {}, {0}, true, 1}};
    CorpusReport r = aggregate(findings, findings, {1}, projects, {}, false);
    CHECK(r.pct_app_code_misuses == 0.0);
    CHECK(r.per_project[0].dep_count == 1);
    CHECK(r.per_project[0].app_count == 0);
}

TEST_CASE("non crypto projects never enter the percentages") {
    std::vector<ProjectIndex> projects = {
        {"p1", {}, {}, false, 1},
        {"p2", {}, {}, false, 0},
    };
    CorpusReport r = aggregate({}, {}, {}, projects, {}, true);
    CHECK(r.projects_with_crypto == 0);
    CHECK(r.pct_projects_with_misuse == 0.0);
    for (double pct : r.per_rule_project_pct) CHECK(pct == 0.0);
}

TEST_CASE("constant values survive json") {
    for (const ConstValue& v :
         {ConstValue::integer(-3), ConstValue::str("pw\xc3\xa9"),
          ConstValue::bytes(std::string("\x00\xff\x10", 3)), ConstValue::enum_const("a.b.C"),
          ConstValue::enum_const("os.urandom", true)}) {
        auto j = const_value_to_json(v);
        auto back = const_value_from_json(j);
        REQUIRE(back);
        CHECK(*back == v);
    }
    CHECK_FALSE(const_value_from_json(nlohmann::json{{"kind", "mystery"}}));
}

TEST_CASE("findings survive json with every optional field") {
    Finding f = stub_finding(Rule::R2, Library::Cryptography, Confidence::Definite, "proj",
                             FileOrigin::Dependency);
    f.line = 12;
    f.column = 4;
    f.span = {100, 140, 12, 4};
    f.arg_keyword = "initialization_vector";
    f.arg_position = -1;
    f.resolved = ConstValue::bytes(std::string(16, '\0'));
    f.implicit_default = false;
    f.trace.push_back({SliceStep::Kind::GlobalAssign, {90, 96, 11, 0}, "'iv' assigned here"});
    f.trace.push_back({SliceStep::Kind::HardCoded, {60, 70, 8, 5}, "bytes:0000"});
    f.message = "R2: something";

    auto j = finding_to_json(f);
    std::string err;
    auto back = finding_from_json(j, err);
    REQUIRE(back);
    CHECK(err.empty());
    CHECK(back->rule == f.rule);
    CHECK(back->library == f.library);
    CHECK(back->confidence == f.confidence);
    CHECK(back->line == f.line);
    CHECK(back->column == f.column);
    CHECK(back->span.begin == f.span.begin);
    CHECK(back->arg_keyword == f.arg_keyword);
    REQUIRE(back->resolved);
    CHECK(*back->resolved == *f.resolved);
    REQUIRE(back->trace.size() == 2);
    CHECK(back->trace[0].kind == SliceStep::Kind::GlobalAssign);
    CHECK(back->trace[1].detail == "bytes:0000");
    CHECK(back->origin == FileOrigin::Dependency);

    Finding p = stub_finding(Rule::R3, Library::PyNaCl, Confidence::Potential, "proj",
                             FileOrigin::Application);
    p.reason = UnresolvedReason::NoCallers;
    auto pj = finding_to_json(p);
    auto pback = finding_from_json(pj, err);
    REQUIRE(pback);
    REQUIRE(pback->reason);
    CHECK(*pback->reason == UnresolvedReason::NoCallers);
    CHECK_FALSE(pback->resolved);
}

TEST_CASE("reports survive json byte for byte") {
    CorpusReport r = mini_report();
    nlohmann::ordered_json j = report_to_json(r);
    std::string err;
    auto back = report_from_json(j, err);
    REQUIRE(back);
    CHECK(err.empty());
    CHECK(*back == r);
    CHECK(report_to_json(*back).dump(2) == j.dump(2));
}

TEST_CASE("future schema versions are rejected") {
    nlohmann::ordered_json j = report_to_json(mini_report());
    j["schema_version"] = 2;
    std::string err;
    CHECK_FALSE(report_from_json(j, err));
    CHECK(err.find("schema_version") != std::string::npos);
}

TEST_CASE("an empty report serializes to all zeroes") {
    CorpusReport empty = aggregate({}, {}, {}, {}, {}, true);
    nlohmann::ordered_json j = report_to_json(empty);
    CHECK(j["total_findings"] == 0);
    CHECK(j["findings"].is_array());
    CHECK(j["findings"].empty());
    std::string err;
    auto back = report_from_json(j, err);
    REQUIRE(back);
    CHECK(*back == empty);
}

TEST_CASE("csv lists one row per raw finding plus the summary") {
    CorpusReport r = mini_report();
    std::string csv = render_csv(r);
    auto header_end = csv.find('\n');
    CHECK(csv.substr(0, header_end) ==
          "project,file,line,column,rule,library,confidence,resolved value,origin");
    auto blank = csv.find("\n\n");
    REQUIRE(blank != std::string::npos);
    std::string rows = csv.substr(0, blank + 1);
    CHECK(count_lines(rows) == r.total_findings + 1);

    CHECK(csv.find("\nmetric,value\n") != std::string::npos);
    CHECK(csv.find("pct_projects_with_misuse,66.67\n") != std::string::npos);
    CHECK(csv.find("pct_app_code_misuses,40.00\n") != std::string::npos);
    CHECK(csv.find("findings_PyCrypto_R3,3\n") != std::string::npos);
    // every library x rule cell is present even when zero
    for (Library lib : all_libraries())
        for (Rule rule : all_rules()) {
            std::string key = "findings_" + std::string(library_name(lib)) + "_" +
                              std::string(rule_id(rule)) + ",";
            INFO(key);
            CHECK(csv.find(key) != std::string::npos);
        }
}

TEST_CASE("csv quotes fields that need it") {
    CHECK(detail::csv_field("plain") == "plain");
    CHECK(detail::csv_field("a,b") == "\"a,b\"");
    CHECK(detail::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("text output names the sections") {
    CorpusReport r = mini_report();
    std::string text = render_text(r);
    CHECK(text.find("scan\n") != std::string::npos);
    CHECK(text.find("findings per rule and library") != std::string::npos);
    CHECK(text.find("findings per project") != std::string::npos);
    CHECK(text.find("66.67%") != std::string::npos);
    CHECK(text.find("alpha") != std::string::npos);
}

TEST_CASE("format names parse and dispatch") {
    REQUIRE(parse_format("json"));
    REQUIRE(parse_format("csv"));
    REQUIRE(parse_format("text"));
    CHECK_FALSE(parse_format("yaml"));
    CHECK_FALSE(parse_format(""));

    CorpusReport r = mini_report();
    CHECK(render(r, ReportFormat::Json).front() == '{');
    CHECK(render(r, ReportFormat::Csv).substr(0, 7) == "project");
    CHECK(render(r, ReportFormat::Text).substr(0, 4) == "scan");
}

TEST_CASE("rendering is deterministic") {
    CorpusReport a = mini_report();
    CorpusReport b = mini_report();
    CHECK(render(a, ReportFormat::Json) == render(b, ReportFormat::Json));
    CHECK(render(a, ReportFormat::Csv) == render(b, ReportFormat::Csv));
    CHECK(render(a, ReportFormat::Text) == render(b, ReportFormat::Text));
}
