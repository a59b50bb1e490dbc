// Standalone acceptance gate. Prints one PASS/FAIL line per criterion and
// exits nonzero if any failed. Independent of the unit test framework.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tests/support/fixtures.hpp"
#include "tests/support/oracle.hpp"

using namespace cipherlint;
using testsupport::analyze_path;
using testsupport::fixture;

namespace {

int g_failures = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s %s%s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " (", detail.c_str(), detail.empty() ? "" : ")");
    if (!ok) g_failures += 1;
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

const RuleCatalog& catalog() {
    static const RuleCatalog cat = RuleCatalog::builtin();
    return cat;
}

// --- criterion 1: five violation fixtures and their compliant twins ------------

void check_violation_suite() {
    auto start = Clock::now();
    struct Expect {
        const char* file;
        Rule rule;
        uint32_t line;
        uint32_t column;
    };
    const Expect cases[] = {
        {"seeded/r1_violation.py", Rule::R1, 5, 6},
        {"seeded/r2_violation.py", Rule::R2, 5, 6},
        {"seeded/r3_violation.py", Rule::R3, 5, 6},
        {"seeded/r4_violation.py", Rule::R4, 4, 6},
        {"seeded/r5_violation.py", Rule::R5, 6, 6},
    };
    bool ok = true;
    std::string why;
    for (const Expect& e : cases) {
        auto a = analyze_path(fixture(e.file));
        if (!a.parsed || a.findings.size() != 1) {
            ok = false;
            why = std::string(e.file) + ": expected exactly one finding";
            break;
        }
        const Finding& f = a.findings.front();
        if (f.rule != e.rule || f.confidence != Confidence::Definite || f.line != e.line ||
            f.column != e.column) {
            ok = false;
            why = std::string(e.file) + ": got " + std::string(rule_id(f.rule)) + " " +
                  std::string(to_string(f.confidence)) + " at " + std::to_string(f.line) + ":" +
                  std::to_string(f.column);
            break;
        }
    }
    const char* twins[] = {"seeded/r1_compliant.py", "seeded/r2_compliant.py",
                           "seeded/r3_compliant.py", "seeded/r4_compliant.py",
                           "seeded/r5_compliant.py"};
    for (const char* t : twins) {
        if (!ok) break;
        auto a = analyze_path(fixture(t));
        if (!a.parsed || !a.findings.empty()) {
            ok = false;
            why = std::string(t) + ": expected zero findings";
        }
    }
    double elapsed = seconds_since(start);
    if (ok && elapsed >= 1.0) {
        ok = false;
        why = "took " + fmt_seconds(elapsed) + ", limit 1s";
    }
    report("violation-suite: 5 seeded files flag the right rule, 5 twins stay clean", ok,
           ok ? fmt_seconds(elapsed) : why);
}

// --- criterion 2: coverage matrix exhaustion ------------------------------------

void check_matrix_exhaustion() {
    auto start = Clock::now();
    const char* files[] = {"matrix/pycrypto_cells.py", "matrix/cryptography_cells.py",
                           "matrix/m2crypto_cells.py", "matrix/pynacl_cells.py",
                           "matrix/ucryptolib_cells.py"};
    std::set<std::pair<Library, Rule>> emitted;
    bool parsed_all = true;
    for (const char* file : files) {
        auto a = analyze_path(fixture(file));
        if (!a.parsed) parsed_all = false;
        for (const Finding& f : a.findings) emitted.insert({f.library, f.rule});
    }

    std::set<std::pair<Library, Rule>> expected;
    for (Library lib : all_libraries())
        for (Rule rule : all_rules())
            if (rule_applies(lib, rule)) expected.insert({lib, rule});

    bool ok = parsed_all;
    std::string why = parsed_all ? "" : "fixture failed to parse";
    if (ok) {
        for (Library lib : all_libraries()) {
            for (Rule rule : all_rules()) {
                bool want = expected.count({lib, rule}) > 0;
                bool got = emitted.count({lib, rule}) > 0;
                if (want != got) {
                    ok = false;
                    why = std::string(library_name(lib)) + "/" + std::string(rule_id(rule)) +
                          (want ? " missing" : " emitted off the matrix");
                    break;
                }
            }
            if (!ok) break;
        }
    }
    if (ok) {
        for (const auto& [lib, rule] : emitted)
            if (rule == Rule::R6) {
                ok = false;
                why = "R6 emitted";
            }
    }
    double elapsed = seconds_since(start);
    if (ok && elapsed >= 5.0) {
        ok = false;
        why = "took " + fmt_seconds(elapsed) + ", limit 5s";
    }
    report("matrix-exhaustion: emitted library/rule pairs equal the checked set, never R6", ok,
           ok ? fmt_seconds(elapsed) : why);
}

// --- criterion 3: classification semantics ---------------------------------------

void check_classification() {
    bool ok = true;
    std::string why;
    auto expect_one = [&](const char* file, auto&& pred, const char* what) {
        if (!ok) return;
        auto a = analyze_path(fixture(file));
        if (!a.parsed || a.findings.size() != 1 || !pred(a.findings.front())) {
            ok = false;
            why = std::string(file) + ": " + what;
        }
    };
    expect_one("classification/a_resolved_insecure.py",
               [](const Finding& f) {
                   return f.confidence == Confidence::Definite && f.resolved.has_value();
               },
               "resolved-insecure must be definite");
    if (ok) {
        auto b = analyze_path(fixture("classification/b_resolved_secure.py"));
        if (!b.parsed || !b.findings.empty() || b.outcome.matched_calls == 0) {
            ok = false;
            why = "b_resolved_secure.py: resolved-secure must produce no finding";
        }
    }
    expect_one("classification/c_no_callers.py",
               [](const Finding& f) {
                   return f.confidence == Confidence::Potential && f.reason &&
                          *f.reason == UnresolvedReason::NoCallers;
               },
               "uncalled parameter must be potential with no-callers");
    expect_one("classification/d_conflicting_callers.py",
               [](const Finding& f) {
                   return f.confidence == Confidence::Potential && f.reason &&
                          *f.reason == UnresolvedReason::DynamicValue;
               },
               "conflicting callers must be potential with dynamic-value");
    expect_one("classification/e_global_two_step.py",
               [](const Finding& f) {
                   return f.confidence == Confidence::Definite && f.trace.size() == 2 &&
                          f.trace[0].kind == SliceStep::Kind::GlobalAssign &&
                          f.trace[1].kind == SliceStep::Kind::HardCoded;
               },
               "global two-step must be definite with the two-step trace");
    report("classification: definite, clean, no-callers, dynamic-value, two-step trace", ok,
           why);
}

// --- criterion 4: iteration boundary ---------------------------------------------

void check_iteration_boundary() {
    bool ok = true;
    std::string why;
    auto low = analyze_path(fixture("boundary/iterations_999.py"));
    if (!low.parsed || low.findings.size() != 1 || low.findings[0].rule != Rule::R5 ||
        low.findings[0].confidence != Confidence::Definite) {
        ok = false;
        why = "999 iterations must be a definite R5 finding";
    }
    if (ok) {
        auto high = analyze_path(fixture("boundary/iterations_1000.py"));
        if (!high.parsed || !high.findings.empty()) {
            ok = false;
            why = "1000 iterations must produce no finding";
        }
    }
    report("iteration-boundary: 999 flagged, 1000 clean", ok, why);
}

// --- criterion 5: interpreter oracle ---------------------------------------------

void check_oracle() {
    testsupport::OracleOutcome outcome = testsupport::oracle_check_tree(testsupport::fixture_root());
    bool ok = outcome.mismatches == 0 && outcome.checked > 0;
    std::string detail;
    if (ok) {
        detail = std::to_string(outcome.checked) + " resolved values over " +
                 std::to_string(outcome.files) + " executed files";
    } else if (outcome.checked == 0) {
        detail = "no resolved values were checked";
    } else {
        detail = std::to_string(outcome.mismatches) + " mismatches; first: " +
                 (outcome.notes.empty() ? "?" : outcome.notes.front());
    }
    report("slicer-oracle: every resolved value matches the interpreter bit for bit", ok,
           detail);
}

// --- criterion 6: mini corpus pipeline -------------------------------------------

void check_mini_corpus() {
    auto start = Clock::now();
    std::string err;
    auto layout = load_manifest(fixture("corpus_mini/manifest.json"), err);
    bool ok = layout.has_value();
    std::string why = ok ? "" : ("manifest: " + err);

    CorpusReport report_data;
    if (ok) {
        auto result = scan(*layout, catalog(), &err);
        if (!result) {
            ok = false;
            why = "scan aborted: " + err;
        } else {
            report_data = aggregate(*result);
        }
    }
    if (ok && (report_data.unique_findings != 3 || report_data.total_findings != 5)) {
        ok = false;
        why = "expected 5 raw findings collapsing to 3 unique, got " +
              std::to_string(report_data.total_findings) + "/" +
              std::to_string(report_data.unique_findings);
    }
    if (ok) {
        // the duplicated dependency finding carries multiplicity 3
        bool saw_triple = false;
        for (size_t i = 0; i < report_data.multiplicity.size(); ++i)
            if (report_data.multiplicity[i] == 3 && report_data.unique[i].rule == Rule::R3)
                saw_triple = true;
        if (!saw_triple) {
            ok = false;
            why = "duplicated R3 finding did not collapse with multiplicity 3";
        }
    }
    if (ok && (report_data.pct_projects_with_misuse < 66.66 ||
               report_data.pct_projects_with_misuse > 66.68)) {
        ok = false;
        why = "pct_projects_with_misuse = " +
              std::to_string(report_data.pct_projects_with_misuse);
    }
    if (ok && report_data.pct_app_code_misuses != 40.0) {
        ok = false;
        why = "pct_app_code_misuses = " + std::to_string(report_data.pct_app_code_misuses);
    }
    if (ok && report_data.scan_stats.parse_failures != 1) {
        ok = false;
        why = "parse_failures = " + std::to_string(report_data.scan_stats.parse_failures);
    }
    if (ok && report_data.scan_stats.files_parsed != 9) {
        ok = false;
        why = "malformed file must not stop the other 9 from parsing";
    }
    double elapsed = seconds_since(start);
    if (ok && elapsed >= 5.0) {
        ok = false;
        why = "took " + fmt_seconds(elapsed) + ", limit 5s";
    }
    report("mini-corpus: dedupe 3-to-1, 66.67% misuse, 40% app share, 1 parse failure", ok,
           ok ? fmt_seconds(elapsed) : why);
}

// --- criterion 7: deterministic output -------------------------------------------

void check_determinism() {
#ifdef CIPHERLINT_BIN
    std::string cmd = testsupport::shell_quote(CIPHERLINT_BIN) + " scan --manifest " +
                      testsupport::shell_quote(fixture("corpus_mini/manifest.json").string()) +
                      " --format json 2>/dev/null";
    testsupport::CommandResult first = testsupport::run_command(cmd);
    testsupport::CommandResult second = testsupport::run_command(cmd);
    bool ok = !first.output.empty() && first.output == second.output &&
              first.exit_code == second.exit_code;
    report("determinism: back-to-back json scans are byte-identical", ok,
           ok ? std::to_string(first.output.size()) + " bytes" : "outputs differ");
#else
    report("determinism: back-to-back json scans are byte-identical", false,
           "scanner binary not wired in");
#endif
}

// --- criterion 8: throughput ------------------------------------------------------

void check_throughput() {
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "cipherlint_throughput";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root / "proj");

    for (int i = 0; i < 1000; ++i) {
        std::ostringstream src;
        src << "import os\n"
            << "import nacl.secret\n"
            << "\n";
        for (int fn = 0; fn < 23; ++fn) {
            src << "def helper_" << i << "_" << fn << "(value):\n"
                << "    total = value + " << fn << "\n"
                << "    scaled = total * 3\n"
                << "    return scaled - " << i % 7 << "\n\n";
        }
        src << "KEY_" << i << " = b\"\\x42\" * 32\n"
            << "box = nacl.secret.SecretBox(KEY_" << i << ")\n";
        std::ofstream(root / "proj" / ("mod_" + std::to_string(i) + ".py")) << src.str();
    }

    auto start = Clock::now();
    CorpusLayout layout = infer_layout({root / "proj"});
    std::string err;
    auto result = scan(layout, catalog(), &err);
    std::string rendered;
    if (result) rendered = render(aggregate(*result), ReportFormat::Json);
    double elapsed = seconds_since(start);

    bool ok = result.has_value() && !rendered.empty() &&
              result->stats.files_candidate == 1000 &&
              static_cast<int>(result->findings.size()) == 1000 && elapsed < 60.0;
    std::string detail = ok ? "1000 files in " + fmt_seconds(elapsed)
                            : (!result ? "scan failed: " + err
                                       : "candidates " +
                                             std::to_string(result->stats.files_candidate) +
                                             ", findings " +
                                             std::to_string(result->findings.size()) + ", " +
                                             fmt_seconds(elapsed));
    report("throughput: 1000 hundred-line files scan inside 60s", ok, detail);
    fs::remove_all(root, ec);
}

} // namespace

int main() {
    check_violation_suite();
    check_matrix_exhaustion();
    check_classification();
    check_iteration_boundary();
    check_oracle();
    check_mini_corpus();
    check_determinism();
    check_throughput();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria hold\n");
    return 0;
}
