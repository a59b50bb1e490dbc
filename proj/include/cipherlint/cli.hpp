#pragma once

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cipherlint/report.hpp"

namespace cipherlint {

namespace detail {

inline bool parse_rule_list(const std::string& csv, std::vector<Rule>& out, std::string& error) {
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::string id = csv.substr(pos, comma - pos);
        while (!id.empty() && id.front() == ' ') id.erase(id.begin());
        while (!id.empty() && id.back() == ' ') id.pop_back();
        if (!id.empty()) {
            auto rule = rule_from_id(id);
            if (!rule) {
                error = "unknown rule id: " + id;
                return false;
            }
            out.push_back(*rule);
        }
        pos = comma + 1;
    }
    if (out.empty()) {
        error = "--rules lists no rule ids";
        return false;
    }
    return true;
}

} // namespace detail

/// Exit codes: 0 scan clean of definite findings, 1 at least one definite
/// finding, 2 usage or configuration error, 3 corpus unreadable.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"detects insecure uses of Python crypto APIs by slicing call arguments back "
                 "to their origins",
                 "cipherlint"};
    app.require_subcommand(1);

    auto* scan_cmd = app.add_subcommand("scan", "analyze project trees and report misuses");
    std::vector<std::string> paths;
    std::string manifest, format_name = "text", out_path, rules_csv;
    bool include_tests = false, no_dedupe = false, no_implicit_ecb = false, bare_names = false;
    int max_depth = -1;
    scan_cmd->add_option("paths", paths, "project directories, one project per path");
    scan_cmd->add_option("--manifest", manifest, "corpus manifest file (JSON)");
    scan_cmd->add_option("--format", format_name, "output format: json, csv or text");
    scan_cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
    scan_cmd->add_option("--rules", rules_csv, "comma-separated rule ids to check, e.g. R1,R3");
    scan_cmd->add_flag("--include-tests", include_tests, "also analyze test files");
    scan_cmd->add_flag("--no-dedupe", no_dedupe, "list every raw finding, skip deduplication");
    scan_cmd->add_option("--max-depth", max_depth, "caller-walk depth limit for the slicer");
    scan_cmd->add_flag("--no-implicit-ecb", no_implicit_ecb,
                       "do not flag PyCrypto calls that omit the mode argument");
    scan_cmd->add_flag("--bare-name-match", bare_names,
                       "also match unqualified callee names against catalog suffixes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto format = parse_format(format_name);
    if (!format) {
        err << "error: unknown format: " << format_name << "\n";
        return 2;
    }
    if (paths.empty() == manifest.empty()) {
        err << "error: pass either project paths or --manifest, not both or neither\n";
        return 2;
    }
    if (max_depth == 0 || max_depth < -1) {
        err << "error: --max-depth must be at least 1\n";
        return 2;
    }

    CorpusLayout layout;
    if (!manifest.empty()) {
        std::string why;
        auto loaded = load_manifest(manifest, why);
        if (!loaded) {
            err << "error: " << why << "\n";
            return 3;
        }
        layout = std::move(*loaded);
    } else {
        std::vector<std::filesystem::path> roots(paths.begin(), paths.end());
        layout = infer_layout(roots);
    }

    ScanOptions options;
    options.include_tests = include_tests;
    options.dedupe_findings = !no_dedupe;
    options.analyzer.implicit_default_ecb = !no_implicit_ecb;
    options.analyzer.bare_name_fallback = bare_names;
    if (max_depth > 0) options.analyzer.slice_depth_limit = max_depth;
    if (!rules_csv.empty()) {
        std::vector<Rule> rules;
        std::string why;
        if (!detail::parse_rule_list(rules_csv, rules, why)) {
            err << "error: " << why << "\n";
            return 2;
        }
        options.analyzer.enable_only(rules);
    }

    RuleCatalog catalog = RuleCatalog::builtin();
    std::string why;
    auto result = scan(layout, catalog, options, &why);
    if (!result) {
        err << "error: " << why << "\n";
        return 3;
    }

    CorpusReport report = aggregate(*result);
    std::string rendered = render(report, *format);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << out_path << "\n";
            return 2;
        }
        f << rendered;
        if (!f.good()) {
            err << "error: short write to " << out_path << "\n";
            return 2;
        }
    } else {
        out << rendered;
    }
    return report.definite_count > 0 ? 1 : 0;
}

} // namespace cipherlint
