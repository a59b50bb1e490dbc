#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cipherlint/cipherlint.hpp"

#ifndef CIPHERLINT_FIXTURES
#error "CIPHERLINT_FIXTURES must point at the fixture directory"
#endif

namespace testsupport {

inline std::filesystem::path fixture_root() { return CIPHERLINT_FIXTURES; }

inline std::filesystem::path fixture(const std::string& rel) { return fixture_root() / rel; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Analyzed {
    bool parsed = false;
    std::vector<cipherlint::Finding> findings;
    cipherlint::AnalyzeOutcome outcome;
};

inline Analyzed analyze_path(const std::filesystem::path& p,
                             const cipherlint::AnalyzerConfig& config = {}) {
    Analyzed out;
    std::string bytes = read_file(p);
    cipherlint::ParseResult parsed = cipherlint::parse_source(p, bytes);
    if (!parsed.ok()) return out;
    out.parsed = true;
    cipherlint::SourceFile meta;
    meta.path = p;
    meta.content_hash = cipherlint::content_fingerprint(bytes);
    meta.project = "fixture";
    static const cipherlint::RuleCatalog catalog = cipherlint::RuleCatalog::builtin();
    out.findings = cipherlint::analyze_file(*parsed.tree, meta, catalog, config, &out.outcome);
    return out;
}

inline Analyzed analyze_source(const std::string& source,
                               const cipherlint::AnalyzerConfig& config = {}) {
    Analyzed out;
    cipherlint::ParseResult parsed = cipherlint::parse_source("inline.py", source);
    if (!parsed.ok()) return out;
    out.parsed = true;
    cipherlint::SourceFile meta;
    meta.path = "inline.py";
    meta.content_hash = cipherlint::content_fingerprint(source);
    meta.project = "inline";
    static const cipherlint::RuleCatalog catalog = cipherlint::RuleCatalog::builtin();
    out.findings = cipherlint::analyze_file(*parsed.tree, meta, catalog, config, &out.outcome);
    return out;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

/// Runs a shell command capturing stdout (stderr if the caller merges it).
inline CommandResult run_command(const std::string& cmd) {
    CommandResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

} // namespace testsupport
