#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cipherlint/catalog.hpp"
#include "cipherlint/matcher.hpp"
#include "cipherlint/slicer.hpp"
#include "cipherlint/source.hpp"

namespace cipherlint {

enum class Confidence { Potential, Definite };

inline std::string_view to_string(Confidence c) {
    return c == Confidence::Definite ? "definite" : "potential";
}

/// One misuse report. Definite means the argument provably carries an
/// insecure value (or an omitted argument falls back to an insecure library
/// default, marked by implicit_default); Potential means the value could not
/// be resolved and needs manual triage.
struct Finding {
    Rule rule = Rule::R1;
    Library library = Library::PyCrypto;
    Confidence confidence = Confidence::Potential;
    uint32_t line = 1;   // call site, 1-based
    uint32_t column = 0; // call site, 0-based byte column
    Span span;
    std::string callee;   // qualified dotted path as matched
    std::string argument; // which argument was judged
    // how the call supplied it: keyword name, else 0-based position, else absent
    std::string arg_keyword;
    int arg_position = -1;
    std::optional<ConstValue> resolved;
    std::optional<UnresolvedReason> reason; // set on Potential findings
    bool implicit_default = false;
    std::vector<SliceStep> trace;
    std::string message;

    // identity of the containing file, filled from the SourceFile
    std::string path;
    std::string content_hash;
    std::string project;
    FileOrigin origin = FileOrigin::Application;
};

struct AnalyzerConfig {
    std::array<bool, 6> enabled_rules{true, true, true, true, true, true};
    bool bare_name_fallback = false;
    bool implicit_default_ecb = true;
    int slice_depth_limit = 16;

    bool rule_enabled(Rule r) const { return enabled_rules[static_cast<size_t>(r)]; }
    void enable_only(const std::vector<Rule>& rules) {
        enabled_rules.fill(false);
        for (Rule r : rules) enabled_rules[static_cast<size_t>(r)] = true;
    }
};

enum class Classification { Definite, Potential, Compliant };

struct ClassifyOutcome {
    Classification result = Classification::Potential;
    std::string note; // nonempty when the value's kind cannot answer the predicate
};

/// Turns a slice outcome plus a predicate verdict into the finding decision.
/// A resolved value the predicate cannot interpret (wrong kind) downgrades to
/// Potential rather than guessing either way.
inline ClassifyOutcome classify(const SliceResult& slice, PredicateKind predicate, Library lib,
                                int threshold) {
    if (!slice.resolved()) return {Classification::Potential, {}};
    switch (evaluate_predicate(predicate, lib, *slice.value, threshold)) {
    case Verdict::Match:
        return {Classification::Definite, {}};
    case Verdict::NoMatch:
        return {Classification::Compliant, {}};
    case Verdict::Unknown:
        return {Classification::Potential,
                "resolved to " + to_string(*slice.value) + ", which does not answer " +
                    std::string(predicate_name(predicate))};
    }
    return {Classification::Potential, {}};
}

struct AnalyzeOutcome {
    int matched_calls = 0; // call sites that matched at least one pattern
};

namespace detail {

inline std::string describe_argument(const ArgSelector& sel) {
    if (!sel.keywords.empty()) return sel.keywords.front();
    return "argument " + std::to_string(sel.position);
}

inline bool guard_admits(Slicer& slicer, const SyntaxNode& call, const ArgGuard& guard,
                         Library lib) {
    ArgLookup arg = find_argument(call, guard.argument);
    if (arg.presence != ArgPresence::Present) return false;
    SliceResult slice = slicer.resolve_argument(*arg.value);
    if (!slice.resolved()) return false;
    return evaluate_predicate(guard.predicate, lib, *slice.value, 0) == Verdict::Match;
}

} // namespace detail

/// Runs every catalog pattern against every matched call of one parsed file
/// and returns the classified findings, ordered by file position then rule.
inline std::vector<Finding> analyze_file(const SyntaxTree& tree, const SourceFile& file,
                                         const RuleCatalog& catalog,
                                         const AnalyzerConfig& config = {},
                                         AnalyzeOutcome* outcome = nullptr) {
    ImportMap imports = resolve_imports(tree);
    MatchOptions mopts;
    mopts.bare_name_fallback = config.bare_name_fallback;
    std::vector<MatchedCall> matches = match_call_sites(tree, imports, catalog, mopts);
    if (outcome) outcome->matched_calls = static_cast<int>(matches.size());

    SliceOptions sopts;
    sopts.depth_limit = config.slice_depth_limit;
    sopts.suffix_match = config.bare_name_fallback;
    Slicer slicer(tree, imports, catalog, sopts);

    std::vector<Finding> findings;
    std::set<std::pair<const SyntaxNode*, Rule>> emitted;

    for (const MatchedCall& m : matches) {
        for (const CallPattern* pattern : m.patterns) {
            if (!config.rule_enabled(pattern->rule)) continue;
            if (emitted.count({m.call, pattern->rule})) continue;
            if (pattern->guard &&
                !detail::guard_admits(slicer, *m.call, *pattern->guard, pattern->library))
                continue;

            Finding f;
            f.rule = pattern->rule;
            f.library = pattern->library;
            f.span = m.call->span;
            f.line = m.call->span.line;
            f.column = m.call->span.column;
            f.callee = m.callee.dotted();
            f.argument = detail::describe_argument(pattern->argument);
            f.path = file.display_path.empty() ? file.path.generic_string() : file.display_path;
            f.content_hash = file.content_hash;
            f.project = file.project;
            f.origin = file.origin;

            ArgLookup arg = find_argument(*m.call, pattern->argument);
            if (arg.presence == ArgPresence::Opaque) continue;
            f.arg_keyword = arg.keyword;
            f.arg_position = arg.position;

            if (arg.presence == ArgPresence::Absent) {
                if (pattern->when_absent != WhenAbsent::InsecureDefault) continue;
                if (pattern->rule == Rule::R1 && !config.implicit_default_ecb) continue;
                f.confidence = Confidence::Definite;
                f.implicit_default = true;
                f.trace.push_back({SliceStep::Kind::HardCoded, m.call->span,
                                   "omitted '" + f.argument +
                                       "' falls back to the library's insecure default"});
                f.message = std::string(rule_id(f.rule)) + ": " +
                            std::string(rule_title(f.rule)) + " (implicit default of " +
                            f.callee + ")";
                emitted.insert({m.call, pattern->rule});
                findings.push_back(std::move(f));
                continue;
            }

            SliceResult slice = slicer.resolve_argument(*arg.value);
            ClassifyOutcome cls =
                classify(slice, pattern->predicate, pattern->library, pattern->threshold);
            if (cls.result == Classification::Compliant) continue;

            f.trace = slice.steps;
            if (cls.result == Classification::Definite) {
                f.confidence = Confidence::Definite;
                f.resolved = slice.value;
                f.message = std::string(rule_id(f.rule)) + ": " +
                            std::string(rule_title(f.rule)) + " ('" + f.argument +
                            "' is " + to_string(*slice.value) + ")";
            } else {
                f.confidence = Confidence::Potential;
                f.reason = slice.reason.value_or(UnresolvedReason::DynamicValue);
                f.message = std::string(rule_id(f.rule)) + ": " +
                            std::string(rule_title(f.rule)) + " ('" + f.argument +
                            "' could not be resolved: " + std::string(to_string(*f.reason)) +
                            ")";
                if (!cls.note.empty()) f.message += " [" + cls.note + "]";
            }
            emitted.insert({m.call, pattern->rule});
            findings.push_back(std::move(f));
        }
    }

    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return static_cast<int>(a.rule) < static_cast<int>(b.rule);
    });
    return findings;
}

} // namespace cipherlint
