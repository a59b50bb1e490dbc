#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "cipherlint/analyzer.hpp"
#include "cipherlint/parser.hpp"

namespace cipherlint {

// --- test-file filter -----------------------------------------------------------

/// Heuristic for code that never runs in production. Segment names must match
/// whole path components; basename patterns anchor at the file name.
struct TestFileRules {
    std::set<std::string> segments{"test", "tests", "testing"};
    std::vector<std::string> basename_prefixes{"test_"};
    std::vector<std::string> basename_suffixes{"_test.py"};
    std::set<std::string> basename_exact{"conftest.py"};
};

inline bool is_test_file(const std::filesystem::path& path, const TestFileRules& rules = {}) {
    const std::string base = path.filename().generic_string();
    for (auto it = path.begin(); it != path.end(); ++it) {
        std::string seg = it->generic_string();
        if (seg == base && std::next(it) == path.end()) break; // basename handled below
        if (rules.segments.count(seg)) return true;
    }
    if (rules.basename_exact.count(base)) return true;
    if (base.size() >= 3 && base.compare(base.size() - 3, 3, ".py") == 0) {
        for (const auto& pre : rules.basename_prefixes)
            if (base.size() > pre.size() && base.compare(0, pre.size(), pre) == 0) return true;
        for (const auto& suf : rules.basename_suffixes)
            if (base.size() > suf.size() &&
                base.compare(base.size() - suf.size(), suf.size(), suf) == 0)
                return true;
    }
    return false;
}

// --- layout ---------------------------------------------------------------------

struct ProjectRoot {
    std::string name;
    std::filesystem::path path;
};

struct DependencyRoot {
    std::string package_name;
    std::filesystem::path path;
};

struct ScanOptions {
    AnalyzerConfig analyzer;
    ParseOptions parse;
    TestFileRules test_rules;
    bool include_tests = false;
    bool dedupe_findings = true;
};

struct CorpusLayout {
    std::vector<ProjectRoot> project_roots;
    // keyed by project name; absent key means no declared dependency roots
    std::map<std::string, std::vector<DependencyRoot>> dependency_roots;
    ScanOptions options;
};

/// Convention layout: each path is one project named after its directory.
/// Files under any site-packages component are dependencies of that project.
inline CorpusLayout infer_layout(const std::vector<std::filesystem::path>& paths) {
    CorpusLayout layout;
    for (const auto& p : paths) {
        std::filesystem::path clean = p.lexically_normal();
        std::string name = clean.filename().generic_string();
        if (name.empty() || name == ".") name = std::filesystem::absolute(clean)
                                                    .parent_path()
                                                    .filename()
                                                    .generic_string();
        if (name.empty()) name = clean.generic_string();
        layout.project_roots.push_back({name, p});
    }
    return layout;
}

/// Manifest document: {"projects": [{"name", "root", "dependencies":
/// [{"package", "path"}]}]}. Relative paths resolve against the manifest's
/// directory.
inline std::optional<CorpusLayout> load_manifest(const std::filesystem::path& manifest_path,
                                                 std::string& error) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) {
        error = "cannot read manifest: " + manifest_path.generic_string();
        return std::nullopt;
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("projects") ||
        !doc["projects"].is_array()) {
        error = "manifest is not a JSON object with a \"projects\" array: " +
                manifest_path.generic_string();
        return std::nullopt;
    }
    const std::filesystem::path base = manifest_path.has_parent_path()
                                           ? manifest_path.parent_path()
                                           : std::filesystem::path(".");
    auto resolve = [&](const std::string& raw) {
        std::filesystem::path p(raw);
        return p.is_absolute() ? p : base / p;
    };
    CorpusLayout layout;
    for (const auto& jp : doc["projects"]) {
        if (!jp.is_object() || !jp.contains("name") || !jp.contains("root")) {
            error = "each project needs \"name\" and \"root\"";
            return std::nullopt;
        }
        ProjectRoot proj{jp["name"].get<std::string>(), resolve(jp["root"].get<std::string>())};
        if (proj.name.empty()) {
            error = "project name must be nonempty";
            return std::nullopt;
        }
        for (const auto& other : layout.project_roots)
            if (other.name == proj.name) {
                error = "duplicate project name: " + proj.name;
                return std::nullopt;
            }
        if (jp.contains("dependencies")) {
            if (!jp["dependencies"].is_array()) {
                error = "\"dependencies\" must be an array";
                return std::nullopt;
            }
            for (const auto& jd : jp["dependencies"]) {
                if (!jd.is_object() || !jd.contains("package") || !jd.contains("path")) {
                    error = "each dependency needs \"package\" and \"path\"";
                    return std::nullopt;
                }
                layout.dependency_roots[proj.name].push_back(
                    {jd["package"].get<std::string>(), resolve(jd["path"].get<std::string>())});
            }
        }
        layout.project_roots.push_back(std::move(proj));
    }
    return layout;
}

inline bool validate_layout(const CorpusLayout& layout, std::string& error) {
    if (layout.project_roots.empty()) {
        error = "corpus layout lists no projects";
        return false;
    }
    std::error_code ec;
    for (const auto& proj : layout.project_roots) {
        if (!std::filesystem::is_directory(proj.path, ec)) {
            error = "project root is not a readable directory: " + proj.path.generic_string();
            return false;
        }
        auto it = layout.dependency_roots.find(proj.name);
        if (it == layout.dependency_roots.end()) continue;
        for (const auto& dep : it->second)
            if (!std::filesystem::is_directory(dep.path, ec)) {
                error = "dependency root is not a readable directory: " +
                        dep.path.generic_string();
                return false;
            }
    }
    return true;
}

// --- candidate collection ---------------------------------------------------------

struct ScanStats {
    int files_seen = 0;
    int files_candidate = 0;
    int files_parsed = 0;
    int parse_failures = 0;
    int depth_failures = 0;
    int files_unreadable = 0;
    int files_skipped_tests = 0;
    int files_skipped_no_tokens = 0;

    bool operator==(const ScanStats&) const = default;
};

struct CollectedFile {
    SourceFile meta;
    std::string content;
};

struct CollectOutcome {
    std::vector<CollectedFile> files; // candidates, sorted by absolute path
    int files_seen = 0;
    int files_unreadable = 0;
    int files_skipped_tests = 0;
    int files_skipped_no_tokens = 0;
};

/// Final name segment of every catalog callee, sorted. The textual pre-filter
/// looks for any of these followed by an opening parenthesis.
inline std::vector<std::string> candidate_tokens(const RuleCatalog& catalog) {
    std::set<std::string> segs;
    for (const auto& p : catalog.patterns()) {
        auto parts = split_dotted(p.callee);
        if (!parts.empty()) segs.insert(std::string(parts.back()));
    }
    return {segs.begin(), segs.end()};
}

namespace detail {

inline bool ident_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c >= 0x80;
}

// token must sit on an identifier boundary and be followed, after line
// continuations and spacing, by "("
inline bool has_call_token(std::string_view text, std::string_view name) {
    size_t pos = 0;
    while ((pos = text.find(name, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !ident_char(static_cast<unsigned char>(text[pos - 1]));
        size_t i = pos + name.size();
        if (left_ok && (i >= text.size() || !ident_char(static_cast<unsigned char>(text[i])))) {
            while (i < text.size() &&
                   (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n' ||
                    text[i] == '\\'))
                ++i;
            if (i < text.size() && text[i] == '(') return true;
        }
        ++pos;
    }
    return false;
}

inline bool any_call_token(std::string_view text, const std::vector<std::string>& tokens) {
    for (const auto& t : tokens)
        if (has_call_token(text, t)) return true;
    return false;
}

struct ClassifiedPath {
    FileOrigin origin = FileOrigin::Application;
    std::string package;
};

/// Origin by ownership: declared dependency roots win, then any site-packages
/// component marks the vendored tree, else application code.
inline ClassifiedPath classify_path(const std::filesystem::path& abs,
                                    const std::vector<DependencyRoot>& dep_roots) {
    auto under = [](const std::filesystem::path& root, const std::filesystem::path& p) {
        auto rel = p.lexically_relative(root);
        if (rel.empty()) return false;
        auto first = rel.begin();
        return first != rel.end() && first->generic_string() != "..";
    };
    for (const auto& dep : dep_roots) {
        std::error_code ec;
        auto dep_abs = std::filesystem::absolute(dep.path, ec).lexically_normal();
        if (!ec && under(dep_abs, abs)) return {FileOrigin::Dependency, dep.package_name};
    }
    auto it = abs.begin();
    for (; it != abs.end(); ++it) {
        if (it->generic_string() != "site-packages") continue;
        auto next = std::next(it);
        if (next == abs.end()) break;
        std::string pkg = next->generic_string();
        if (std::next(next) == abs.end() && pkg.size() > 3 &&
            pkg.compare(pkg.size() - 3, 3, ".py") == 0)
            pkg.resize(pkg.size() - 3); // top-level module file
        return {FileOrigin::Dependency, pkg};
    }
    return {FileOrigin::Application, ""};
}

inline std::optional<std::string> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) return std::nullopt;
    return bytes;
}

} // namespace detail

/// Walks every project and declared dependency root, applies the test filter
/// and the catalog-token pre-filter, and tags each survivor with its origin.
/// Paths are globally unique: a file reachable from two roots is collected once.
inline CollectOutcome collect_files(const CorpusLayout& layout, const RuleCatalog& catalog,
                                    const ScanOptions& options) {
    CollectOutcome out;
    const std::vector<std::string> tokens = candidate_tokens(catalog);
    std::set<std::string> seen_paths;

    for (const auto& proj : layout.project_roots) {
        static const std::vector<DependencyRoot> kNone;
        auto dep_it = layout.dependency_roots.find(proj.name);
        const auto& dep_roots = dep_it == layout.dependency_roots.end() ? kNone : dep_it->second;

        // path -> (origin, package, display prefix root)
        std::map<std::string, std::pair<detail::ClassifiedPath, std::filesystem::path>> found;
        auto walk = [&](const std::filesystem::path& root, bool is_dep_root,
                        const std::string& package) {
            std::error_code ec;
            auto root_abs = std::filesystem::absolute(root, ec).lexically_normal();
            if (ec) return;
            std::filesystem::recursive_directory_iterator it(
                root_abs, std::filesystem::directory_options::skip_permission_denied, ec);
            if (ec) return;
            for (auto end = std::filesystem::end(it); it != end; it.increment(ec)) {
                if (ec) break;
                if (!it->is_regular_file(ec)) continue;
                const std::filesystem::path& p = it->path();
                if (p.extension() != ".py") continue;
                auto abs = p.lexically_normal();
                detail::ClassifiedPath cls = is_dep_root
                                                 ? detail::ClassifiedPath{FileOrigin::Dependency,
                                                                          package}
                                                 : detail::classify_path(abs, dep_roots);
                found[abs.generic_string()] = {cls, root_abs};
            }
        };
        walk(proj.path, false, "");
        for (const auto& dep : dep_roots) walk(dep.path, true, dep.package_name);

        for (const auto& [path_str, info] : found) {
            if (!seen_paths.insert(path_str).second) continue;
            out.files_seen += 1;
            std::filesystem::path abs(path_str);
            const auto& [cls, root_abs] = info;
            // the test heuristic sees the path inside the scanned root, so a corpus
            // that happens to live under a directory named "tests" is unaffected
            if (!options.include_tests &&
                is_test_file(abs.lexically_relative(root_abs), options.test_rules)) {
                out.files_skipped_tests += 1;
                continue;
            }
            auto bytes = detail::read_bytes(abs);
            if (!bytes) {
                out.files_unreadable += 1;
                continue;
            }
            if (!detail::any_call_token(*bytes, tokens)) {
                out.files_skipped_no_tokens += 1;
                continue;
            }
            SourceFile meta;
            meta.path = abs;
            meta.origin = cls.origin;
            if (cls.origin == FileOrigin::Dependency && !cls.package.empty())
                meta.package_name = cls.package;
            meta.content_hash = content_fingerprint(*bytes);
            meta.project = proj.name;
            std::string rel = abs.lexically_relative(root_abs).generic_string();
            if (rel.empty() || rel == ".") rel = abs.filename().generic_string();
            if (meta.package_name && rel.rfind(*meta.package_name + "/", 0) != 0 &&
                rel.find("site-packages/") == std::string::npos)
                rel = *meta.package_name + "/" + rel;
            meta.display_path = proj.name + "/" + rel;
            out.files.push_back({std::move(meta), std::move(*bytes)});
        }
    }
    return out;
}

// --- deduplication ----------------------------------------------------------------

/// Identical vendored copies of a file produce identical keys regardless of
/// install location.
inline std::string dedupe_key(const Finding& f) {
    return f.content_hash + "|" + std::to_string(f.span.begin) + "-" +
           std::to_string(f.span.end) + "|" + std::string(rule_id(f.rule));
}

struct DedupeResult {
    std::vector<Finding> unique;             // first occurrence of each key, input order
    std::map<std::string, int> multiplicity; // key -> raw occurrence count
};

inline DedupeResult dedupe(const std::vector<Finding>& findings) {
    DedupeResult out;
    for (const auto& f : findings) {
        auto [it, fresh] = out.multiplicity.emplace(dedupe_key(f), 1);
        if (!fresh) {
            it->second += 1;
            continue;
        }
        out.unique.push_back(f);
    }
    return out;
}

// --- scan -------------------------------------------------------------------------

struct ProjectIndex {
    std::string project;
    std::vector<std::size_t> application; // indices into ScanResult::findings
    std::vector<std::size_t> dependency;
    bool uses_crypto = false; // at least one call matched a catalog pattern
    int files_analyzed = 0;

    int total() const {
        return static_cast<int>(application.size() + dependency.size());
    }
};

struct ScanResult {
    std::vector<Finding> findings;       // raw, deterministic project/path order
    std::vector<Finding> unique;         // deduped representatives (or raw copy)
    std::vector<int> multiplicity;       // parallel to unique
    std::map<std::string, int> multiplicity_by_key;
    bool deduped = true;
    ScanStats stats;
    std::vector<ProjectIndex> projects;  // layout order
    std::vector<ParseFailure> failures;  // parse diagnostics, path order
};

/// collect -> parse -> analyze -> dedupe. Per-file faults land in stats and
/// never abort the scan.
inline std::optional<ScanResult> scan(const CorpusLayout& layout, const RuleCatalog& catalog,
                                      const ScanOptions& options, std::string* error = nullptr) {
    std::string why;
    if (!validate_layout(layout, why)) {
        if (error) *error = why;
        return std::nullopt;
    }

    ScanResult result;
    result.deduped = options.dedupe_findings;

    CollectOutcome collected = collect_files(layout, catalog, options);
    result.stats.files_seen = collected.files_seen;
    result.stats.files_unreadable = collected.files_unreadable;
    result.stats.files_skipped_tests = collected.files_skipped_tests;
    result.stats.files_skipped_no_tokens = collected.files_skipped_no_tokens;
    result.stats.files_candidate = static_cast<int>(collected.files.size());

    std::map<std::string, std::size_t> project_slot;
    for (const auto& proj : layout.project_roots) {
        project_slot[proj.name] = result.projects.size();
        result.projects.push_back({proj.name, {}, {}, false, 0});
    }

    for (const auto& file : collected.files) {
        ProjectIndex& proj = result.projects[project_slot.at(file.meta.project)];
        ParseResult parsed = parse_source(file.meta.path, file.content, options.parse);
        if (!parsed.ok()) {
            if (parsed.failure->kind == ParseFailure::Kind::DepthExceeded)
                result.stats.depth_failures += 1;
            else
                result.stats.parse_failures += 1;
            result.failures.push_back(*parsed.failure);
            continue;
        }
        result.stats.files_parsed += 1;
        proj.files_analyzed += 1;

        AnalyzeOutcome outcome;
        std::vector<Finding> found =
            analyze_file(*parsed.tree, file.meta, catalog, options.analyzer, &outcome);
        if (outcome.matched_calls > 0) proj.uses_crypto = true;
        for (auto& f : found) {
            std::size_t index = result.findings.size();
            if (f.origin == FileOrigin::Application)
                proj.application.push_back(index);
            else
                proj.dependency.push_back(index);
            result.findings.push_back(std::move(f));
        }
    }

    DedupeResult dd = dedupe(result.findings);
    result.multiplicity_by_key = std::move(dd.multiplicity);
    if (options.dedupe_findings) {
        result.unique = std::move(dd.unique);
        result.multiplicity.reserve(result.unique.size());
        for (const auto& f : result.unique)
            result.multiplicity.push_back(result.multiplicity_by_key.at(dedupe_key(f)));
    } else {
        result.unique = result.findings;
        result.multiplicity.assign(result.unique.size(), 1);
    }
    return result;
}

inline std::optional<ScanResult> scan(const CorpusLayout& layout, const RuleCatalog& catalog,
                                      std::string* error = nullptr) {
    return scan(layout, catalog, layout.options, error);
}

} // namespace cipherlint
