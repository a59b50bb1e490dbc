#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cipherlint/corpus.hpp"

namespace cipherlint {

enum class ReportFormat { Json, Csv, Text };

struct UnsupportedFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::optional<ReportFormat> parse_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "text") return ReportFormat::Text;
    return std::nullopt;
}

struct ProjectReportRow {
    std::string project;
    int total = 0;
    int app_count = 0;
    int dep_count = 0;
    bool uses_crypto = false;

    bool operator==(const ProjectReportRow&) const = default;
};

struct CorpusReport {
    int schema_version = 1;
    int total_findings = 0;
    int unique_findings = 0;
    int definite_count = 0;
    int potential_count = 0;
    // [library][rule] counts over raw findings
    std::array<std::array<int, 6>, 5> per_rule_per_library{};
    std::vector<ProjectReportRow> per_project;
    int projects_with_crypto = 0;
    int projects_with_misuse = 0;
    double pct_projects_with_misuse = 0.0; // of crypto-using projects
    double pct_app_code_misuses = 0.0;     // of raw findings
    // per rule: % of crypto-using projects with >=1 definite finding of it
    std::array<double, 6> per_rule_project_pct{};
    ScanStats scan_stats;

    bool deduped = true;
    std::vector<Finding> findings; // raw
    std::vector<Finding> unique;   // deduped representatives; = findings when !deduped
    std::vector<int> multiplicity; // parallel to unique

    int matrix_at(Library lib, Rule rule) const {
        return per_rule_per_library[static_cast<size_t>(lib)][static_cast<size_t>(rule)];
    }
};

// --- aggregation ------------------------------------------------------------------

inline CorpusReport aggregate(const std::vector<Finding>& findings,
                              const std::vector<Finding>& unique,
                              const std::vector<int>& multiplicity,
                              const std::vector<ProjectIndex>& projects, const ScanStats& stats,
                              bool deduped = true) {
    CorpusReport r;
    r.findings = findings;
    r.unique = unique;
    r.multiplicity = multiplicity;
    r.deduped = deduped;
    r.scan_stats = stats;

    r.total_findings = static_cast<int>(findings.size());
    r.unique_findings = static_cast<int>(unique.size());

    int app_findings = 0;
    for (const auto& f : findings) {
        if (f.confidence == Confidence::Definite)
            r.definite_count += 1;
        else
            r.potential_count += 1;
        r.per_rule_per_library[static_cast<size_t>(f.library)][static_cast<size_t>(f.rule)] += 1;
        if (f.origin == FileOrigin::Application) app_findings += 1;
    }

    // project name -> rules with a definite finding there
    std::map<std::string, std::set<Rule>> definite_rules;
    for (const auto& f : findings)
        if (f.confidence == Confidence::Definite) definite_rules[f.project].insert(f.rule);

    for (const auto& proj : projects) {
        ProjectReportRow row;
        row.project = proj.project;
        row.app_count = static_cast<int>(proj.application.size());
        row.dep_count = static_cast<int>(proj.dependency.size());
        row.total = row.app_count + row.dep_count;
        row.uses_crypto = proj.uses_crypto;
        if (row.uses_crypto) r.projects_with_crypto += 1;
        if (row.total > 0) r.projects_with_misuse += 1;
        r.per_project.push_back(std::move(row));
    }

    if (r.projects_with_crypto > 0) {
        r.pct_projects_with_misuse =
            100.0 * r.projects_with_misuse / r.projects_with_crypto;
        for (Rule rule : all_rules()) {
            int hit = 0;
            for (const auto& proj : r.per_project)
                if (proj.uses_crypto && definite_rules.count(proj.project) &&
                    definite_rules.at(proj.project).count(rule))
                    hit += 1;
            r.per_rule_project_pct[static_cast<size_t>(rule)] =
                100.0 * hit / r.projects_with_crypto;
        }
    }
    if (r.total_findings > 0)
        r.pct_app_code_misuses = 100.0 * app_findings / r.total_findings;
    return r;
}

inline CorpusReport aggregate(const ScanResult& scan) {
    return aggregate(scan.findings, scan.unique, scan.multiplicity, scan.projects, scan.stats,
                     scan.deduped);
}

// --- json -------------------------------------------------------------------------

namespace detail {

inline std::string hex_encode(std::string_view bytes) {
    static const char* dig = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out += dig[c >> 4];
        out += dig[c & 0xf];
    }
    return out;
}

inline std::optional<std::string> hex_decode(std::string_view hex) {
    if (hex.size() % 2) return std::nullopt;
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = val(hex[i]), lo = val(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out += static_cast<char>(hi << 4 | lo);
    }
    return out;
}

inline nlohmann::ordered_json const_value_to_json(const ConstValue& v) {
    nlohmann::ordered_json j;
    switch (v.kind) {
    case ConstValue::Kind::Int:
        j["kind"] = "int";
        j["value"] = v.number;
        break;
    case ConstValue::Kind::Str:
        j["kind"] = "str";
        j["hex"] = hex_encode(v.data); // payload may not be valid UTF-8
        break;
    case ConstValue::Kind::Bytes:
        j["kind"] = "bytes";
        j["hex"] = hex_encode(v.data);
        break;
    case ConstValue::Kind::EnumConst:
        j["kind"] = "enum";
        j["path"] = v.enum_path;
        j["random_source"] = v.random_source;
        break;
    }
    j["display"] = to_string(v);
    return j;
}

inline std::optional<ConstValue> const_value_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) return std::nullopt;
    std::string kind = j["kind"].get<std::string>();
    if (kind == "int") return ConstValue::integer(j.value("value", 0ll));
    if (kind == "str" || kind == "bytes") {
        auto data = hex_decode(j.value("hex", ""));
        if (!data) return std::nullopt;
        return kind == "str" ? ConstValue::str(std::move(*data))
                             : ConstValue::bytes(std::move(*data));
    }
    if (kind == "enum")
        return ConstValue::enum_const(j.value("path", ""), j.value("random_source", false));
    return std::nullopt;
}

inline std::optional<SliceStep::Kind> step_kind_from_name(std::string_view name) {
    for (auto k : {SliceStep::Kind::HardCoded, SliceStep::Kind::LocalAssign,
                   SliceStep::Kind::GlobalAssign, SliceStep::Kind::CallerParam})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

inline std::optional<UnresolvedReason> reason_from_name(std::string_view name) {
    for (auto r : {UnresolvedReason::NoCallers, UnresolvedReason::DepthExceeded,
                   UnresolvedReason::DynamicValue, UnresolvedReason::ExternalInput})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

inline nlohmann::ordered_json span_to_json(const Span& s) {
    return {{"begin", s.begin}, {"end", s.end}, {"line", s.line}, {"column", s.column}};
}

inline Span span_from_json(const nlohmann::json& j) {
    Span s;
    s.begin = j.value("begin", 0u);
    s.end = j.value("end", 0u);
    s.line = j.value("line", 1u);
    s.column = j.value("column", 0u);
    return s;
}

inline nlohmann::ordered_json finding_to_json(const Finding& f) {
    nlohmann::ordered_json j;
    j["rule"] = std::string(rule_id(f.rule));
    j["library"] = std::string(library_name(f.library));
    j["confidence"] = std::string(to_string(f.confidence));
    j["file"] = f.path;
    j["line"] = f.line;
    j["column"] = f.column;
    j["span"] = span_to_json(f.span);
    j["callee"] = f.callee;
    j["argument"] = f.argument;
    j["arg_keyword"] = f.arg_keyword;
    j["arg_position"] = f.arg_position;
    j["resolved"] = f.resolved ? const_value_to_json(*f.resolved) : nlohmann::ordered_json();
    j["reason"] = f.reason ? nlohmann::ordered_json(std::string(to_string(*f.reason)))
                           : nlohmann::ordered_json();
    j["implicit_default"] = f.implicit_default;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& st : f.trace) {
        nlohmann::ordered_json js;
        js["kind"] = std::string(to_string(st.kind));
        js["span"] = span_to_json(st.span);
        js["detail"] = st.detail;
        steps.push_back(std::move(js));
    }
    j["trace"] = std::move(steps);
    j["message"] = f.message;
    j["project"] = f.project;
    j["origin"] = to_string(f.origin);
    j["content_hash"] = f.content_hash;
    return j;
}

inline std::optional<Finding> finding_from_json(const nlohmann::json& j, std::string& error) {
    Finding f;
    auto rule = rule_from_id(j.value("rule", ""));
    auto lib = library_from_name(j.value("library", ""));
    if (!j.is_object() || !rule || !lib) {
        error = "finding needs a valid rule and library";
        return std::nullopt;
    }
    f.rule = *rule;
    f.library = *lib;
    f.confidence = j.value("confidence", "") == to_string(Confidence::Definite)
                       ? Confidence::Definite
                       : Confidence::Potential;
    f.path = j.value("file", "");
    f.line = j.value("line", 1u);
    f.column = j.value("column", 0u);
    if (j.contains("span")) f.span = span_from_json(j["span"]);
    f.callee = j.value("callee", "");
    f.argument = j.value("argument", "");
    f.arg_keyword = j.value("arg_keyword", "");
    f.arg_position = j.value("arg_position", -1);
    if (j.contains("resolved") && !j["resolved"].is_null()) {
        auto v = const_value_from_json(j["resolved"]);
        if (!v) {
            error = "malformed resolved value";
            return std::nullopt;
        }
        f.resolved = std::move(*v);
    }
    if (j.contains("reason") && !j["reason"].is_null()) {
        auto r = reason_from_name(j["reason"].get<std::string>());
        if (!r) {
            error = "unknown unresolved reason";
            return std::nullopt;
        }
        f.reason = *r;
    }
    f.implicit_default = j.value("implicit_default", false);
    if (j.contains("trace")) {
        for (const auto& js : j["trace"]) {
            SliceStep st;
            auto kind = step_kind_from_name(js.value("kind", ""));
            if (!kind) {
                error = "unknown trace step kind";
                return std::nullopt;
            }
            st.kind = *kind;
            if (js.contains("span")) st.span = span_from_json(js["span"]);
            st.detail = js.value("detail", "");
            f.trace.push_back(std::move(st));
        }
    }
    f.message = j.value("message", "");
    f.project = j.value("project", "");
    f.origin = j.value("origin", "") == "dependency" ? FileOrigin::Dependency
                                                     : FileOrigin::Application;
    f.content_hash = j.value("content_hash", "");
    return f;
}

inline nlohmann::ordered_json stats_to_json(const ScanStats& s) {
    nlohmann::ordered_json j;
    j["files_seen"] = s.files_seen;
    j["files_candidate"] = s.files_candidate;
    j["files_parsed"] = s.files_parsed;
    j["parse_failures"] = s.parse_failures;
    j["depth_failures"] = s.depth_failures;
    j["files_unreadable"] = s.files_unreadable;
    j["files_skipped_tests"] = s.files_skipped_tests;
    j["files_skipped_no_tokens"] = s.files_skipped_no_tokens;
    return j;
}

inline ScanStats stats_from_json(const nlohmann::json& j) {
    ScanStats s;
    s.files_seen = j.value("files_seen", 0);
    s.files_candidate = j.value("files_candidate", 0);
    s.files_parsed = j.value("files_parsed", 0);
    s.parse_failures = j.value("parse_failures", 0);
    s.depth_failures = j.value("depth_failures", 0);
    s.files_unreadable = j.value("files_unreadable", 0);
    s.files_skipped_tests = j.value("files_skipped_tests", 0);
    s.files_skipped_no_tokens = j.value("files_skipped_no_tokens", 0);
    return s;
}

} // namespace detail

inline nlohmann::ordered_json report_to_json(const CorpusReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = r.schema_version;
    j["total_findings"] = r.total_findings;
    j["unique_findings"] = r.unique_findings;
    j["definite_count"] = r.definite_count;
    j["potential_count"] = r.potential_count;

    nlohmann::ordered_json matrix;
    for (Library lib : all_libraries()) {
        nlohmann::ordered_json row;
        for (Rule rule : all_rules())
            row[std::string(rule_id(rule))] = r.matrix_at(lib, rule);
        matrix[std::string(library_name(lib))] = std::move(row);
    }
    j["per_rule_per_library"] = std::move(matrix);

    nlohmann::ordered_json projects = nlohmann::ordered_json::array();
    for (const auto& row : r.per_project) {
        nlohmann::ordered_json jp;
        jp["project"] = row.project;
        jp["total"] = row.total;
        jp["app_count"] = row.app_count;
        jp["dep_count"] = row.dep_count;
        jp["uses_crypto"] = row.uses_crypto;
        projects.push_back(std::move(jp));
    }
    j["per_project"] = std::move(projects);

    j["projects_with_crypto"] = r.projects_with_crypto;
    j["projects_with_misuse"] = r.projects_with_misuse;
    j["pct_projects_with_misuse"] = r.pct_projects_with_misuse;
    j["pct_app_code_misuses"] = r.pct_app_code_misuses;

    nlohmann::ordered_json pcts;
    for (Rule rule : all_rules())
        pcts[std::string(rule_id(rule))] = r.per_rule_project_pct[static_cast<size_t>(rule)];
    j["per_rule_project_pct"] = std::move(pcts);

    j["scan_stats"] = detail::stats_to_json(r.scan_stats);
    j["deduped"] = r.deduped;

    nlohmann::ordered_json raw = nlohmann::ordered_json::array();
    for (const auto& f : r.findings) raw.push_back(detail::finding_to_json(f));
    j["findings"] = std::move(raw);

    nlohmann::ordered_json uniq = nlohmann::ordered_json::array();
    for (size_t i = 0; i < r.unique.size(); ++i) {
        nlohmann::ordered_json jf = detail::finding_to_json(r.unique[i]);
        jf["multiplicity"] = i < r.multiplicity.size() ? r.multiplicity[i] : 1;
        uniq.push_back(std::move(jf));
    }
    j["unique"] = std::move(uniq);
    return j;
}

inline std::optional<CorpusReport> report_from_json(const nlohmann::json& j, std::string& error) {
    if (!j.is_object()) {
        error = "report document is not a JSON object";
        return std::nullopt;
    }
    CorpusReport r;
    r.schema_version = j.value("schema_version", 1);
    if (r.schema_version != 1) {
        error = "unsupported schema_version " + std::to_string(r.schema_version);
        return std::nullopt;
    }
    r.total_findings = j.value("total_findings", 0);
    r.unique_findings = j.value("unique_findings", 0);
    r.definite_count = j.value("definite_count", 0);
    r.potential_count = j.value("potential_count", 0);
    if (j.contains("per_rule_per_library"))
        for (Library lib : all_libraries()) {
            auto lib_key = std::string(library_name(lib));
            if (!j["per_rule_per_library"].contains(lib_key)) continue;
            const auto& row = j["per_rule_per_library"][lib_key];
            for (Rule rule : all_rules())
                r.per_rule_per_library[static_cast<size_t>(lib)][static_cast<size_t>(rule)] =
                    row.value(std::string(rule_id(rule)), 0);
        }
    if (j.contains("per_project"))
        for (const auto& jp : j["per_project"]) {
            ProjectReportRow row;
            row.project = jp.value("project", "");
            row.total = jp.value("total", 0);
            row.app_count = jp.value("app_count", 0);
            row.dep_count = jp.value("dep_count", 0);
            row.uses_crypto = jp.value("uses_crypto", false);
            r.per_project.push_back(std::move(row));
        }
    r.projects_with_crypto = j.value("projects_with_crypto", 0);
    r.projects_with_misuse = j.value("projects_with_misuse", 0);
    r.pct_projects_with_misuse = j.value("pct_projects_with_misuse", 0.0);
    r.pct_app_code_misuses = j.value("pct_app_code_misuses", 0.0);
    if (j.contains("per_rule_project_pct"))
        for (Rule rule : all_rules())
            r.per_rule_project_pct[static_cast<size_t>(rule)] =
                j["per_rule_project_pct"].value(std::string(rule_id(rule)), 0.0);
    if (j.contains("scan_stats")) r.scan_stats = detail::stats_from_json(j["scan_stats"]);
    r.deduped = j.value("deduped", true);
    if (j.contains("findings"))
        for (const auto& jf : j["findings"]) {
            auto f = detail::finding_from_json(jf, error);
            if (!f) return std::nullopt;
            r.findings.push_back(std::move(*f));
        }
    if (j.contains("unique"))
        for (const auto& jf : j["unique"]) {
            auto f = detail::finding_from_json(jf, error);
            if (!f) return std::nullopt;
            r.unique.push_back(std::move(*f));
            r.multiplicity.push_back(jf.value("multiplicity", 1));
        }
    return r;
}

/// Structural equality through the canonical serialization.
inline bool operator==(const CorpusReport& a, const CorpusReport& b) {
    return report_to_json(a) == report_to_json(b);
}

// --- csv / text -------------------------------------------------------------------

namespace detail {

inline std::string csv_field(std::string_view raw) {
    bool needs_quote = raw.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quote) return std::string(raw);
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string pct_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

inline std::string render_csv(const CorpusReport& r) {
    std::string out = "project,file,line,column,rule,library,confidence,resolved value,origin\n";
    for (const auto& f : r.findings) {
        out += detail::csv_field(f.project);
        out += ',';
        out += detail::csv_field(f.path);
        out += ',';
        out += std::to_string(f.line);
        out += ',';
        out += std::to_string(f.column);
        out += ',';
        out += rule_id(f.rule);
        out += ',';
        out += library_name(f.library);
        out += ',';
        out += to_string(f.confidence);
        out += ',';
        out += detail::csv_field(f.resolved ? to_string(*f.resolved) : "");
        out += ',';
        out += to_string(f.origin);
        out += '\n';
    }
    out += "\nmetric,value\n";
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += detail::csv_field(key);
        out += ',';
        out += detail::csv_field(value);
        out += '\n';
    };
    kv("schema_version", std::to_string(r.schema_version));
    kv("total_findings", std::to_string(r.total_findings));
    kv("unique_findings", std::to_string(r.unique_findings));
    kv("definite_count", std::to_string(r.definite_count));
    kv("potential_count", std::to_string(r.potential_count));
    kv("projects_with_crypto", std::to_string(r.projects_with_crypto));
    kv("projects_with_misuse", std::to_string(r.projects_with_misuse));
    kv("pct_projects_with_misuse", detail::pct_text(r.pct_projects_with_misuse));
    kv("pct_app_code_misuses", detail::pct_text(r.pct_app_code_misuses));
    for (Rule rule : all_rules())
        kv("pct_projects_" + std::string(rule_id(rule)),
           detail::pct_text(r.per_rule_project_pct[static_cast<size_t>(rule)]));
    for (Library lib : all_libraries())
        for (Rule rule : all_rules())
            kv("findings_" + std::string(library_name(lib)) + "_" + std::string(rule_id(rule)),
               std::to_string(r.matrix_at(lib, rule)));
    kv("files_seen", std::to_string(r.scan_stats.files_seen));
    kv("files_candidate", std::to_string(r.scan_stats.files_candidate));
    kv("files_parsed", std::to_string(r.scan_stats.files_parsed));
    kv("parse_failures", std::to_string(r.scan_stats.parse_failures));
    kv("depth_failures", std::to_string(r.scan_stats.depth_failures));
    kv("files_unreadable", std::to_string(r.scan_stats.files_unreadable));
    return out;
}

inline std::string render_text(const CorpusReport& r) {
    std::ostringstream out;
    auto line = [&out](std::string_view label, const std::string& value) {
        out << "  " << label;
        for (size_t i = label.size(); i < 28; ++i) out << ' ';
        out << value << '\n';
    };
    out << "scan\n";
    line("files seen", std::to_string(r.scan_stats.files_seen));
    line("candidates", std::to_string(r.scan_stats.files_candidate));
    line("parsed", std::to_string(r.scan_stats.files_parsed));
    line("parse failures", std::to_string(r.scan_stats.parse_failures));
    line("depth failures", std::to_string(r.scan_stats.depth_failures));
    line("unreadable", std::to_string(r.scan_stats.files_unreadable));
    line("skipped as tests", std::to_string(r.scan_stats.files_skipped_tests));
    line("skipped by token filter", std::to_string(r.scan_stats.files_skipped_no_tokens));

    out << "\nfindings\n";
    line("total", std::to_string(r.total_findings));
    line("unique", std::to_string(r.unique_findings));
    line("definite", std::to_string(r.definite_count));
    line("potential", std::to_string(r.potential_count));

    out << "\nfindings per rule and library\n";
    size_t lib_width = 7; // "library"
    for (Library lib : all_libraries())
        lib_width = std::max(lib_width, std::string(library_name(lib)).size());
    out << "  " << "library";
    for (size_t i = 7; i < lib_width; ++i) out << ' ';
    for (Rule rule : all_rules()) out << "  " << rule_id(rule) << "  ";
    out << " total\n";
    for (Library lib : all_libraries()) {
        std::string name(library_name(lib));
        out << "  " << name;
        for (size_t i = name.size(); i < lib_width; ++i) out << ' ';
        int row_total = 0;
        for (Rule rule : all_rules()) {
            std::string cell = std::to_string(r.matrix_at(lib, rule));
            row_total += r.matrix_at(lib, rule);
            for (size_t i = cell.size(); i < 4; ++i) out << ' ';
            out << cell << "  ";
        }
        std::string total = std::to_string(row_total);
        for (size_t i = total.size(); i < 6; ++i) out << ' ';
        out << total << '\n';
    }

    out << "\nfindings per project\n";
    size_t proj_width = 7;
    for (const auto& row : r.per_project)
        proj_width = std::max(proj_width, row.project.size());
    out << "  project";
    for (size_t i = 7; i < proj_width; ++i) out << ' ';
    out << "  total  application  dependency  crypto\n";
    for (const auto& row : r.per_project) {
        out << "  " << row.project;
        for (size_t i = row.project.size(); i < proj_width; ++i) out << ' ';
        auto cell = [&out](const std::string& v, size_t w) {
            for (size_t i = v.size(); i < w; ++i) out << ' ';
            out << v;
        };
        cell(std::to_string(row.total), 7);
        cell(std::to_string(row.app_count), 13);
        cell(std::to_string(row.dep_count), 12);
        cell(row.uses_crypto ? "yes" : "no", 8);
        out << '\n';
    }

    out << "\nproject percentages (crypto-using projects as base)\n";
    line("projects with crypto", std::to_string(r.projects_with_crypto));
    line("projects with misuse", std::to_string(r.projects_with_misuse));
    line("pct with misuse", detail::pct_text(r.pct_projects_with_misuse) + "%");
    line("application-code share", detail::pct_text(r.pct_app_code_misuses) + "%");
    out << "\nprojects with a definite finding per rule\n";
    for (Rule rule : all_rules())
        line(std::string(rule_id(rule)),
             detail::pct_text(r.per_rule_project_pct[static_cast<size_t>(rule)]) + "%");
    return out.str();
}

inline std::string render(const CorpusReport& r, ReportFormat format) {
    switch (format) {
    case ReportFormat::Json: return report_to_json(r).dump(2) + "\n";
    case ReportFormat::Csv: return render_csv(r);
    case ReportFormat::Text: return render_text(r);
    }
    throw UnsupportedFormat("unsupported report format");
}

} // namespace cipherlint
