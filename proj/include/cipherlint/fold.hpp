#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "cipherlint/ast.hpp"
#include "cipherlint/imports.hpp"

namespace cipherlint {

/// A compile-time-known argument value. EnumConst covers named constants
/// (cipher-mode selectors) and, with random_source set, values produced by a
/// recognized randomness API: those are "known fresh", not known bytes.
struct ConstValue {
    enum class Kind { Bytes, Int, Str, EnumConst };
    Kind kind = Kind::Int;
    std::string data;      // Bytes / Str payload (decoded)
    long long number = 0;  // Int payload
    std::string enum_path; // EnumConst dotted path
    bool random_source = false;

    bool operator==(const ConstValue&) const = default;

    static ConstValue bytes(std::string v) {
        ConstValue c;
        c.kind = Kind::Bytes;
        c.data = std::move(v);
        return c;
    }
    static ConstValue str(std::string v) {
        ConstValue c;
        c.kind = Kind::Str;
        c.data = std::move(v);
        return c;
    }
    static ConstValue integer(long long v) {
        ConstValue c;
        c.kind = Kind::Int;
        c.number = v;
        return c;
    }
    static ConstValue enum_const(std::string path, bool random = false) {
        ConstValue c;
        c.kind = Kind::EnumConst;
        c.enum_path = std::move(path);
        c.random_source = random;
        return c;
    }
};

inline std::string to_string(const ConstValue& v) {
    static const char* hexdig = "0123456789abcdef";
    switch (v.kind) {
    case ConstValue::Kind::Int:
        return "int:" + std::to_string(v.number);
    case ConstValue::Kind::Str: {
        std::string out = "str:";
        for (unsigned char c : v.data) {
            if (c >= 0x20 && c < 0x7f && c != '\\') out += static_cast<char>(c);
            else {
                out += "\\x";
                out += hexdig[c >> 4];
                out += hexdig[c & 0xf];
            }
        }
        return out;
    }
    case ConstValue::Kind::Bytes: {
        std::string out = "bytes:";
        for (unsigned char c : v.data) {
            out += hexdig[c >> 4];
            out += hexdig[c & 0xf];
        }
        return out;
    }
    case ConstValue::Kind::EnumConst:
        return (v.random_source ? "random:" : "enum:") + v.enum_path;
    }
    return "?";
}

/// Rewrites the leading package segment through an alias table
/// (e.g. a package importable under two top-level names).
inline void apply_root_alias(std::vector<std::string>& parts,
                             const std::unordered_map<std::string, std::string>* aliases) {
    if (!aliases || parts.empty()) return;
    auto it = aliases->find(parts.front());
    if (it != aliases->end()) parts.front() = it->second;
}

struct FoldContext {
    const ImportMap* imports = nullptr;
    // dotted attribute paths that denote named constants
    const std::unordered_set<std::string>* enum_paths = nullptr;
    // dotted callable paths whose call result denotes the named constant
    const std::unordered_set<std::string>* enum_constructors = nullptr;
    // dotted callable paths whose call result is fresh randomness
    const std::unordered_set<std::string>* random_sources = nullptr;
    // top-level package aliases applied before table lookups
    const std::unordered_map<std::string, std::string>* root_aliases = nullptr;
    // without import resolution, match table paths by trailing segments
    bool suffix_match = false;
    // sequence results larger than this are not folded at all
    size_t max_bytes = 1u << 20;
};

namespace detail {

inline bool set_has_path(const std::unordered_set<std::string>& set, const QualifiedName& q,
                         bool suffix_match, std::string* hit) {
    std::string dotted = q.dotted();
    if (set.count(dotted)) {
        *hit = dotted;
        return true;
    }
    if (!q.resolved && suffix_match) {
        std::string suffix = "." + dotted;
        for (const std::string& entry : set) {
            if (entry.size() > suffix.size() &&
                entry.compare(entry.size() - suffix.size(), suffix.size(), suffix) == 0) {
                *hit = entry;
                return true;
            }
        }
    }
    return false;
}

} // namespace detail

/// Evaluates an expression to a constant when it falls in the supported set:
/// int/str/bytes literals, sequence repetition by an int, same-type sequence
/// concatenation, recognized named constants, and calls to recognized
/// constant constructors or randomness sources. Anything else is not folded.
inline std::optional<ConstValue> fold_constant(const SyntaxNode& expr, const FoldContext& ctx) {
    switch (expr.kind) {
    case NodeKind::Literal: {
        const LiteralValue* v = expr.literal();
        if (!v || !v->decode_ok) {
            // bools decode trivially; everything else must have decoded
            if (!v || v->kind != LiteralValue::Kind::Bool) return std::nullopt;
        }
        switch (v->kind) {
        case LiteralValue::Kind::Int:
            return ConstValue::integer(v->int_value);
        case LiteralValue::Kind::Bool:
            return ConstValue::integer(v->int_value);
        case LiteralValue::Kind::Str:
            return ConstValue::str(v->text_value);
        case LiteralValue::Kind::Bytes:
            return ConstValue::bytes(v->text_value);
        default:
            return std::nullopt;
        }
    }
    case NodeKind::BinaryOp: {
        if (expr.children.size() != 2) return std::nullopt;
        if (expr.text != "*" && expr.text != "+") return std::nullopt;
        auto lhs = fold_constant(expr.children[0], ctx);
        if (!lhs) return std::nullopt;
        auto rhs = fold_constant(expr.children[1], ctx);
        if (!rhs) return std::nullopt;
        if (expr.text == "*") {
            // sequence repetition, either operand order
            const ConstValue* seq = nullptr;
            const ConstValue* count = nullptr;
            if ((lhs->kind == ConstValue::Kind::Bytes || lhs->kind == ConstValue::Kind::Str) &&
                rhs->kind == ConstValue::Kind::Int) {
                seq = &*lhs;
                count = &*rhs;
            } else if ((rhs->kind == ConstValue::Kind::Bytes ||
                        rhs->kind == ConstValue::Kind::Str) &&
                       lhs->kind == ConstValue::Kind::Int) {
                seq = &*rhs;
                count = &*lhs;
            } else {
                return std::nullopt;
            }
            long long n = count->number < 0 ? 0 : count->number;
            if (static_cast<unsigned long long>(n) * seq->data.size() > ctx.max_bytes)
                return std::nullopt;
            ConstValue out;
            out.kind = seq->kind;
            out.data.reserve(seq->data.size() * static_cast<size_t>(n));
            for (long long i = 0; i < n; ++i) out.data += seq->data;
            return out;
        }
        // '+': same-kind sequence concatenation only
        if (lhs->kind != rhs->kind) return std::nullopt;
        if (lhs->kind != ConstValue::Kind::Bytes && lhs->kind != ConstValue::Kind::Str)
            return std::nullopt;
        if (lhs->data.size() + rhs->data.size() > ctx.max_bytes) return std::nullopt;
        ConstValue out;
        out.kind = lhs->kind;
        out.data = lhs->data + rhs->data;
        return out;
    }
    case NodeKind::Name:
    case NodeKind::Attribute: {
        if (!ctx.enum_paths || !ctx.imports) return std::nullopt;
        QualifiedName q = qualify_name(expr, *ctx.imports, expr.span.begin);
        if (q.parts.empty()) return std::nullopt;
        apply_root_alias(q.parts, ctx.root_aliases);
        std::string hit;
        if (detail::set_has_path(*ctx.enum_paths, q, ctx.suffix_match, &hit))
            return ConstValue::enum_const(hit);
        return std::nullopt;
    }
    case NodeKind::Call: {
        if (!ctx.imports) return std::nullopt;
        const SyntaxNode* callee = expr.callee();
        if (!callee) return std::nullopt;
        QualifiedName q = qualify_name(*callee, *ctx.imports, expr.span.begin);
        if (q.parts.empty()) return std::nullopt;
        apply_root_alias(q.parts, ctx.root_aliases);
        std::string hit;
        if (ctx.random_sources &&
            detail::set_has_path(*ctx.random_sources, q, ctx.suffix_match, &hit))
            return ConstValue::enum_const(hit, true);
        if (ctx.enum_constructors &&
            detail::set_has_path(*ctx.enum_constructors, q, ctx.suffix_match, &hit))
            return ConstValue::enum_const(hit);
        return std::nullopt;
    }
    default:
        return std::nullopt;
    }
}

} // namespace cipherlint
