#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cipherlint/source.hpp"

namespace cipherlint {

enum class NodeKind {
    Module,
    FunctionDef,
    Call,
    Assignment,
    Name,
    Attribute,
    Literal,
    BinaryOp,
    Keyword,
    Import,
    Other,
};

inline const char* to_string(NodeKind k) {
    switch (k) {
    case NodeKind::Module: return "Module";
    case NodeKind::FunctionDef: return "FunctionDef";
    case NodeKind::Call: return "Call";
    case NodeKind::Assignment: return "Assignment";
    case NodeKind::Name: return "Name";
    case NodeKind::Attribute: return "Attribute";
    case NodeKind::Literal: return "Literal";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::Keyword: return "Keyword";
    case NodeKind::Import: return "Import";
    case NodeKind::Other: return "Other";
    }
    return "?";
}

/// Decoded constant carried by a Literal node. `text_value` holds the decoded
/// string or raw byte payload; f-strings and overflowing integers keep their
/// source text only and are never foldable.
struct LiteralValue {
    enum class Kind { Int, Float, Str, Bytes, Bool, None, Ellipsis, FString };
    Kind kind = Kind::Int;
    long long int_value = 0;
    double float_value = 0.0;
    std::string text_value;
    bool decode_ok = true; // false for f-strings, int overflow, bad escapes
};

/// One import statement, normalized.
///   import A.B as c, D       -> {is_from:false, items:[{A.B,c},{D,}]}
///   from ..A import x as y   -> {is_from:true, relative_level:2, module:"A", items:[{x,y}]}
///   from A import *          -> items:[{*,}]
struct ImportClause {
    struct Item {
        std::string name;
        std::string alias;
    };
    bool is_from = false;
    int relative_level = 0;
    std::string module;
    std::vector<Item> items;
};

/// Parameter of a FunctionDef. `default_child` indexes into the node's
/// children when a default expression exists.
struct Param {
    std::string name;
    int default_child = -1;
    bool is_vararg = false;   // *args
    bool is_kwvararg = false; // **kwargs
    bool keyword_only = false;
};

/// FunctionDef children layout: [decorators...][defaults...][body Suite].
struct FunctionInfo {
    std::string name;
    std::vector<Param> params;
    int decorator_count = 0;
    int default_count = 0;
    bool is_async = false;
};

struct ClassInfo {
    std::string name;
    int decorator_count = 0;
};

/// Call children layout: [callee][positional...][Keyword / starred in source
/// order]. `args_opaque` is set when * or ** unpacking makes the positional
/// mapping unreliable.
struct CallInfo {
    int positional_count = 0;
    bool args_opaque = false;
};

/// Assignment children layout: [targets...][annotation?][value]. The value is
/// always the child at `value_index`.
struct AssignInfo {
    int value_index = 0;
    bool annotated = false;
};

/// Statement suites are wrapped in an Other node carrying this tag.
/// `conditional` marks suites that may not execute on the path to a later
/// statement (if/else arms, loop bodies, try/except arms).
struct SuiteInfo {
    bool conditional = false;
};

using NodePayload = std::variant<std::monostate, LiteralValue, ImportClause, FunctionInfo,
                                 ClassInfo, CallInfo, AssignInfo, SuiteInfo>;

/// Normalized syntax node. `text` holds the source token text for leaves, the
/// operator lexeme for BinaryOp, the attribute name for Attribute, and the
/// argument name for Keyword.
struct SyntaxNode {
    NodeKind kind = NodeKind::Other;
    Span span;
    std::string text;
    std::vector<SyntaxNode> children;
    NodePayload payload;

    bool is_leaf() const { return children.empty(); }

    const LiteralValue* literal() const { return std::get_if<LiteralValue>(&payload); }
    const ImportClause* import_clause() const { return std::get_if<ImportClause>(&payload); }
    const FunctionInfo* function() const { return std::get_if<FunctionInfo>(&payload); }
    const ClassInfo* class_info() const { return std::get_if<ClassInfo>(&payload); }
    const CallInfo* call_info() const { return std::get_if<CallInfo>(&payload); }
    const AssignInfo* assign_info() const { return std::get_if<AssignInfo>(&payload); }
    const SuiteInfo* suite_info() const { return std::get_if<SuiteInfo>(&payload); }

    const SyntaxNode* callee() const {
        if (kind != NodeKind::Call || children.empty()) return nullptr;
        return &children.front();
    }
};

/// Immutable parse of one file. Owns the source bytes and the node storage;
/// node addresses are stable for the lifetime of the tree, so analysis layers
/// pass `const SyntaxNode*` freely between threads.
class SyntaxTree {
public:
    SyntaxTree(std::string source, SyntaxNode root, std::filesystem::path path, bool lossy)
        : source_(std::move(source)), root_(std::move(root)), path_(std::move(path)),
          lossy_decode_(lossy) {
        index_parents(root_, nullptr);
    }

    SyntaxTree(const SyntaxTree&) = delete;
    SyntaxTree& operator=(const SyntaxTree&) = delete;

    const SyntaxNode& root() const { return root_; }
    std::string_view source() const { return source_; }
    const std::filesystem::path& path() const { return path_; }
    bool lossy_decode() const { return lossy_decode_; }

    std::string_view text_at(const Span& span) const {
        return std::string_view(source_).substr(span.begin, span.end - span.begin);
    }

    const SyntaxNode* parent(const SyntaxNode& node) const {
        auto it = parents_.find(&node);
        return it == parents_.end() ? nullptr : it->second;
    }

    /// Innermost enclosing FunctionDef, or nullptr for module scope.
    const SyntaxNode* enclosing_function(const SyntaxNode& node) const {
        for (const SyntaxNode* p = parent(node); p; p = parent(*p))
            if (p->kind == NodeKind::FunctionDef) return p;
        return nullptr;
    }

    /// Innermost enclosing class statement, or nullptr.
    const SyntaxNode* enclosing_class(const SyntaxNode& node) const {
        for (const SyntaxNode* p = parent(node); p; p = parent(*p))
            if (p->kind == NodeKind::Other && p->class_info()) return p;
        return nullptr;
    }

    bool is_ancestor(const SyntaxNode& ancestor, const SyntaxNode& node) const {
        for (const SyntaxNode* p = &node; p; p = parent(*p))
            if (p == &ancestor) return true;
        return false;
    }

private:
    void index_parents(const SyntaxNode& node, const SyntaxNode* parent) {
        parents_.emplace(&node, parent);
        for (const SyntaxNode& c : node.children) index_parents(c, &node);
    }

    std::string source_;
    SyntaxNode root_;
    std::filesystem::path path_;
    bool lossy_decode_ = false;
    std::unordered_map<const SyntaxNode*, const SyntaxNode*> parents_;
};

/// Preorder walk.
template <typename Fn>
void visit(const SyntaxNode& node, Fn&& fn) {
    fn(node);
    for (const SyntaxNode& c : node.children) visit(c, fn);
}

/// Dotted path of a Name / Attribute chain (`a.b.c` -> {"a","b","c"}).
/// Empty when the base is not a plain name (e.g. `f().attr`).
inline std::vector<std::string> dotted_parts(const SyntaxNode& expr) {
    std::vector<std::string> parts;
    const SyntaxNode* cur = &expr;
    while (cur->kind == NodeKind::Attribute) {
        parts.push_back(cur->text);
        if (cur->children.size() != 1) return {};
        cur = &cur->children.front();
    }
    if (cur->kind != NodeKind::Name) return {};
    // A dotted-name leaf ("a.b" in an import) expands to its segments.
    std::string base = cur->text;
    size_t start = 0;
    std::vector<std::string> head;
    while (true) {
        size_t dot = base.find('.', start);
        if (dot == std::string::npos) {
            head.push_back(base.substr(start));
            break;
        }
        head.push_back(base.substr(start, dot - start));
        start = dot + 1;
    }
    parts.insert(parts.end(), head.rbegin(), head.rend());
    std::reverse(parts.begin(), parts.end());
    return parts;
}

inline std::string join_dotted(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '.';
        out += parts[i];
    }
    return out;
}

inline std::vector<std::string> split_dotted(std::string_view dotted) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= dotted.size()) {
        size_t dot = dotted.find('.', start);
        if (dot == std::string_view::npos) {
            parts.emplace_back(dotted.substr(start));
            break;
        }
        parts.emplace_back(dotted.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

} // namespace cipherlint
