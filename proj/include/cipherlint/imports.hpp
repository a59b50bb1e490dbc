#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cipherlint/ast.hpp"

namespace cipherlint {

/// One local name introduced by an import statement.
struct ImportBinding {
    std::string local_name;
    std::string target;    // fully qualified dotted path; empty when relative
    bool relative = false; // from-import with leading dots; target unknowable
    uint32_t position = 0; // byte offset where the binding takes effect
};

/// All import bindings of one module, in document order. Lookups are
/// position-aware so a later rebinding of the same name shadows an earlier
/// one only for code below it.
class ImportMap {
public:
    void add(ImportBinding binding) { bindings_.push_back(std::move(binding)); }

    const ImportBinding* lookup(std::string_view name, uint32_t before) const {
        const ImportBinding* best = nullptr;
        for (const ImportBinding& b : bindings_) {
            if (b.position >= before) break;
            if (b.local_name == name) best = &b;
        }
        return best;
    }

    bool has_wildcard_before(uint32_t before) const {
        for (uint32_t p : wildcard_positions_)
            if (p < before) return true;
        return false;
    }

    /// Modules named in `from M import *` clauses above the given offset.
    std::vector<std::string> wildcard_modules(uint32_t before) const {
        std::vector<std::string> out;
        for (size_t i = 0; i < wildcard_modules_.size(); ++i)
            if (wildcard_positions_[i] < before) out.push_back(wildcard_modules_[i]);
        return out;
    }

    void add_wildcard(std::string module, uint32_t position) {
        wildcard_modules_.push_back(std::move(module));
        wildcard_positions_.push_back(position);
    }

    const std::vector<ImportBinding>& bindings() const { return bindings_; }

private:
    std::vector<ImportBinding> bindings_;
    std::vector<std::string> wildcard_modules_;
    std::vector<uint32_t> wildcard_positions_;
};

/// Collects every import in the tree, including those nested in functions.
/// Bindings take effect at the end of their statement.
inline ImportMap resolve_imports(const SyntaxTree& tree) {
    ImportMap map;
    visit(tree.root(), [&](const SyntaxNode& node) {
        if (node.kind != NodeKind::Import) return;
        const ImportClause* clause = node.import_clause();
        if (!clause) return;
        uint32_t pos = node.span.end;
        if (!clause->is_from) {
            // import A.B [as c]: without an alias only the top package binds
            for (const ImportClause::Item& item : clause->items) {
                ImportBinding b;
                b.position = pos;
                if (!item.alias.empty()) {
                    b.local_name = item.alias;
                    b.target = item.name;
                } else {
                    size_t dot = item.name.find('.');
                    b.local_name = item.name.substr(0, dot);
                    b.target = b.local_name;
                }
                map.add(std::move(b));
            }
        } else {
            for (const ImportClause::Item& item : clause->items) {
                if (item.name == "*") {
                    if (clause->relative_level == 0) map.add_wildcard(clause->module, pos);
                    continue;
                }
                ImportBinding b;
                b.position = pos;
                b.local_name = item.alias.empty() ? item.name : item.alias;
                if (clause->relative_level > 0) {
                    b.relative = true;
                } else {
                    b.target = clause->module.empty() ? item.name
                                                      : clause->module + "." + item.name;
                }
                map.add(std::move(b));
            }
        }
    });
    return map;
}

/// A callee expression flattened to dotted parts. `resolved` is true when the
/// base name was introduced by an absolute import, in which case `parts`
/// starts at the real top-level package.
struct QualifiedName {
    std::vector<std::string> parts;
    bool resolved = false;

    std::string dotted() const { return join_dotted(parts); }
};

/// Maps a call's callee expression to a qualified dotted path using the
/// import bindings in scope at the call site.
inline QualifiedName qualify_name(const SyntaxNode& expr, const ImportMap& imports,
                                  uint32_t at_position) {
    QualifiedName q;
    q.parts = dotted_parts(expr);
    if (q.parts.empty()) return q;
    const ImportBinding* b = imports.lookup(q.parts.front(), at_position);
    if (!b || b->relative) return q;
    std::vector<std::string> full = split_dotted(b->target);
    for (size_t i = 1; i < q.parts.size(); ++i) full.push_back(q.parts[i]);
    q.parts = std::move(full);
    q.resolved = true;
    return q;
}

inline QualifiedName qualify_callee(const SyntaxNode& call, const ImportMap& imports) {
    const SyntaxNode* callee = call.callee();
    if (!callee) return {};
    return qualify_name(*callee, imports, call.span.begin);
}

} // namespace cipherlint
