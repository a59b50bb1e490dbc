#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cipherlint/catalog.hpp"
#include "cipherlint/imports.hpp"

namespace cipherlint {

/// One call expression together with every catalog pattern it satisfies.
struct MatchedCall {
    const SyntaxNode* call = nullptr;
    QualifiedName callee;
    std::vector<const CallPattern*> patterns;
};

struct MatchOptions {
    // Also match calls whose base name no import explains, by comparing the
    // trailing segments of the written name against pattern callees. Off by
    // default: it trades precision for recall.
    bool bare_name_fallback = false;
};

enum class ArgPresence { Present, Absent, Opaque };

struct ArgLookup {
    ArgPresence presence = ArgPresence::Absent;
    const SyntaxNode* value = nullptr;
    // where the call supplied it: a keyword name, or a 0-based position
    std::string keyword;
    int position = -1;
};

/// Finds the argument a selector describes. Keyword spellings win over
/// positions. With *args / **kwargs in the call, absence cannot be proven,
/// so a miss reports Opaque instead of Absent.
inline ArgLookup find_argument(const SyntaxNode& call, const ArgSelector& sel) {
    const CallInfo* info = call.call_info();
    ArgLookup out;
    if (!info || call.children.empty()) return out;
    for (size_t i = 1; i < call.children.size(); ++i) {
        const SyntaxNode& c = call.children[i];
        if (c.kind != NodeKind::Keyword || c.children.empty()) continue;
        for (const std::string& kw : sel.keywords)
            if (c.text == kw) {
                out.presence = ArgPresence::Present;
                out.value = &c.children.front();
                out.keyword = kw;
                return out;
            }
    }
    if (!info->args_opaque && sel.position >= 0 && sel.position < info->positional_count) {
        out.presence = ArgPresence::Present;
        out.value = &call.children[1 + sel.position];
        out.position = sel.position;
        return out;
    }
    if (info->args_opaque) out.presence = ArgPresence::Opaque;
    return out;
}

/// Walks the tree and pairs every call with the catalog patterns whose callee
/// path it matches, in document order.
inline std::vector<MatchedCall> match_call_sites(const SyntaxTree& tree,
                                                 const ImportMap& imports,
                                                 const RuleCatalog& catalog,
                                                 const MatchOptions& opts = {}) {
    std::unordered_map<std::string, std::vector<const CallPattern*>> by_callee;
    for (const CallPattern& p : catalog.patterns()) by_callee[p.callee].push_back(&p);

    std::vector<MatchedCall> out;
    visit(tree.root(), [&](const SyntaxNode& node) {
        if (node.kind != NodeKind::Call) return;
        QualifiedName q = qualify_callee(node, imports);
        if (q.parts.empty()) return;
        apply_root_alias(q.parts, &catalog.root_aliases());
        std::string dotted = q.dotted();

        MatchedCall m;
        if (q.resolved) {
            auto it = by_callee.find(dotted);
            if (it == by_callee.end()) return;
            m.patterns = it->second;
        } else if (opts.bare_name_fallback) {
            std::string suffix = "." + dotted;
            for (const CallPattern& p : catalog.patterns()) {
                const std::string& callee = p.callee;
                if (callee == dotted ||
                    (callee.size() > suffix.size() &&
                     callee.compare(callee.size() - suffix.size(), suffix.size(), suffix) == 0))
                    m.patterns.push_back(&p);
            }
            if (m.patterns.empty()) return;
        } else {
            return;
        }
        m.call = &node;
        m.callee = std::move(q);
        out.push_back(std::move(m));
    });
    return out;
}

} // namespace cipherlint
