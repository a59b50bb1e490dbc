#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cipherlint/catalog.hpp"
#include "cipherlint/fold.hpp"
#include "cipherlint/imports.hpp"
#include "cipherlint/matcher.hpp"

namespace cipherlint {

/// One hop of a value's resolution trace, innermost use first.
struct SliceStep {
    enum class Kind { HardCoded, LocalAssign, GlobalAssign, CallerParam };
    Kind kind = Kind::HardCoded;
    Span span;
    std::string detail;
};

inline std::string_view to_string(SliceStep::Kind k) {
    switch (k) {
    case SliceStep::Kind::HardCoded: return "hard-coded";
    case SliceStep::Kind::LocalAssign: return "local-assignment";
    case SliceStep::Kind::GlobalAssign: return "global-assignment";
    case SliceStep::Kind::CallerParam: return "caller-argument";
    }
    return "?";
}

enum class UnresolvedReason { NoCallers, DepthExceeded, DynamicValue, ExternalInput };

inline std::string_view to_string(UnresolvedReason r) {
    switch (r) {
    case UnresolvedReason::NoCallers: return "no-callers";
    case UnresolvedReason::DepthExceeded: return "depth-exceeded";
    case UnresolvedReason::DynamicValue: return "dynamic-value";
    case UnresolvedReason::ExternalInput: return "external-input";
    }
    return "?";
}

struct SliceResult {
    std::optional<ConstValue> value;
    std::optional<UnresolvedReason> reason;
    std::vector<SliceStep> steps;

    bool resolved() const { return value.has_value(); }
};

struct SliceOptions {
    int depth_limit = 16;
    bool suffix_match = false; // folding without import resolution
};

/// Resolves argument expressions backward through straight-line assignments
/// and intra-file callers. Values that depend on control flow, unseen code,
/// or runtime input stay unresolved with a reason; a resolved value is one
/// the program is guaranteed to pass at that call site.
class Slicer {
public:
    Slicer(const SyntaxTree& tree, const ImportMap& imports, const RuleCatalog& catalog,
           SliceOptions opts = {})
        : tree_(tree), imports_(imports), catalog_(catalog), opts_(opts),
          fold_ctx_(catalog.fold_context(imports, opts.suffix_match)) {}

    SliceResult resolve_argument(const SyntaxNode& expr) {
        std::set<std::pair<const SyntaxNode*, std::string>> visited;
        return resolve_expr(expr, tree_.enclosing_function(expr), 1, visited);
    }

private:
    // --- name-binding collection ------------------------------------------

    struct Binding {
        const SyntaxNode* site = nullptr;  // statement that binds the name
        const SyntaxNode* value = nullptr; // null: value not expressible
        uint32_t effect_pos = 0;           // binding effective after this offset
    };

    using BindingMap = std::unordered_map<std::string, std::vector<Binding>>;
    using Visited = std::set<std::pair<const SyntaxNode*, std::string>>;

    void bind_target_names(BindingMap& map, const SyntaxNode& target, const SyntaxNode* site,
                           const SyntaxNode* value) {
        switch (target.kind) {
        case NodeKind::Name:
            map[target.text].push_back({site, value, site->span.end});
            return;
        case NodeKind::Other:
            // unpacking: the names bind, but no single expression is the value
            if (target.text == "tuple" || target.text == "list" || target.text == "*") {
                for (const SyntaxNode& c : target.children)
                    bind_target_names(map, c, site, nullptr);
            }
            return;
        default:
            return; // attribute / subscript targets bind no local name
        }
    }

    static bool is_aug_assign(const SyntaxNode& n) {
        if (n.kind != NodeKind::Other || n.children.size() != 2) return false;
        static const std::string_view ops[] = {"+=", "-=", "*=", "/=",  "//=", "%=",  "@=",
                                               "&=", "|=", "^=", ">>=", "<<=", "**="};
        for (std::string_view op : ops)
            if (n.text == op) return true;
        return false;
    }

    // All name bindings of one scope (a function body, or the module when
    // scope_fn is null), keyed by name, in document order.
    const BindingMap& scope_bindings(const SyntaxNode* scope_fn) {
        auto it = binding_cache_.find(scope_fn);
        if (it != binding_cache_.end()) return it->second;
        BindingMap map;
        const SyntaxNode& root = scope_fn ? *scope_fn : tree_.root();
        visit(root, [&](const SyntaxNode& node) {
            if (&node == scope_fn) return;
            if (tree_.enclosing_function(node) != scope_fn) return;
            if (!scope_fn && tree_.enclosing_class(node) != nullptr) return;
            switch (node.kind) {
            case NodeKind::Assignment: {
                const AssignInfo* info = node.assign_info();
                if (!info || node.children.empty()) return;
                const SyntaxNode* value = &node.children[info->value_index];
                int target_count = info->annotated ? 1 : info->value_index;
                for (int i = 0; i < target_count; ++i)
                    bind_target_names(map, node.children[i], &node, value);
                return;
            }
            case NodeKind::FunctionDef: {
                if (const FunctionInfo* fi = node.function())
                    map[fi->name].push_back({&node, nullptr, node.span.end});
                return;
            }
            case NodeKind::Other:
                if (node.text == ":=" && node.children.size() == 2 &&
                    node.children[0].kind == NodeKind::Name) {
                    map[node.children[0].text].push_back(
                        {&node, &node.children[1], node.span.end});
                } else if (is_aug_assign(node)) {
                    bind_target_names(map, node.children[0], &node, nullptr);
                } else if ((node.text == "for" || node.text == "async for") &&
                           node.children.size() >= 2) {
                    bind_target_names(map, node.children[0], &node, nullptr);
                } else if (node.text == "withitem" && node.children.size() == 2) {
                    bind_target_names(map, node.children[1], &node, nullptr);
                } else if (node.text == "except" && node.children.size() == 3 &&
                           node.children[1].kind == NodeKind::Name) {
                    map[node.children[1].text].push_back({&node, nullptr, node.span.end});
                } else if (node.text == "class") {
                    if (const ClassInfo* ci = node.class_info())
                        map[ci->name].push_back({&node, nullptr, node.span.end});
                }
                return;
            default:
                return;
            }
        });
        return binding_cache_.emplace(scope_fn, std::move(map)).first->second;
    }

    /// The binding takes effect on every path reaching `use` only when each
    /// conditional block around the binding also encloses the use.
    bool binding_dominates(const SyntaxNode* site, const SyntaxNode* scope_root,
                           const SyntaxNode& use) const {
        for (const SyntaxNode* a = tree_.parent(*site); a && a != scope_root;
             a = tree_.parent(*a)) {
            const SuiteInfo* suite = a->suite_info();
            if (suite && suite->conditional && !tree_.is_ancestor(*a, use)) return false;
        }
        return true;
    }

    bool binding_unconditional(const SyntaxNode* site, const SyntaxNode* scope_root) const {
        for (const SyntaxNode* a = tree_.parent(*site); a && a != scope_root;
             a = tree_.parent(*a)) {
            const SuiteInfo* suite = a->suite_info();
            if (suite && suite->conditional) return false;
        }
        return true;
    }

    bool global_declared(const SyntaxNode& fn, const std::string& name) const {
        bool found = false;
        visit(fn, [&](const SyntaxNode& node) {
            if (found || node.kind != NodeKind::Other || node.text != "global") return;
            if (tree_.enclosing_function(node) != &fn) return; // nested scope
            for (const SyntaxNode& c : node.children)
                if (c.kind == NodeKind::Name && c.text == name) found = true;
        });
        return found;
    }

    // --- resolution ---------------------------------------------------------

    static SliceResult unresolved(UnresolvedReason reason, std::vector<SliceStep> steps = {}) {
        SliceResult r;
        r.reason = reason;
        r.steps = std::move(steps);
        return r;
    }

    SliceResult resolve_expr(const SyntaxNode& expr, const SyntaxNode* scope_fn, int depth,
                             Visited& visited) {
        if (depth > opts_.depth_limit) return unresolved(UnresolvedReason::DepthExceeded);

        if (auto folded = fold_constant(expr, fold_ctx_)) {
            SliceResult r;
            r.value = std::move(*folded);
            r.steps.push_back({SliceStep::Kind::HardCoded, expr.span, to_string(*r.value)});
            return r;
        }

        if (expr.kind == NodeKind::Name)
            return resolve_name(expr, scope_fn, depth, visited);

        if (expr.kind == NodeKind::Call) {
            if (const SyntaxNode* callee = expr.callee()) {
                if (names_external_input(*callee, expr.span.begin))
                    return unresolved(UnresolvedReason::ExternalInput);
            }
            return unresolved(UnresolvedReason::DynamicValue);
        }
        if (expr.kind == NodeKind::Other && expr.text == "subscript" && !expr.children.empty()) {
            if (names_external_input(expr.children[0], expr.span.begin))
                return unresolved(UnresolvedReason::ExternalInput);
            return unresolved(UnresolvedReason::DynamicValue);
        }
        return unresolved(UnresolvedReason::DynamicValue);
    }

    bool names_external_input(const SyntaxNode& expr, uint32_t at) const {
        QualifiedName q = qualify_name(expr, imports_, at);
        if (q.parts.empty()) return false;
        apply_root_alias(q.parts, &catalog_.root_aliases());
        return catalog_.external_input_paths().count(q.dotted()) > 0;
    }

    SliceResult resolve_name(const SyntaxNode& use, const SyntaxNode* scope_fn, int depth,
                             Visited& visited) {
        const std::string& name = use.text;
        const BindingMap& bindings = scope_bindings(scope_fn);
        const SyntaxNode* scope_root = scope_fn ? scope_fn : &tree_.root();

        auto it = bindings.find(name);
        if (it != bindings.end()) {
            const Binding* latest = nullptr;
            for (const Binding& b : it->second)
                if (b.effect_pos <= use.span.begin &&
                    (!latest || b.effect_pos > latest->effect_pos))
                    latest = &b;
            if (latest) {
                if (!binding_dominates(latest->site, scope_root, use) || !latest->value)
                    return unresolved(UnresolvedReason::DynamicValue);
                SliceStep step{scope_fn ? SliceStep::Kind::LocalAssign
                                        : SliceStep::Kind::GlobalAssign,
                               latest->site->span, "'" + name + "' assigned here"};
                SliceResult r =
                    resolve_expr(*latest->value, scope_fn, depth + 1, visited);
                r.steps.insert(r.steps.begin(), std::move(step));
                return r;
            }
        }

        if (scope_fn && !global_declared(*scope_fn, name)) {
            const FunctionInfo* info = scope_fn->function();
            if (info) {
                for (size_t i = 0; i < info->params.size(); ++i)
                    if (info->params[i].name == name)
                        return resolve_param(*scope_fn, i, depth, visited);
            }
        }

        if (scope_fn) return resolve_module_global(name, depth, visited);
        return unresolved(UnresolvedReason::DynamicValue);
    }

    /// For code inside a function, a module global is trusted only when the
    /// module binds it exactly once, unconditionally, to an expressible
    /// value: then the value is the same whenever the function runs.
    SliceResult resolve_module_global(const std::string& name, int depth, Visited& visited) {
        const BindingMap& globals = scope_bindings(nullptr);
        auto it = globals.find(name);
        if (it == globals.end() || it->second.size() != 1)
            return unresolved(UnresolvedReason::DynamicValue);
        const Binding& b = it->second.front();
        if (!b.value || !binding_unconditional(b.site, &tree_.root()))
            return unresolved(UnresolvedReason::DynamicValue);
        SliceStep step{SliceStep::Kind::GlobalAssign, b.site->span,
                       "'" + name + "' assigned here"};
        SliceResult r = resolve_expr(*b.value, nullptr, depth + 1, visited);
        r.steps.insert(r.steps.begin(), std::move(step));
        return r;
    }

    // --- caller walk -----------------------------------------------------------

    std::vector<const SyntaxNode*> enumerate_callers(const SyntaxNode& fn) {
        auto it = caller_cache_.find(&fn);
        if (it != caller_cache_.end()) return it->second;
        const FunctionInfo* info = fn.function();
        std::vector<const SyntaxNode*> out;
        if (info) {
            bool is_method = tree_.enclosing_class(fn) != nullptr;
            visit(tree_.root(), [&](const SyntaxNode& node) {
                if (node.kind != NodeKind::Call || node.children.empty()) return;
                const SyntaxNode& callee = node.children.front();
                if (is_method) {
                    if (callee.kind == NodeKind::Attribute && callee.text == info->name)
                        out.push_back(&node);
                } else {
                    if (callee.kind == NodeKind::Name && callee.text == info->name)
                        out.push_back(&node);
                }
            });
        }
        caller_cache_.emplace(&fn, out);
        return out;
    }

    SliceResult resolve_param(const SyntaxNode& fn, size_t param_index, int depth,
                              Visited& visited) {
        const FunctionInfo& info = *fn.function();
        const Param& param = info.params[param_index];
        // cycle guard on the current resolution path only
        auto [vit, fresh] = visited.insert({&fn, param.name});
        if (!fresh) return unresolved(UnresolvedReason::DynamicValue);
        struct Unwind {
            Visited& set;
            Visited::iterator it;
            ~Unwind() { set.erase(it); }
        } unwind{visited, vit};

        std::vector<const SyntaxNode*> callers = enumerate_callers(fn);
        if (callers.empty()) return unresolved(UnresolvedReason::NoCallers);
        if (param.is_vararg || param.is_kwvararg)
            return unresolved(UnresolvedReason::DynamicValue);

        // positional index as callers see it: methods take self implicitly
        bool is_method = tree_.enclosing_class(fn) != nullptr;
        int position = -1;
        if (!param.keyword_only) {
            int idx = 0;
            bool after_vararg = false;
            for (size_t i = 0; i < param_index; ++i) {
                const Param& p = info.params[i];
                if (p.is_vararg || p.is_kwvararg) after_vararg = true;
                else ++idx;
            }
            if (!after_vararg) position = idx;
            if (is_method) {
                if (position == 0) return unresolved(UnresolvedReason::DynamicValue);
                if (position > 0) --position;
            }
        }
        ArgSelector sel{position, {param.name}};

        std::optional<ConstValue> agreed;
        std::vector<SliceStep> first_steps;
        bool depth_hit = false;
        for (const SyntaxNode* call : callers) {
            SliceResult sub;
            ArgLookup arg = find_argument(*call, sel);
            if (arg.presence == ArgPresence::Present) {
                sub = resolve_expr(*arg.value, tree_.enclosing_function(*call), depth + 1,
                                   visited);
            } else if (arg.presence == ArgPresence::Absent && param.default_child >= 0) {
                sub = resolve_expr(fn.children[param.default_child],
                                   tree_.enclosing_function(fn), depth + 1, visited);
            } else {
                sub = unresolved(UnresolvedReason::DynamicValue);
            }
            if (!sub.resolved()) {
                if (sub.reason == UnresolvedReason::DepthExceeded) depth_hit = true;
                agreed.reset();
                break;
            }
            if (!agreed) {
                agreed = sub.value;
                first_steps = std::move(sub.steps);
                SliceStep step{SliceStep::Kind::CallerParam, call->span,
                               "parameter '" + param.name + "' of '" + info.name + "' (" +
                                   std::to_string(callers.size()) + " caller" +
                                   (callers.size() == 1 ? "" : "s") + ")"};
                first_steps.insert(first_steps.begin(), std::move(step));
            } else if (!(*agreed == *sub.value)) {
                agreed.reset();
                break;
            }
        }
        if (!agreed) {
            return unresolved(depth_hit ? UnresolvedReason::DepthExceeded
                                        : UnresolvedReason::DynamicValue);
        }
        SliceResult r;
        r.value = std::move(agreed);
        r.steps = std::move(first_steps);
        return r;
    }

    const SyntaxTree& tree_;
    const ImportMap& imports_;
    const RuleCatalog& catalog_;
    SliceOptions opts_;
    FoldContext fold_ctx_;
    std::unordered_map<const SyntaxNode*, BindingMap> binding_cache_;
    std::unordered_map<const SyntaxNode*, std::vector<const SyntaxNode*>> caller_cache_;
};

} // namespace cipherlint
