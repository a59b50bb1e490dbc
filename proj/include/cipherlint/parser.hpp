#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>

#include "cipherlint/ast.hpp"
#include "cipherlint/lexer.hpp"

namespace cipherlint {

struct ParseFailure {
    enum class Kind { Syntax, DepthExceeded };
    Kind kind = Kind::Syntax;
    std::filesystem::path path;
    std::string message;
    uint32_t line = 1;
    uint32_t column = 0;
};

struct ParseOptions {
    // guard against pathologically nested input; DepthExceeded, not a crash
    int max_depth = 400;
};

struct ParseResult {
    std::unique_ptr<SyntaxTree> tree;
    std::optional<ParseFailure> failure;
    bool ok() const { return tree != nullptr; }
};

namespace detail {

struct SyntaxError {
    std::string message;
    uint32_t line;
    uint32_t column;
};
struct DepthError {
    uint32_t line;
    uint32_t column;
};

inline const std::unordered_set<std::string_view>& python_keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "False", "None",   "True",  "and",    "as",     "assert", "async",  "await",
        "break", "class",  "continue", "def", "del",    "elif",   "else",   "except",
        "finally", "for",  "from",  "global", "if",     "import", "in",     "is",
        "lambda", "nonlocal", "not", "or",    "pass",   "raise",  "return", "try",
        "while", "with",   "yield"};
    return kw;
}

class Parser {
public:
    Parser(std::string_view src, std::vector<Token> tokens, int max_depth)
        : src_(src), toks_(std::move(tokens)), max_depth_(max_depth) {}

    SyntaxNode parse_module() {
        SyntaxNode mod;
        mod.kind = NodeKind::Module;
        while (!at_type(TokType::EndMarker)) {
            if (eat_type(TokType::Newline)) continue;
            parse_statement(mod.children);
        }
        mod.span = Span{0, static_cast<uint32_t>(src_.size()), 1, 0};
        if (mod.children.empty()) mod.span.end = 0;
        return mod;
    }

private:
    // --- token helpers ------------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t n = 1) const {
        size_t i = pos_ + n;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at_type(TokType t) const { return cur().type == t; }
    bool at_op(std::string_view text) const {
        return cur().type == TokType::Op && cur().text == text;
    }
    bool at_name(std::string_view text) const {
        return cur().type == TokType::Name && cur().text == text;
    }
    bool eat_type(TokType t) {
        if (!at_type(t)) return false;
        ++pos_;
        return true;
    }
    bool eat_op(std::string_view text) {
        if (!at_op(text)) return false;
        ++pos_;
        return true;
    }
    bool eat_name(std::string_view text) {
        if (!at_name(text)) return false;
        ++pos_;
        return true;
    }
    const Token& take() { return toks_[pos_++]; }
    [[noreturn]] void error(std::string msg) const {
        throw SyntaxError{std::move(msg), cur().span.line, cur().span.column};
    }
    void expect_op(std::string_view text) {
        if (!eat_op(text)) error("expected '" + std::string(text) + "'");
    }
    void expect_newline() {
        if (!eat_type(TokType::Newline) && !at_type(TokType::EndMarker))
            error("expected end of line");
    }

    bool at_keyword() const {
        return cur().type == TokType::Name && python_keywords().count(cur().text) > 0;
    }
    bool at_plain_name() const { return cur().type == TokType::Name && !at_keyword(); }

    std::string_view slice(const Span& s) const {
        return src_.substr(s.begin, s.end - s.begin);
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > p.max_depth_)
                throw DepthError{p.cur().span.line, p.cur().span.column};
        }
        ~DepthGuard() { --p.depth_; }
    };

    static Span cover(const Span& a, const Span& b) {
        Span s = a;
        if (b.begin < s.begin) {
            s.begin = b.begin;
            s.line = b.line;
            s.column = b.column;
        }
        if (b.end > s.end) s.end = b.end;
        return s;
    }

    void span_over_children(SyntaxNode& node) {
        for (const SyntaxNode& c : node.children) node.span = cover(node.span, c.span);
    }

    // Other nodes that end up childless keep the exact source slice as text,
    // so leaf round-trip fidelity holds for every node kind.
    void seal(SyntaxNode& node) {
        span_over_children(node);
        if (node.children.empty() && node.kind == NodeKind::Other)
            node.text = std::string(slice(node.span));
    }

    SyntaxNode make_other(std::string_view tag, Span span) {
        SyntaxNode n;
        n.kind = NodeKind::Other;
        n.text = std::string(tag);
        n.span = span;
        return n;
    }

    // --- statements -----------------------------------------------------

    void parse_statement(std::vector<SyntaxNode>& out) {
        DepthGuard guard(*this);
        if (at_type(TokType::Name)) {
            std::string_view w = cur().text;
            if (w == "if") return out.push_back(parse_if());
            if (w == "while") return out.push_back(parse_while());
            if (w == "for") return out.push_back(parse_for(false));
            if (w == "try") return out.push_back(parse_try());
            if (w == "with") return out.push_back(parse_with(false));
            if (w == "def") return out.push_back(parse_def(false, {}));
            if (w == "class") return out.push_back(parse_class({}));
            if (w == "async") return parse_async(out);
            if (w == "match" && looks_like_match()) return out.push_back(parse_match());
        }
        if (at_op("@")) return out.push_back(parse_decorated());
        parse_simple_line(out);
    }

    // `match` is a soft keyword: only a match statement when the line ends
    // with ':' at bracket depth 0 and the next token can start an expression.
    bool looks_like_match() const {
        const Token& next = peek();
        if (next.type == TokType::Op &&
            (next.text == "=" || next.text == "." || next.text == "(" || next.text == "=="))
            return false; // match = ..., match.foo, match(...) are ordinary uses
        int depth = 0;
        for (size_t i = pos_ + 1; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.type == TokType::Newline || t.type == TokType::EndMarker) break;
            if (t.type == TokType::Op) {
                if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
                else if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
                else if (t.text == ":" && depth == 0) return true;
                else if (t.text == "=" && depth == 0) return false;
            }
        }
        return false;
    }

    void parse_simple_line(std::vector<SyntaxNode>& out) {
        while (true) {
            parse_small_stmt(out);
            if (!eat_op(";")) break;
            if (at_type(TokType::Newline) || at_type(TokType::EndMarker)) break;
        }
        expect_newline();
    }

    void parse_small_stmt(std::vector<SyntaxNode>& out) {
        if (at_type(TokType::Name)) {
            std::string_view w = cur().text;
            if (w == "pass" || w == "break" || w == "continue") {
                const Token& t = take();
                out.push_back(make_other(std::string(t.text), t.span));
                out.back().text = std::string(t.text);
                return;
            }
            if (w == "import") return out.push_back(parse_import());
            if (w == "from") return out.push_back(parse_from_import());
            if (w == "return") return out.push_back(parse_return());
            if (w == "raise") return out.push_back(parse_raise());
            if (w == "assert") return out.push_back(parse_assert());
            if (w == "del") return out.push_back(parse_del());
            if (w == "global" || w == "nonlocal") return out.push_back(parse_scope_decl());
            if (w == "yield") {
                out.push_back(parse_yield_expr());
                return;
            }
        }
        out.push_back(parse_expr_or_assign());
    }

    SyntaxNode parse_return() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("return", start);
        if (!at_type(TokType::Newline) && !at_op(";") && !at_type(TokType::EndMarker))
            node.children.push_back(parse_testlist_star());
        node.span.end = start.end;
        seal(node);
        node.span = cover(start, node.span);
        node.text = "return";
        return node;
    }

    SyntaxNode parse_raise() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("raise", start);
        if (!at_type(TokType::Newline) && !at_op(";") && !at_type(TokType::EndMarker)) {
            node.children.push_back(parse_test());
            if (eat_name("from")) node.children.push_back(parse_test());
        }
        seal(node);
        node.span = cover(start, node.span);
        node.text = "raise";
        return node;
    }

    SyntaxNode parse_assert() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("assert", start);
        node.children.push_back(parse_test());
        if (eat_op(",")) node.children.push_back(parse_test());
        seal(node);
        node.span = cover(start, node.span);
        node.text = "assert";
        return node;
    }

    SyntaxNode parse_del() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("del", start);
        node.children.push_back(parse_testlist_star());
        seal(node);
        node.span = cover(start, node.span);
        node.text = "del";
        return node;
    }

    SyntaxNode parse_scope_decl() {
        const Token& kw = take();
        SyntaxNode node = make_other(std::string(kw.text), kw.span);
        std::string tag(kw.text);
        while (true) {
            if (!at_plain_name()) error("expected identifier");
            const Token& n = take();
            SyntaxNode name;
            name.kind = NodeKind::Name;
            name.text = std::string(n.text);
            name.span = n.span;
            node.children.push_back(std::move(name));
            if (!eat_op(",")) break;
        }
        seal(node);
        node.span = cover(kw.span, node.span);
        node.text = tag;
        return node;
    }

    // import A.B as c, D
    SyntaxNode parse_import() {
        Span start = cur().span;
        take();
        SyntaxNode node;
        node.kind = NodeKind::Import;
        node.span = start;
        ImportClause clause;
        while (true) {
            auto [name_node, dotted] = parse_dotted_name();
            std::string alias;
            if (eat_name("as")) {
                if (!at_plain_name()) error("expected identifier after 'as'");
                const Token& a = take();
                alias = std::string(a.text);
                SyntaxNode an;
                an.kind = NodeKind::Name;
                an.text = alias;
                an.span = a.span;
                node.children.push_back(std::move(name_node));
                node.children.push_back(std::move(an));
            } else {
                node.children.push_back(std::move(name_node));
            }
            clause.items.push_back({dotted, alias});
            if (!eat_op(",")) break;
        }
        node.payload = std::move(clause);
        span_over_children(node);
        node.span = cover(start, node.span);
        return node;
    }

    // from ..mod import x as y, z | from mod import *
    SyntaxNode parse_from_import() {
        Span start = cur().span;
        take();
        SyntaxNode node;
        node.kind = NodeKind::Import;
        node.span = start;
        ImportClause clause;
        clause.is_from = true;
        while (at_op(".") || at_op("...")) {
            const Token& d = take();
            clause.relative_level += static_cast<int>(d.text.size());
            node.children.push_back(make_other(std::string(d.text), d.span));
        }
        if (!at_name("import")) {
            auto [name_node, dotted] = parse_dotted_name();
            clause.module = dotted;
            node.children.push_back(std::move(name_node));
        } else if (clause.relative_level == 0) {
            error("expected module name");
        }
        if (!eat_name("import")) error("expected 'import'");
        bool paren = eat_op("(");
        if (at_op("*")) {
            const Token& star = take();
            node.children.push_back(make_other("*", star.span));
            clause.items.push_back({"*", ""});
        } else {
            while (true) {
                if (!at_plain_name()) error("expected import name");
                const Token& n = take();
                SyntaxNode nn;
                nn.kind = NodeKind::Name;
                nn.text = std::string(n.text);
                nn.span = n.span;
                std::string alias;
                node.children.push_back(std::move(nn));
                if (eat_name("as")) {
                    if (!at_plain_name()) error("expected identifier after 'as'");
                    const Token& a = take();
                    alias = std::string(a.text);
                    SyntaxNode an;
                    an.kind = NodeKind::Name;
                    an.text = alias;
                    an.span = a.span;
                    node.children.push_back(std::move(an));
                }
                clause.items.push_back({std::string(n.text), alias});
                if (!eat_op(",")) break;
                if (paren && at_op(")")) break; // trailing comma
            }
        }
        if (paren) expect_op(")");
        node.payload = std::move(clause);
        span_over_children(node);
        node.span = cover(start, node.span);
        return node;
    }

    std::pair<SyntaxNode, std::string> parse_dotted_name() {
        if (!at_plain_name()) error("expected module name");
        const Token& first = take();
        Span sp = first.span;
        std::string dotted(first.text);
        while (at_op(".") && peek().type == TokType::Name &&
               !python_keywords().count(peek().text)) {
            take();
            const Token& part = take();
            dotted += '.';
            dotted += std::string(part.text);
            sp.end = part.span.end;
        }
        SyntaxNode n;
        n.kind = NodeKind::Name;
        n.text = dotted;
        n.span = sp;
        return {std::move(n), dotted};
    }

    static bool is_assignable(const SyntaxNode& n) {
        switch (n.kind) {
        case NodeKind::Name:
        case NodeKind::Attribute:
            return true;
        case NodeKind::Other:
            return n.text == "subscript" || n.text == "tuple" || n.text == "list" ||
                   n.text == "*";
        default:
            return false;
        }
    }

    SyntaxNode parse_expr_or_assign() {
        SyntaxNode first = parse_testlist_star();
        // annotated assignment / declaration
        if (at_op(":")) {
            take();
            SyntaxNode annotation = parse_test();
            if (eat_op("=")) {
                SyntaxNode value = at_name("yield") ? parse_yield_expr() : parse_testlist_star();
                if (!is_assignable(first)) error("cannot assign to this expression");
                SyntaxNode node;
                node.kind = NodeKind::Assignment;
                node.span = cover(first.span, value.span);
                node.children.push_back(std::move(first));
                node.children.push_back(std::move(annotation));
                node.children.push_back(std::move(value));
                node.payload = AssignInfo{2, true};
                return node;
            }
            SyntaxNode node = make_other("anndecl", first.span);
            node.children.push_back(std::move(first));
            node.children.push_back(std::move(annotation));
            seal(node);
            node.text = "anndecl";
            return node;
        }
        // augmented assignment
        static const std::string_view augops[] = {"+=", "-=", "*=", "/=",  "//=", "%=",
                                                  "@=", "&=", "|=", "^=", ">>=", "<<=", "**="};
        for (auto op : augops) {
            if (at_op(op)) {
                take();
                SyntaxNode value = at_name("yield") ? parse_yield_expr() : parse_testlist_star();
                SyntaxNode node = make_other(std::string(op), first.span);
                node.span = cover(first.span, value.span);
                node.children.push_back(std::move(first));
                node.children.push_back(std::move(value));
                node.text = std::string(op);
                return node;
            }
        }
        // plain or chained assignment
        if (at_op("=")) {
            std::vector<SyntaxNode> parts;
            parts.push_back(std::move(first));
            while (eat_op("=")) {
                parts.push_back(at_name("yield") ? parse_yield_expr() : parse_testlist_star());
            }
            for (size_t i = 0; i + 1 < parts.size(); ++i)
                if (!is_assignable(parts[i])) error("cannot assign to this expression");
            SyntaxNode node;
            node.kind = NodeKind::Assignment;
            node.span = cover(parts.front().span, parts.back().span);
            node.payload = AssignInfo{static_cast<int>(parts.size()) - 1, false};
            for (SyntaxNode& p : parts) node.children.push_back(std::move(p));
            return node;
        }
        return first;
    }

    // --- suites and compound statements -----------------------------------

    SyntaxNode parse_suite(bool conditional) {
        expect_op(":");
        SyntaxNode suite;
        suite.kind = NodeKind::Other;
        suite.text = "suite";
        suite.payload = SuiteInfo{conditional};
        suite.span = cur().span;
        suite.span.end = suite.span.begin;
        if (eat_type(TokType::Newline)) {
            if (!eat_type(TokType::Indent)) error("expected an indented block");
            while (!at_type(TokType::Dedent) && !at_type(TokType::EndMarker)) {
                if (eat_type(TokType::Newline)) continue;
                parse_statement(suite.children);
            }
            eat_type(TokType::Dedent);
        } else {
            parse_simple_line(suite.children);
        }
        if (suite.children.empty()) error("expected statement in block");
        span_over_children(suite);
        return suite;
    }

    SyntaxNode parse_if() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("if", start);
        node.children.push_back(parse_namedexpr());
        node.children.push_back(parse_suite(true));
        while (at_name("elif")) {
            take();
            node.children.push_back(parse_namedexpr());
            node.children.push_back(parse_suite(true));
        }
        if (eat_name("else")) node.children.push_back(parse_suite(true));
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "if";
        return node;
    }

    SyntaxNode parse_while() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("while", start);
        node.children.push_back(parse_namedexpr());
        node.children.push_back(parse_suite(true));
        if (eat_name("else")) node.children.push_back(parse_suite(true));
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "while";
        return node;
    }

    SyntaxNode parse_for(bool is_async) {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other(is_async ? "async for" : "for", start);
        std::string tag = node.text;
        node.children.push_back(parse_target_list());
        if (!eat_name("in")) error("expected 'in'");
        node.children.push_back(parse_testlist_star());
        node.children.push_back(parse_suite(true));
        if (eat_name("else")) node.children.push_back(parse_suite(true));
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = tag;
        return node;
    }

    SyntaxNode parse_try() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("try", start);
        node.children.push_back(parse_suite(true));
        bool saw_handler = false;
        while (at_name("except")) {
            saw_handler = true;
            Span hstart = cur().span;
            take();
            SyntaxNode handler = make_other("except", hstart);
            eat_op("*"); // except* groups
            if (!at_op(":")) {
                handler.children.push_back(parse_test());
                if (eat_name("as")) {
                    if (!at_plain_name()) error("expected identifier after 'as'");
                    const Token& n = take();
                    SyntaxNode nn;
                    nn.kind = NodeKind::Name;
                    nn.text = std::string(n.text);
                    nn.span = n.span;
                    handler.children.push_back(std::move(nn));
                }
            }
            handler.children.push_back(parse_suite(true));
            span_over_children(handler);
            handler.span = cover(hstart, handler.span);
            handler.text = "except";
            node.children.push_back(std::move(handler));
        }
        if (eat_name("else")) {
            SyntaxNode e = make_other("else", cur().span);
            e.children.push_back(parse_suite(true));
            seal(e);
            e.text = "else";
            node.children.push_back(std::move(e));
        }
        if (eat_name("finally")) {
            SyntaxNode f = make_other("finally", cur().span);
            f.children.push_back(parse_suite(false));
            seal(f);
            f.text = "finally";
            node.children.push_back(std::move(f));
            saw_handler = true;
        }
        if (!saw_handler) error("expected 'except' or 'finally'");
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "try";
        return node;
    }

    SyntaxNode parse_with(bool is_async) {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other(is_async ? "async with" : "with", start);
        std::string tag = node.text;
        bool paren = false;
        // parenthesized with-items (3.9+): with (a as b, c as d):
        if (at_op("(") && with_items_parenthesized()) {
            take();
            paren = true;
        }
        while (true) {
            SyntaxNode ctx = parse_test();
            if (eat_name("as")) {
                SyntaxNode item = make_other("withitem", ctx.span);
                item.children.push_back(std::move(ctx));
                item.children.push_back(parse_target());
                span_over_children(item);
                item.text = "withitem";
                node.children.push_back(std::move(item));
            } else {
                node.children.push_back(std::move(ctx));
            }
            if (!eat_op(",")) break;
            if (paren && at_op(")")) break;
        }
        if (paren) expect_op(")");
        node.children.push_back(parse_suite(false));
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = tag;
        return node;
    }

    // Distinguish `with (a, b):` grouping from `with (a as b, ...):` items.
    bool with_items_parenthesized() const {
        int depth = 0;
        for (size_t i = pos_; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.type == TokType::Op) {
                if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
                else if (t.text == ")" || t.text == "]" || t.text == "}") {
                    --depth;
                    if (depth == 0) {
                        // parenthesized items iff an 'as' was seen at depth 1
                        return false;
                    }
                }
            } else if (t.type == TokType::Name && t.text == "as" && depth == 1) {
                return true;
            } else if (t.type == TokType::Newline || t.type == TokType::EndMarker) {
                return false;
            }
        }
        return false;
    }

    void parse_async(std::vector<SyntaxNode>& out) {
        Span start = cur().span;
        take();
        if (at_name("def")) {
            out.push_back(parse_def(true, {}));
        } else if (at_name("for")) {
            out.push_back(parse_for(true));
        } else if (at_name("with")) {
            out.push_back(parse_with(true));
        } else {
            error("expected 'def', 'for' or 'with' after 'async'");
        }
        out.back().span = cover(start, out.back().span);
    }

    SyntaxNode parse_decorated() {
        std::vector<SyntaxNode> decorators;
        Span start = cur().span;
        while (at_op("@")) {
            take();
            decorators.push_back(parse_namedexpr());
            expect_newline();
            while (eat_type(TokType::Newline)) {
            }
        }
        bool is_async = false;
        if (at_name("async")) {
            take();
            is_async = true;
            if (!at_name("def")) error("expected 'def' after 'async'");
        }
        SyntaxNode node;
        if (at_name("def")) node = parse_def(is_async, std::move(decorators));
        else if (at_name("class")) node = parse_class(std::move(decorators));
        else error("expected 'def' or 'class' after decorators");
        node.span = cover(start, node.span);
        return node;
    }

    SyntaxNode parse_def(bool is_async, std::vector<SyntaxNode> decorators) {
        Span start = cur().span;
        take(); // def
        if (!at_plain_name()) error("expected function name");
        const Token& name = take();
        FunctionInfo info;
        info.name = std::string(name.text);
        info.is_async = is_async;
        info.decorator_count = static_cast<int>(decorators.size());

        SyntaxNode node;
        node.kind = NodeKind::FunctionDef;
        node.span = start;
        for (SyntaxNode& d : decorators) node.children.push_back(std::move(d));

        expect_op("(");
        std::vector<SyntaxNode> defaults;
        parse_params(info, defaults, ")");
        expect_op(")");
        info.default_count = static_cast<int>(defaults.size());
        // fix default indexes to absolute child positions
        int base = info.decorator_count;
        for (Param& p : info.params)
            if (p.default_child >= 0) p.default_child += base;
        for (SyntaxNode& d : defaults) node.children.push_back(std::move(d));

        if (eat_op("->")) parse_test(); // return annotation, dropped
        node.children.push_back(parse_suite(false));
        node.payload = std::move(info);
        span_over_children(node);
        node.span = cover(start, node.span);
        return node;
    }

    void parse_params(FunctionInfo& info, std::vector<SyntaxNode>& defaults,
                      std::string_view closer) {
        bool keyword_only = false;
        while (!at_op(closer)) {
            if (eat_op("/")) { // positional-only marker
                if (!eat_op(",")) break;
                continue;
            }
            if (at_op("*")) {
                take();
                if (at_plain_name()) {
                    const Token& n = take();
                    Param p;
                    p.name = std::string(n.text);
                    p.is_vararg = true;
                    if (eat_op(":") && closer == ")") parse_test();
                    info.params.push_back(std::move(p));
                } // bare '*': keyword-only marker
                keyword_only = true;
                if (!eat_op(",")) break;
                continue;
            }
            if (at_op("**")) {
                take();
                if (!at_plain_name()) error("expected parameter name");
                const Token& n = take();
                Param p;
                p.name = std::string(n.text);
                p.is_kwvararg = true;
                if (eat_op(":") && closer == ")") parse_test();
                info.params.push_back(std::move(p));
                eat_op(",");
                break;
            }
            if (!at_plain_name()) error("expected parameter name");
            const Token& n = take();
            Param p;
            p.name = std::string(n.text);
            p.keyword_only = keyword_only;
            if (closer == ")" && eat_op(":")) parse_test(); // annotation, dropped
            if (eat_op("=")) {
                p.default_child = static_cast<int>(defaults.size());
                defaults.push_back(parse_test());
            }
            info.params.push_back(std::move(p));
            if (!eat_op(",")) break;
        }
    }

    SyntaxNode parse_class(std::vector<SyntaxNode> decorators) {
        Span start = cur().span;
        take(); // class
        if (!at_plain_name()) error("expected class name");
        const Token& name = take();
        ClassInfo info;
        info.name = std::string(name.text);
        info.decorator_count = static_cast<int>(decorators.size());

        SyntaxNode node;
        node.kind = NodeKind::Other;
        node.text = "class";
        node.span = start;
        node.payload = std::move(info);
        for (SyntaxNode& d : decorators) node.children.push_back(std::move(d));
        if (eat_op("(")) {
            while (!at_op(")")) {
                if (at_op("*") || at_op("**")) {
                    const Token& star = take();
                    SyntaxNode s = make_other(std::string(star.text), star.span);
                    s.children.push_back(parse_test());
                    span_over_children(s);
                    s.text = std::string(star.text);
                    node.children.push_back(std::move(s));
                } else if (at_plain_name() && peek().type == TokType::Op && peek().text == "=") {
                    const Token& kw = take();
                    take(); // '='
                    SyntaxNode k;
                    k.kind = NodeKind::Keyword;
                    k.text = std::string(kw.text);
                    k.span = kw.span;
                    k.children.push_back(parse_test());
                    span_over_children(k);
                    node.children.push_back(std::move(k));
                } else {
                    node.children.push_back(parse_test());
                }
                if (!eat_op(",")) break;
            }
            expect_op(")");
        }
        node.children.push_back(parse_suite(false));
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "class";
        return node;
    }

    SyntaxNode parse_match() {
        Span start = cur().span;
        take(); // match
        SyntaxNode node = make_other("match", start);
        node.children.push_back(parse_testlist_star());
        expect_op(":");
        if (!eat_type(TokType::Newline)) error("expected newline after 'match'");
        if (!eat_type(TokType::Indent)) error("expected an indented block");
        while (at_name("case")) {
            Span cstart = cur().span;
            take();
            SyntaxNode arm = make_other("case", cstart);
            // patterns are skipped to the colon; kept as a raw-text leaf
            Span pspan = cur().span;
            int depth = 0;
            while (!(depth == 0 && at_op(":"))) {
                if (at_type(TokType::Newline) || at_type(TokType::EndMarker))
                    error("expected ':' in case clause");
                if (at_op("(") || at_op("[") || at_op("{")) ++depth;
                if (at_op(")") || at_op("]") || at_op("}")) --depth;
                pspan.end = cur().span.end;
                take();
            }
            SyntaxNode pattern = make_other("", pspan);
            pattern.text = std::string(slice(pspan));
            arm.children.push_back(std::move(pattern));
            arm.children.push_back(parse_suite(true));
            span_over_children(arm);
            arm.span = cover(cstart, arm.span);
            arm.text = "case";
            node.children.push_back(std::move(arm));
            while (eat_type(TokType::Newline)) {
            }
        }
        if (node.children.size() < 2) error("expected 'case' clause");
        eat_type(TokType::Dedent);
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "match";
        return node;
    }

    // --- expressions -------------------------------------------------------

    SyntaxNode parse_target() { return parse_primary_expr(); }

    SyntaxNode parse_target_list() {
        SyntaxNode first = at_op("*") ? parse_star_expr() : parse_target();
        if (!at_op(",")) return first;
        SyntaxNode tup = make_other("tuple", first.span);
        tup.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_name("in") || at_op("=") || at_op(":")) break;
            tup.children.push_back(at_op("*") ? parse_star_expr() : parse_target());
        }
        span_over_children(tup);
        tup.text = "tuple";
        return tup;
    }

    SyntaxNode parse_star_expr() {
        const Token& star = take();
        SyntaxNode node = make_other("*", star.span);
        node.children.push_back(parse_or_expr());
        span_over_children(node);
        node.span = cover(star.span, node.span);
        node.text = "*";
        return node;
    }

    SyntaxNode parse_testlist_star() {
        DepthGuard guard(*this);
        SyntaxNode first = at_op("*") ? parse_star_expr() : parse_test();
        if (!at_op(",")) return first;
        SyntaxNode tup = make_other("tuple", first.span);
        tup.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_type(TokType::Newline) || at_type(TokType::EndMarker) || at_op("=") ||
                at_op(")") || at_op("]") || at_op("}") || at_op(":") || at_op(";"))
                break;
            tup.children.push_back(at_op("*") ? parse_star_expr() : parse_test());
        }
        span_over_children(tup);
        tup.text = "tuple";
        return tup;
    }

    SyntaxNode parse_namedexpr() {
        SyntaxNode lhs = parse_test();
        if (at_op(":=")) {
            take();
            SyntaxNode node = make_other(":=", lhs.span);
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_test());
            span_over_children(node);
            node.text = ":=";
            return node;
        }
        return lhs;
    }

    SyntaxNode parse_test() {
        DepthGuard guard(*this);
        if (at_name("lambda")) return parse_lambda();
        SyntaxNode body = parse_or_test();
        if (at_name("if")) {
            take();
            SyntaxNode node = make_other("ifexp", body.span);
            SyntaxNode cond = parse_or_test();
            if (!eat_name("else")) error("expected 'else' in conditional expression");
            SyntaxNode orelse = parse_test();
            node.children.push_back(std::move(body));
            node.children.push_back(std::move(cond));
            node.children.push_back(std::move(orelse));
            span_over_children(node);
            node.text = "ifexp";
            return node;
        }
        return body;
    }

    SyntaxNode parse_lambda() {
        Span start = cur().span;
        take();
        SyntaxNode node = make_other("lambda", start);
        FunctionInfo discard;
        std::vector<SyntaxNode> defaults;
        if (!at_op(":")) parse_params(discard, defaults, ":");
        for (SyntaxNode& d : defaults) node.children.push_back(std::move(d));
        expect_op(":");
        node.children.push_back(parse_test());
        span_over_children(node);
        node.span = cover(start, node.span);
        node.text = "lambda";
        return node;
    }

    SyntaxNode parse_or_test() {
        SyntaxNode lhs = parse_and_test();
        while (at_name("or")) {
            take();
            SyntaxNode node = make_other("or", lhs.span);
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_and_test());
            span_over_children(node);
            node.text = "or";
            lhs = std::move(node);
        }
        return lhs;
    }

    SyntaxNode parse_and_test() {
        SyntaxNode lhs = parse_not_test();
        while (at_name("and")) {
            take();
            SyntaxNode node = make_other("and", lhs.span);
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_not_test());
            span_over_children(node);
            node.text = "and";
            lhs = std::move(node);
        }
        return lhs;
    }

    SyntaxNode parse_not_test() {
        if (at_name("not")) {
            Span start = cur().span;
            take();
            SyntaxNode node = make_other("not", start);
            node.children.push_back(parse_not_test());
            span_over_children(node);
            node.span = cover(start, node.span);
            node.text = "not";
            return node;
        }
        return parse_comparison();
    }

    SyntaxNode parse_comparison() {
        SyntaxNode lhs = parse_or_expr();
        while (true) {
            std::string op;
            if (at_op("<") || at_op(">") || at_op("==") || at_op("<=") || at_op(">=") ||
                at_op("!=")) {
                op = std::string(cur().text);
                take();
            } else if (at_name("in")) {
                op = "in";
                take();
            } else if (at_name("is")) {
                take();
                op = eat_name("not") ? "is not" : "is";
            } else if (at_name("not") && peek().type == TokType::Name && peek().text == "in") {
                take();
                take();
                op = "not in";
            } else {
                break;
            }
            SyntaxNode node = make_other("compare", lhs.span);
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_or_expr());
            span_over_children(node);
            node.text = op;
            lhs = std::move(node);
        }
        return lhs;
    }

    SyntaxNode binary(SyntaxNode lhs, std::string op, SyntaxNode rhs) {
        SyntaxNode node;
        node.kind = NodeKind::BinaryOp;
        node.text = std::move(op);
        node.span = cover(lhs.span, rhs.span);
        node.children.push_back(std::move(lhs));
        node.children.push_back(std::move(rhs));
        return node;
    }

    SyntaxNode parse_or_expr() {
        SyntaxNode lhs = parse_xor_expr();
        while (at_op("|")) {
            take();
            lhs = binary(std::move(lhs), "|", parse_xor_expr());
        }
        return lhs;
    }
    SyntaxNode parse_xor_expr() {
        SyntaxNode lhs = parse_and_expr();
        while (at_op("^")) {
            take();
            lhs = binary(std::move(lhs), "^", parse_and_expr());
        }
        return lhs;
    }
    SyntaxNode parse_and_expr() {
        SyntaxNode lhs = parse_shift_expr();
        while (at_op("&")) {
            take();
            lhs = binary(std::move(lhs), "&", parse_shift_expr());
        }
        return lhs;
    }
    SyntaxNode parse_shift_expr() {
        SyntaxNode lhs = parse_arith_expr();
        while (at_op("<<") || at_op(">>")) {
            std::string op(cur().text);
            take();
            lhs = binary(std::move(lhs), std::move(op), parse_arith_expr());
        }
        return lhs;
    }
    SyntaxNode parse_arith_expr() {
        SyntaxNode lhs = parse_term();
        while (at_op("+") || at_op("-")) {
            std::string op(cur().text);
            take();
            lhs = binary(std::move(lhs), std::move(op), parse_term());
        }
        return lhs;
    }
    SyntaxNode parse_term() {
        SyntaxNode lhs = parse_factor();
        while (at_op("*") || at_op("/") || at_op("//") || at_op("%") || at_op("@")) {
            std::string op(cur().text);
            take();
            lhs = binary(std::move(lhs), std::move(op), parse_factor());
        }
        return lhs;
    }

    SyntaxNode parse_factor() {
        DepthGuard guard(*this);
        if (at_op("+") || at_op("-") || at_op("~")) {
            const Token& op = take();
            SyntaxNode node = make_other(std::string(op.text), op.span);
            node.children.push_back(parse_factor());
            span_over_children(node);
            node.span = cover(op.span, node.span);
            node.text = std::string(op.text);
            return node;
        }
        return parse_power();
    }

    SyntaxNode parse_power() {
        SyntaxNode base = parse_await_primary();
        if (at_op("**")) {
            take();
            return binary(std::move(base), "**", parse_factor());
        }
        return base;
    }

    SyntaxNode parse_await_primary() {
        if (at_name("await")) {
            Span start = cur().span;
            take();
            SyntaxNode node = make_other("await", start);
            node.children.push_back(parse_primary_expr());
            span_over_children(node);
            node.span = cover(start, node.span);
            node.text = "await";
            return node;
        }
        return parse_primary_expr();
    }

    SyntaxNode parse_primary_expr() {
        DepthGuard guard(*this);
        SyntaxNode node = parse_atom();
        while (true) {
            if (at_op("(")) {
                node = parse_call(std::move(node));
            } else if (at_op("[")) {
                Span open = cur().span;
                take();
                SyntaxNode sub = make_other("subscript", node.span);
                sub.children.push_back(std::move(node));
                if (!at_op("]")) parse_subscript_list(sub);
                if (!at_op("]")) error("expected ']'");
                const Token& close = take();
                span_over_children(sub);
                sub.span = cover(sub.span, close.span);
                sub.span = cover(sub.span, open);
                sub.text = "subscript";
                node = std::move(sub);
            } else if (at_op(".")) {
                take();
                if (!at_type(TokType::Name)) error("expected attribute name");
                const Token& attr = take();
                SyntaxNode at;
                at.kind = NodeKind::Attribute;
                at.text = std::string(attr.text);
                at.span = cover(node.span, attr.span);
                at.children.push_back(std::move(node));
                node = std::move(at);
            } else {
                break;
            }
        }
        return node;
    }

    void parse_subscript_list(SyntaxNode& sub) {
        while (true) {
            // slice pieces: [a:b:c] keep the expressions, drop the shape
            if (!at_op(":")) {
                sub.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
            }
            while (at_op(":")) {
                take();
                if (!at_op(":") && !at_op("]") && !at_op(","))
                    sub.children.push_back(parse_test());
            }
            if (!eat_op(",")) break;
            if (at_op("]")) break;
        }
    }

    SyntaxNode parse_call(SyntaxNode callee) {
        const Token& open = take(); // '('
        SyntaxNode call;
        call.kind = NodeKind::Call;
        call.span = cover(callee.span, open.span);
        call.children.push_back(std::move(callee));
        CallInfo info;
        bool saw_keyword = false;
        while (!at_op(")")) {
            if (at_op("*") && !at_op("**")) {
                const Token& star = take();
                SyntaxNode s = make_other("*", star.span);
                s.children.push_back(parse_test());
                span_over_children(s);
                s.span = cover(star.span, s.span);
                s.text = "*";
                call.children.push_back(std::move(s));
                info.args_opaque = true;
            } else if (at_op("**")) {
                const Token& star = take();
                SyntaxNode s = make_other("**", star.span);
                s.children.push_back(parse_test());
                span_over_children(s);
                s.span = cover(star.span, s.span);
                s.text = "**";
                call.children.push_back(std::move(s));
                info.args_opaque = true;
            } else if (at_plain_name() && peek().type == TokType::Op && peek().text == "=") {
                const Token& kw = take();
                take(); // '='
                SyntaxNode k;
                k.kind = NodeKind::Keyword;
                k.text = std::string(kw.text);
                k.span = kw.span;
                k.children.push_back(parse_test());
                span_over_children(k);
                k.span = cover(kw.span, k.span);
                call.children.push_back(std::move(k));
                saw_keyword = true;
            } else {
                SyntaxNode arg = parse_namedexpr();
                if (at_name("for") || at_name("async")) {
                    arg = parse_comprehension_clauses(std::move(arg));
                } else if (saw_keyword) {
                    error("positional argument follows keyword argument");
                }
                if (!saw_keyword) ++info.positional_count;
                call.children.push_back(std::move(arg));
            }
            if (!eat_op(",")) break;
        }
        if (!at_op(")")) error("expected ')'");
        const Token& close = take();
        call.span = cover(call.span, close.span);
        for (const SyntaxNode& c : call.children) call.span = cover(call.span, c.span);
        call.payload = info;
        return call;
    }

    SyntaxNode parse_comprehension_clauses(SyntaxNode element) {
        SyntaxNode comp = make_other("comprehension", element.span);
        comp.children.push_back(std::move(element));
        while (true) {
            if (at_name("async") && peek().type == TokType::Name && peek().text == "for") take();
            if (!eat_name("for")) break;
            comp.children.push_back(parse_target_list());
            if (!eat_name("in")) error("expected 'in'");
            comp.children.push_back(parse_or_test());
            while (at_name("if")) {
                take();
                comp.children.push_back(parse_or_test());
            }
            if (!at_name("for") && !at_name("async")) break;
        }
        span_over_children(comp);
        comp.text = "comprehension";
        return comp;
    }

    SyntaxNode parse_yield_expr() {
        Span start = cur().span;
        take(); // yield
        SyntaxNode node = make_other("yield", start);
        if (eat_name("from")) {
            node.children.push_back(parse_test());
        } else if (!at_type(TokType::Newline) && !at_op(")") && !at_op("]") && !at_op("}") &&
                   !at_op(";") && !at_type(TokType::EndMarker) && !at_op(",")) {
            node.children.push_back(parse_testlist_star());
        }
        seal(node);
        node.span = cover(start, node.span);
        node.text = "yield";
        return node;
    }

    SyntaxNode make_literal(const Token& t) {
        SyntaxNode n;
        n.kind = NodeKind::Literal;
        n.span = t.span;
        n.text = std::string(t.text);
        LiteralValue v;
        if (t.type == TokType::Number) {
            if (t.num_is_int) {
                v.kind = LiteralValue::Kind::Int;
                v.int_value = t.int_value;
                v.decode_ok = !t.num_overflow;
            } else {
                v.kind = LiteralValue::Kind::Float;
                v.decode_ok = false; // floats are never folded
            }
        } else {
            v.kind = t.str_is_fstring ? LiteralValue::Kind::FString
                     : t.str_is_bytes ? LiteralValue::Kind::Bytes
                                      : LiteralValue::Kind::Str;
            v.text_value = t.str_decoded;
            v.decode_ok = t.str_decode_ok;
        }
        n.payload = std::move(v);
        return n;
    }

    SyntaxNode parse_atom() {
        if (at_type(TokType::Number)) return make_literal(take());
        if (at_type(TokType::Str)) {
            SyntaxNode lit = make_literal(cur());
            const Token& first = take();
            bool is_bytes = first.str_is_bytes;
            // adjacent string literals concatenate
            while (at_type(TokType::Str)) {
                const Token& next = take();
                LiteralValue* v = std::get_if<LiteralValue>(&lit.payload);
                if (next.str_is_bytes != is_bytes || next.str_is_fstring || !next.str_decode_ok)
                    v->decode_ok = false;
                else if (v->decode_ok)
                    v->text_value += next.str_decoded;
                if (next.str_is_fstring) v->kind = LiteralValue::Kind::FString;
                lit.span = cover(lit.span, next.span);
            }
            lit.text = std::string(slice(lit.span));
            return lit;
        }
        if (at_type(TokType::Name)) {
            std::string_view w = cur().text;
            if (w == "True" || w == "False" || w == "None") {
                const Token& t = take();
                SyntaxNode n;
                n.kind = NodeKind::Literal;
                n.span = t.span;
                n.text = std::string(t.text);
                LiteralValue v;
                if (w == "None") {
                    v.kind = LiteralValue::Kind::None;
                } else {
                    v.kind = LiteralValue::Kind::Bool;
                    v.int_value = w == "True" ? 1 : 0;
                }
                n.payload = std::move(v);
                return n;
            }
            if (w == "lambda") return parse_lambda();
            if (w == "yield") return parse_yield_expr();
            if (w == "await") return parse_await_primary();
            if (at_keyword()) error("unexpected keyword");
            const Token& t = take();
            SyntaxNode n;
            n.kind = NodeKind::Name;
            n.text = std::string(t.text);
            n.span = t.span;
            return n;
        }
        if (at_op("(")) {
            const Token& open = take();
            if (at_op(")")) {
                const Token& close = take();
                SyntaxNode empty = make_other("tuple", cover(open.span, close.span));
                empty.text = std::string(slice(empty.span));
                return empty;
            }
            SyntaxNode inner =
                at_name("yield") ? parse_yield_expr()
                : at_op("*")     ? parse_star_expr()
                                 : parse_namedexpr();
            if (at_name("for") || at_name("async")) {
                inner = parse_comprehension_clauses(std::move(inner));
            } else if (at_op(",")) {
                SyntaxNode tup = make_other("tuple", inner.span);
                tup.children.push_back(std::move(inner));
                while (eat_op(",")) {
                    if (at_op(")")) break;
                    tup.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
                }
                span_over_children(tup);
                tup.text = "tuple";
                inner = std::move(tup);
            }
            expect_op(")");
            return inner; // parentheses are transparent
        }
        if (at_op("[")) {
            const Token& open = take();
            SyntaxNode node = make_other("list", open.span);
            if (!at_op("]")) {
                SyntaxNode first = at_op("*") ? parse_star_expr() : parse_namedexpr();
                if (at_name("for") || at_name("async")) {
                    node.children.push_back(parse_comprehension_clauses(std::move(first)));
                } else {
                    node.children.push_back(std::move(first));
                    while (eat_op(",")) {
                        if (at_op("]")) break;
                        node.children.push_back(at_op("*") ? parse_star_expr()
                                                           : parse_namedexpr());
                    }
                }
            }
            if (!at_op("]")) error("expected ']'");
            const Token& close = take();
            span_over_children(node);
            node.span = cover(cover(open.span, close.span), node.span);
            if (node.children.empty()) node.text = std::string(slice(node.span));
            else node.text = "list";
            return node;
        }
        if (at_op("{")) {
            const Token& open = take();
            SyntaxNode node = make_other("dict", open.span);
            bool is_set = false;
            if (!at_op("}")) {
                if (at_op("**")) {
                    take();
                    node.children.push_back(parse_or_expr());
                } else {
                    SyntaxNode first = at_op("*") ? parse_star_expr() : parse_namedexpr();
                    if (eat_op(":")) {
                        node.children.push_back(std::move(first));
                        node.children.push_back(parse_test());
                    } else {
                        is_set = true;
                        node.children.push_back(std::move(first));
                    }
                    if (at_name("for") || at_name("async")) {
                        SyntaxNode elems = make_other(is_set ? "set" : "dict", node.span);
                        elems.children = std::move(node.children);
                        span_over_children(elems);
                        elems.text = is_set ? "set" : "dict";
                        node.children.clear();
                        node.children.push_back(parse_comprehension_clauses(std::move(elems)));
                    }
                }
                while (eat_op(",")) {
                    if (at_op("}")) break;
                    if (at_op("**")) {
                        take();
                        node.children.push_back(parse_or_expr());
                        continue;
                    }
                    SyntaxNode k = at_op("*") ? parse_star_expr() : parse_namedexpr();
                    if (!is_set && eat_op(":")) {
                        node.children.push_back(std::move(k));
                        node.children.push_back(parse_test());
                    } else {
                        node.children.push_back(std::move(k));
                    }
                }
            }
            if (!at_op("}")) error("expected '}'");
            const Token& close = take();
            span_over_children(node);
            node.span = cover(cover(open.span, close.span), node.span);
            if (node.children.empty()) node.text = std::string(slice(node.span));
            else node.text = is_set ? "set" : "dict";
            return node;
        }
        if (at_op("...")) {
            const Token& t = take();
            SyntaxNode n;
            n.kind = NodeKind::Literal;
            n.span = t.span;
            n.text = "...";
            LiteralValue v;
            v.kind = LiteralValue::Kind::Ellipsis;
            n.payload = std::move(v);
            return n;
        }
        error("expected expression");
    }

    std::string_view src_;
    std::vector<Token> toks_;
    size_t pos_ = 0;
    int depth_ = 0;
    int max_depth_;
};

} // namespace detail

/// Parses Python source into a normalized tree. Invalid syntax and
/// over-deep nesting come back as a ParseFailure value; a scan records the
/// failure and moves on.
inline ParseResult parse_source(const std::filesystem::path& path, std::string_view bytes,
                                const ParseOptions& options = {}) {
    // strip a UTF-8 BOM; detect invalid UTF-8 for the lossy-decode flag
    std::string_view src = bytes;
    if (src.size() >= 3 && static_cast<unsigned char>(src[0]) == 0xef &&
        static_cast<unsigned char>(src[1]) == 0xbb && static_cast<unsigned char>(src[2]) == 0xbf)
        src = src.substr(3);
    bool lossy = false;
    for (size_t i = 0; i < src.size();) {
        unsigned char c = src[i];
        size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3
                     : (c >> 3) == 0x1e             ? 4
                                                    : 0;
        if (len == 0 || i + len > src.size()) {
            lossy = true;
            ++i;
            continue;
        }
        bool ok = true;
        for (size_t j = 1; j < len; ++j)
            if ((static_cast<unsigned char>(src[i + j]) & 0xc0) != 0x80) ok = false;
        if (!ok) lossy = true;
        i += ok ? len : 1;
    }

    std::vector<Token> tokens;
    LexError lex_err;
    Lexer lexer(src);
    if (!lexer.run(tokens, lex_err)) {
        ParseFailure f;
        f.kind = ParseFailure::Kind::Syntax;
        f.path = path;
        f.message = lex_err.message;
        f.line = lex_err.line;
        f.column = lex_err.column;
        return {nullptr, f};
    }
    try {
        detail::Parser parser(src, std::move(tokens), options.max_depth);
        SyntaxNode root = parser.parse_module();
        auto tree =
            std::make_unique<SyntaxTree>(std::string(src), std::move(root), path, lossy);
        return {std::move(tree), std::nullopt};
    } catch (const detail::SyntaxError& e) {
        ParseFailure f;
        f.kind = ParseFailure::Kind::Syntax;
        f.path = path;
        f.message = e.message;
        f.line = e.line;
        f.column = e.column;
        return {nullptr, f};
    } catch (const detail::DepthError& e) {
        ParseFailure f;
        f.kind = ParseFailure::Kind::DepthExceeded;
        f.path = path;
        f.message = "maximum parse depth exceeded";
        f.line = e.line;
        f.column = e.column;
        return {nullptr, f};
    }
}

} // namespace cipherlint
