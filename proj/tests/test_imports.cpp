#include <catch2/catch_amalgamated.hpp>

#include "tests/support/fixtures.hpp"

using namespace cipherlint;

namespace {

struct Resolved {
    std::unique_ptr<SyntaxTree> tree;
    ImportMap imports;
};

Resolved build(const std::string& src) {
    ParseResult r = parse_source("inline.py", src);
    REQUIRE(r.ok());
    Resolved out;
    out.imports = resolve_imports(*r.tree);
    out.tree = std::move(r.tree);
    return out;
}

const SyntaxNode* nth_call(const SyntaxTree& tree, int n) {
    const SyntaxNode* found = nullptr;
    int seen = 0;
    visit(tree.root(), [&](const SyntaxNode& node) {
        if (node.kind == NodeKind::Call && !found && seen++ == n) found = &node;
    });
    return found;
}

std::string callee_path(const Resolved& r, int n = 0) {
    const SyntaxNode* call = nth_call(*r.tree, n);
    REQUIRE(call);
    return qualify_callee(*call, r.imports).dotted();
}

} // namespace

TEST_CASE("plain import qualifies attribute calls") {
    auto r = build("import os\nos.urandom(16)\n");
    CHECK(callee_path(r) == "os.urandom");
}

TEST_CASE("dotted import binds the top level name") {
    auto r = build("import Crypto.Cipher\nCrypto.Cipher.AES.new(k)\n");
    CHECK(callee_path(r) == "Crypto.Cipher.AES.new");
}

TEST_CASE("import alias rewrites the root") {
    auto r = build("import nacl.secret as ns\nns.SecretBox(k)\n");
    CHECK(callee_path(r) == "nacl.secret.SecretBox");
}

TEST_CASE("from import binds the member") {
    auto r = build("from Crypto.Cipher import AES\nAES.new(k)\n");
    CHECK(callee_path(r) == "Crypto.Cipher.AES.new");
}

TEST_CASE("from import alias binds the member") {
    auto r = build("from Crypto.Cipher import AES as A\nA.new(k)\n");
    CHECK(callee_path(r) == "Crypto.Cipher.AES.new");
}

TEST_CASE("later imports shadow earlier ones only below") {
    auto r = build("from Crypto.Cipher import AES\n"
                   "AES.new(k)\n"
                   "from other import AES\n"
                   "AES.new(k)\n");
    CHECK(callee_path(r, 0) == "Crypto.Cipher.AES.new");
    CHECK(callee_path(r, 1) == "other.AES.new");
}

TEST_CASE("unimported names stay unresolved") {
    auto r = build("AES.new(k)\n");
    QualifiedName q = qualify_callee(*nth_call(*r.tree, 0), r.imports);
    CHECK_FALSE(q.resolved);
    CHECK(q.dotted() == "AES.new");
}

TEST_CASE("relative imports are marked unknowable") {
    auto r = build("from .local import helper\nhelper(k)\n");
    const ImportBinding* b = r.imports.lookup("helper", 1u << 30);
    REQUIRE(b);
    CHECK(b->relative);
    QualifiedName q = qualify_callee(*nth_call(*r.tree, 0), r.imports);
    CHECK_FALSE(q.resolved);
}

TEST_CASE("wildcard imports are recorded per module") {
    auto r = build("from Crypto.Cipher import *\nAES.new(k)\n");
    CHECK(r.imports.has_wildcard_before(1u << 30));
    auto mods = r.imports.wildcard_modules(1u << 30);
    REQUIRE(mods.size() == 1);
    CHECK(mods[0] == "Crypto.Cipher");
}

TEST_CASE("imports inside functions are collected") {
    auto r = build("def go():\n    import os\n    return os.urandom(8)\n");
    CHECK(callee_path(r) == "os.urandom");
}

TEST_CASE("bindings only apply after their statement") {
    auto r = build("os.urandom(1)\nimport os\n");
    QualifiedName q = qualify_callee(*nth_call(*r.tree, 0), r.imports);
    CHECK_FALSE(q.resolved);
}

TEST_CASE("calls on call results have no path") {
    auto r = build("import os\nget()().urandom(2)\n");
    QualifiedName q = qualify_callee(*nth_call(*r.tree, 0), r.imports);
    CHECK(q.parts.empty());
}
