#include <catch2/catch_amalgamated.hpp>

#include "tests/support/fixtures.hpp"

using namespace cipherlint;

namespace {

// folds the value expression of the last module-level assignment in `src`
std::optional<ConstValue> fold_last(const std::string& src, size_t max_bytes = 1u << 20) {
    ParseResult r = parse_source("inline.py", src);
    REQUIRE(r.ok());
    static const RuleCatalog catalog = RuleCatalog::builtin();
    ImportMap imports = resolve_imports(*r.tree);
    FoldContext ctx = catalog.fold_context(imports, false);
    ctx.max_bytes = max_bytes;

    const SyntaxNode* value = nullptr;
    visit(r.tree->root(), [&](const SyntaxNode& n) {
        if (n.kind == NodeKind::Assignment && n.assign_info())
            value = &n.children[n.assign_info()->value_index];
    });
    REQUIRE(value);
    return fold_constant(*value, ctx);
}

} // namespace

TEST_CASE("plain literals fold to their value") {
    auto i = fold_last("v = 42\n");
    REQUIRE(i);
    CHECK(i->kind == ConstValue::Kind::Int);
    CHECK(i->number == 42);

    auto s = fold_last("v = \"pw\"\n");
    REQUIRE(s);
    CHECK(s->kind == ConstValue::Kind::Str);
    CHECK(s->data == "pw");

    auto b = fold_last("v = b\"\\x00\\xff\"\n");
    REQUIRE(b);
    CHECK(b->kind == ConstValue::Kind::Bytes);
    CHECK(b->data == std::string("\x00\xff", 2));

    auto t = fold_last("v = True\n");
    REQUIRE(t);
    CHECK(t->kind == ConstValue::Kind::Int);
    CHECK(t->number == 1);
}

TEST_CASE("floats none and f strings never fold") {
    CHECK_FALSE(fold_last("v = 2.5\n"));
    CHECK_FALSE(fold_last("v = None\n"));
    CHECK_FALSE(fold_last("x = 3\nv = f\"{x}\"\n"));
}

TEST_CASE("repetition folds in both operand orders") {
    auto a = fold_last("v = b\"\\x00\" * 16\n");
    REQUIRE(a);
    CHECK(a->data == std::string(16, '\0'));

    auto b = fold_last("v = 16 * b\"\\x00\"\n");
    REQUIRE(b);
    CHECK(b->data == std::string(16, '\0'));

    auto s = fold_last("v = \"ab\" * 3\n");
    REQUIRE(s);
    CHECK(s->kind == ConstValue::Kind::Str);
    CHECK(s->data == "ababab");
}

TEST_CASE("unary expressions are outside the fold grammar") {
    // -1 is a unary minus over a literal, not an integer literal
    CHECK_FALSE(fold_last("v = b\"k\" * -1\n"));
    CHECK_FALSE(fold_last("v = -5\n"));
}

TEST_CASE("concatenation requires matching kinds") {
    auto ok = fold_last("v = b\"ab\" + b\"cd\"\n");
    REQUIRE(ok);
    CHECK(ok->data == "abcd");

    auto st = fold_last("v = \"ab\" + \"cd\"\n");
    REQUIRE(st);
    CHECK(st->kind == ConstValue::Kind::Str);

    CHECK_FALSE(fold_last("v = b\"ab\" + \"cd\"\n"));
    CHECK_FALSE(fold_last("v = 1 + 2\n"));
}

TEST_CASE("results over the size cap are not folded") {
    CHECK(fold_last("v = b\"x\" * 64\n", 64));
    CHECK_FALSE(fold_last("v = b\"x\" * 65\n", 64));
    CHECK_FALSE(fold_last("v = b\"\\x00\" * 2097152\n"));
}

TEST_CASE("nested foldable operands compose") {
    auto v = fold_last("v = (b\"a\" * 2) + b\"b\" * 2\n");
    REQUIRE(v);
    CHECK(v->data == "aabb");
}

TEST_CASE("mode constants fold to their dotted path") {
    auto v = fold_last("from Crypto.Cipher import AES\nv = AES.MODE_ECB\n");
    REQUIRE(v);
    CHECK(v->kind == ConstValue::Kind::EnumConst);
    CHECK(v->enum_path == "Crypto.Cipher.AES.MODE_ECB");
    CHECK_FALSE(v->random_source);
}

TEST_CASE("mode constructor calls fold to the constructor path") {
    auto v = fold_last("from cryptography.hazmat.primitives.ciphers import modes\n"
                       "v = modes.ECB()\n");
    REQUIRE(v);
    CHECK(v->kind == ConstValue::Kind::EnumConst);
    CHECK(v->enum_path == "cryptography.hazmat.primitives.ciphers.modes.ECB");
}

TEST_CASE("recognized randomness calls fold as fresh values") {
    auto v = fold_last("import os\nv = os.urandom(16)\n");
    REQUIRE(v);
    CHECK(v->kind == ConstValue::Kind::EnumConst);
    CHECK(v->random_source);
    CHECK(v->enum_path == "os.urandom");

    auto s = fold_last("import secrets\nv = secrets.token_bytes(32)\n");
    REQUIRE(s);
    CHECK(s->random_source);
}

TEST_CASE("unknown attributes and calls stay unfolded") {
    CHECK_FALSE(fold_last("from Crypto.Cipher import AES\nv = AES.MODE_MADE_UP\n"));
    CHECK_FALSE(fold_last("import os\nv = os.path.join(\"a\")\n"));
    CHECK_FALSE(fold_last("v = AES.MODE_ECB\n")); // no import, no suffix match
}

TEST_CASE("suffix matching recovers unimported constants when enabled") {
    ParseResult r = parse_source("inline.py", "v = AES.MODE_ECB\n");
    REQUIRE(r.ok());
    static const RuleCatalog catalog = RuleCatalog::builtin();
    ImportMap imports = resolve_imports(*r.tree);
    FoldContext ctx = catalog.fold_context(imports, true);
    const SyntaxNode* value = nullptr;
    visit(r.tree->root(), [&](const SyntaxNode& n) {
        if (n.kind == NodeKind::Assignment && n.assign_info())
            value = &n.children[n.assign_info()->value_index];
    });
    REQUIRE(value);
    auto v = fold_constant(*value, ctx);
    REQUIRE(v);
    CHECK(v->enum_path == "Crypto.Cipher.AES.MODE_ECB");
}

TEST_CASE("value rendering is stable") {
    CHECK(to_string(ConstValue::integer(7)) == "int:7");
    CHECK(to_string(ConstValue::str("pw")) == "str:pw");
    CHECK(to_string(ConstValue::bytes(std::string("\x00\xff", 2))) == "bytes:00ff");
    CHECK(to_string(ConstValue::enum_const("a.b.C")) == "enum:a.b.C");
    CHECK(to_string(ConstValue::enum_const("os.urandom", true)) == "random:os.urandom");
}
