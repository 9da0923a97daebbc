#include "decompkit/ast/parser.hpp"
#include "decompkit/ast/token.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace dk;
using ast::Category;
using ast::NodeKind;
using ast::ParseStatus;

namespace {

std::vector<std::string> occurrence_summary(const ast::SyntaxTree& tree) {
    std::vector<std::string> out;
    for (const auto& o : ast::enumerate_identifiers(tree)) {
        out.push_back(o.name + ":" + ast::category_name(o.category) +
                      (o.decl_site ? ":decl" : ""));
    }
    return out;
}

void check_tree_invariants(const ast::Node& node) {
    CHECK(node.start <= node.end);
    uint32_t last_end = node.start;
    for (const auto& child : node.children) {
        CHECK(child.start >= node.start);
        CHECK(child.end <= node.end);
        CHECK(child.start >= last_end);  // siblings ordered, no overlap
        last_end = child.end;
        check_tree_invariants(child);
    }
}

} // namespace

TEST_CASE("minimal program parses to one function definition") {
    auto outcome = ast::parse("int main(){return 0;}");
    REQUIRE(outcome.status == ParseStatus::Ok);
    size_t function_defs = 0;
    for (const auto& item : outcome.tree->root.children)
        if (item.kind == NodeKind::FunctionDefinition) ++function_defs;
    CHECK(function_defs == 1);
    auto occs = ast::enumerate_identifiers(*outcome.tree);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].name == "main");
    CHECK(occs[0].category == Category::Func);
    CHECK(occs[0].decl_site);
}

TEST_CASE("empty input fails with a diagnostic") {
    auto outcome = ast::parse("");
    CHECK(outcome.status == ParseStatus::Failed);
    CHECK(!outcome.tree.has_value());
    REQUIRE(!outcome.diagnostics.empty());
    CHECK(outcome.diagnostics[0].message == "empty input");

    auto ws = ast::parse("  \n\t ");
    CHECK(ws.status == ParseStatus::Failed);
}

TEST_CASE("pure noise fails rather than recovering") {
    auto outcome = ast::parse("@@@@");
    CHECK(outcome.status == ParseStatus::Failed);
}

TEST_CASE("memory allocator unit: golden occurrence inventory") {
    // shape of the classic arena allocator example: one struct type,
    // two fields, one function
    const char* src =
        "struct arena {\n"
        "    char *base;\n"
        "    int used;\n"
        "};\n"
        "void *arena_alloc(struct arena *a, int n) {\n"
        "    char *p = a->base + a->used;\n"
        "    a->used = a->used + n;\n"
        "    return p;\n"
        "}\n";
    auto outcome = ast::parse(src);
    REQUIRE(outcome.status == ParseStatus::Ok);
    auto summary = occurrence_summary(*outcome.tree);
    std::vector<std::string> expected = {
        "arena:type:decl", "base:field:decl", "used:field:decl",
        "arena_alloc:func:decl", "arena:type", "a:var:decl", "n:var:decl",
        "p:var:decl", "a:var", "base:field", "a:var", "used:field",
        "a:var", "used:field", "a:var", "used:field", "n:var", "p:var",
    };
    CHECK(summary == expected);
}

TEST_CASE("single declaration enumerates one var") {
    auto outcome = ast::parse("int x;");
    REQUIRE(outcome.ok());
    auto summary = occurrence_summary(*outcome.tree);
    CHECK(summary == std::vector<std::string>{"x:var:decl"});
}

TEST_CASE("pre-order enumeration of a struct + function unit") {
    auto outcome =
        ast::parse("struct S { int f; }; int g(struct S* p){ return p->f; }");
    REQUIRE(outcome.status == ParseStatus::Ok);
    auto summary = occurrence_summary(*outcome.tree);
    std::vector<std::string> expected = {
        "S:type:decl", "f:field:decl", "g:func:decl",
        "S:type",      "p:var:decl",   "p:var",       "f:field",
    };
    CHECK(summary == expected);
}

TEST_CASE("classification: calls, members, casts, labels") {
    const char* src =
        "int run(char *dst, char *s, int n) {\n"
        "    memcpy(dst, s, n);\n"
        "    if (n < 0) goto out;\n"
        "    n = ((struct pair *)dst)->second;\n"
        "out:\n"
        "    return n;\n"
        "}\n";
    auto outcome = ast::parse(src);
    REQUIRE(outcome.ok());
    bool memcpy_is_func = false, second_is_field = false, pair_is_type = false;
    int out_var = 0;
    for (const auto& o : ast::enumerate_identifiers(*outcome.tree)) {
        if (o.name == "memcpy" && o.category == Category::Func) memcpy_is_func = true;
        if (o.name == "second" && o.category == Category::Field) second_is_field = true;
        if (o.name == "pair" && o.category == Category::Type) pair_is_type = true;
        if (o.name == "out" && o.category == Category::Var) ++out_var;
    }
    CHECK(memcpy_is_func);
    CHECK(second_is_field);
    CHECK(pair_is_type);
    CHECK(out_var == 2);  // goto target use + label definition
}

TEST_CASE("placeholder-shaped ir reparses consistently with its prefixes") {
    const char* ir =
        "int func1(struct type1 *var1, int var2, struct type2 *var3) {\n"
        "    var1->field1 = var2;\n"
        "    return var3->field2->field3 ? 1 : 0;\n"
        "}\n";
    auto outcome = ast::parse(ir);
    REQUIRE(outcome.ok());
    for (const auto& o : ast::enumerate_identifiers(*outcome.tree)) {
        std::string prefix = ast::category_name(o.category);
        CHECK(o.name.substr(0, prefix.size()) == prefix);
    }
}

TEST_CASE("span fidelity and pre-order hold on generated corpus") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        testing::ProgramGenerator gen(seed);
        std::string src = gen.generate();
        auto outcome = ast::parse(src);
        REQUIRE(outcome.status == ParseStatus::Ok);
        auto occs = ast::enumerate_identifiers(*outcome.tree);
        uint32_t last_start = 0;
        for (const auto& o : occs) {
            CHECK(src.substr(o.span.start, o.span.end - o.span.start) == o.name);
            CHECK(o.span.start >= last_start);  // identifiers are leaves
            last_start = o.span.start;
        }
        check_tree_invariants(outcome.tree->root);
    }
}

TEST_CASE("parse + enumerate is deterministic") {
    testing::ProgramGenerator gen(77);
    std::string src = gen.generate();
    auto first = ast::parse(src);
    auto second = ast::parse(src);
    REQUIRE(first.ok());
    REQUIRE(second.ok());
    auto a = occurrence_summary(*first.tree);
    auto b = occurrence_summary(*second.tree);
    CHECK(a == b);
}

TEST_CASE("recovery: broken statement keeps surrounding structure") {
    const char* src =
        "int ok_before(void) { return 1; }\n"
        "int broken(void) { int x = ; return x; }\n"
        "int ok_after(void) { return 2; }\n";
    auto outcome = ast::parse(src);
    CHECK(outcome.status == ParseStatus::RecoveredWithErrors);
    CHECK(!outcome.diagnostics.empty());
    size_t function_defs = 0;
    for (const auto& item : outcome.tree->root.children)
        if (item.kind == NodeKind::FunctionDefinition) ++function_defs;
    CHECK(function_defs == 3);
}

TEST_CASE("identifiers in unparsed regions survive as var with diagnostics") {
    const char* src = "int f(void) { @@ mystery_token @@ ; return 0; }";
    auto outcome = ast::parse(src);
    REQUIRE(outcome.ok());
    bool found = false;
    for (const auto& o : ast::enumerate_identifiers(*outcome.tree)) {
        if (o.name == "mystery_token" && o.category == Category::Var) found = true;
    }
    CHECK(found);
}

TEST_CASE("preprocessor tokens are excluded from enumeration") {
    const char* src =
        "#include <stdio.h>\n"
        "#define LIMIT 10\n"
        "int f(int n) { return n + LIMIT; }\n";
    auto outcome = ast::parse(src);
    REQUIRE(outcome.ok());
    auto summary = occurrence_summary(*outcome.tree);
    std::vector<std::string> expected = {"f:func:decl", "n:var:decl", "n:var",
                                         "LIMIT:var"};
    CHECK(summary == expected);
}

TEST_CASE("synthesized header offsets are excluded and relative spans hold") {
    std::string header = "typedef struct box box;\n";
    std::string src = "int probe(box *b) { return b->tag; }";
    auto outcome = ast::parse(src, header);
    REQUIRE(outcome.ok());
    auto occs = ast::enumerate_identifiers(*outcome.tree);
    REQUIRE(!occs.empty());
    for (const auto& o : occs) {
        CHECK(src.substr(o.span.start, o.span.end - o.span.start) == o.name);
    }
    // `box` in parameter position classifies as a type thanks to the header
    CHECK(occs[1].name == "box");
    CHECK(occs[1].category == Category::Type);
}

TEST_CASE("category partition is exhaustive over generated corpus") {
    testing::ProgramGenerator gen(11);
    for (int round = 0; round < 10; ++round) {
        std::string src = gen.generate();
        auto outcome = ast::parse(src);
        REQUIRE(outcome.ok());
        for (const auto& o : ast::enumerate_identifiers(*outcome.tree)) {
            bool one_of_four = o.category == Category::Func ||
                               o.category == Category::Type ||
                               o.category == Category::Field ||
                               o.category == Category::Var;
            CHECK(one_of_four);
        }
    }
}
