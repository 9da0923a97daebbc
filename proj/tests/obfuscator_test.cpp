#include "decompkit/ir/obfuscator.hpp"

#include "decompkit/ast/parser.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace dk;

TEST_CASE("reserved extraction keeps whitelist names seen in pseudocode") {
    std::string pseudo =
        "uint8_t *v3 = (uint8_t *)memcpy(dst, src, n);\n"
        "if (!v3) exit(1);\n";
    ir::ReservedSet reserved = ir::extract_reserved(pseudo);
    CHECK(reserved.contains("memcpy"));
    CHECK(reserved.contains("exit"));
    CHECK(reserved.contains("uint8_t"));
    CHECK(reserved.contains("int"));    // keyword, unconditional
    CHECK(reserved.contains("size_t")); // standard type, unconditional
    CHECK(!reserved.contains("dst"));   // seen but not on the whitelist
    CHECK(!reserved.contains("v3"));
}

TEST_CASE("empty pseudocode yields the unconditional base set") {
    ir::ReservedSet reserved = ir::extract_reserved("");
    CHECK(reserved.extras().empty());
    CHECK(reserved.contains("while"));
    CHECK(reserved.contains("uint64_t"));
    CHECK(!reserved.contains("memcpy"));  // whitelist name not observed
}

TEST_CASE("stripped sub_* names never enter the reserved set") {
    std::string pseudo =
        "__int64 sub_FFB80(__int64 a1) {\n"
        "    return sub_100390(a1) + sub_100630(a1, 0) + sub_FFAD0();\n"
        "}\n";
    ir::ReservedSet reserved = ir::extract_reserved(pseudo);
    for (const auto& name : reserved.extras()) {
        CHECK(name.substr(0, 4) != "sub_");
    }
    CHECK(!reserved.contains("sub_FFB80"));
}

TEST_CASE("hand-traced rename: add -> func1, a -> var1, b -> var2") {
    ir::ReservedSet reserved;
    ir::IrUnit unit = ir::obfuscate("int add(int a,int b){return a+b;}", reserved);
    CHECK(unit.ir_text == "int func1(int var1,int var2){return var1+var2;}");
    CHECK(unit.rename_map.map_for(ast::Category::Func).at("add") == "func1");
    CHECK(unit.rename_map.map_for(ast::Category::Var).at("a") == "var1");
    CHECK(unit.rename_map.map_for(ast::Category::Var).at("b") == "var2");
}

TEST_CASE("fully reserved input comes back unchanged with an empty map") {
    ir::ReservedSet reserved = ir::extract_reserved("int main() { return 0; }");
    REQUIRE(reserved.contains("main"));
    ir::IrUnit unit = ir::obfuscate("int main(){return 0;}", reserved);
    CHECK(unit.ir_text == "int main(){return 0;}");
    CHECK(unit.rename_map.total_entries() == 0);
    CHECK(ir::deobfuscate(unit) == "int main(){return 0;}");
}

TEST_CASE("nested member chain renames to the var3->field2->field3 shape") {
    const char* src =
        "int f(struct A *x, int n, struct E *e) {\n"
        "    x->count = n;\n"
        "    return e->key->obj ? 1 : 0;\n"
        "}\n";
    ir::ReservedSet reserved;
    ir::IrUnit unit = ir::obfuscate(src, reserved);
    CHECK(unit.ir_text.find("var3->field2->field3") != std::string::npos);
}

TEST_CASE("round trip is byte-exact and length accounting holds") {
    testing::ProgramGenerator gen(101);
    for (int round = 0; round < 40; ++round) {
        std::string src = gen.generate();
        ir::ReservedSet reserved;
        ir::IrUnit unit = ir::obfuscate(src, reserved);
        CHECK(ir::deobfuscate(unit) == src);

        // output length = input length + sum of replacement deltas
        auto outcome = ast::parse(src);
        REQUIRE(outcome.ok());
        long long delta = 0;
        for (const auto& occ : ast::enumerate_identifiers(*outcome.tree)) {
            if (reserved.contains(occ.name)) continue;
            const auto& m = unit.rename_map.map_for(occ.category);
            delta += (long long)m.at(occ.name).size() - (long long)occ.name.size();
        }
        CHECK((long long)unit.ir_text.size() == (long long)src.size() + delta);
    }
}

TEST_CASE("obfuscation is idempotent on its own output") {
    testing::ProgramGenerator gen(202);
    for (int round = 0; round < 20; ++round) {
        std::string src = gen.generate();
        ir::ReservedSet reserved;
        ir::IrUnit first = ir::obfuscate(src, reserved);
        ir::IrUnit second = ir::obfuscate(first.ir_text, reserved);
        CHECK(second.ir_text == first.ir_text);
    }
}

TEST_CASE("reserved names keep their token positions") {
    std::string pseudo = "memcpy(a, b, n); exit(0);";
    ir::ReservedSet reserved = ir::extract_reserved(pseudo);
    const char* src = "void f(char *d, char *s, int n) { memcpy(d, s, n); exit(n); }";
    ir::IrUnit unit = ir::obfuscate(src, reserved);
    auto src_occ = ast::enumerate_identifiers(*ast::parse(src).tree);
    auto ir_occ = ast::enumerate_identifiers(*ast::parse(unit.ir_text).tree);
    REQUIRE(src_occ.size() == ir_occ.size());
    for (size_t i = 0; i < src_occ.size(); ++i) {
        if (reserved.contains(src_occ[i].name)) {
            CHECK(ir_occ[i].name == src_occ[i].name);  // same relative position
        }
    }
}

TEST_CASE("ascending application corrupts an adversarial fixture") {
    // `aaaa` -> func1 lengthens the text; applying edits in ascending
    // order shifts the later span and corrupts the output.
    const char* src = "int aaaa(int b){return b;}";
    ir::ReservedSet reserved;
    ir::IrUnit unit = ir::obfuscate(src, reserved);
    CHECK(unit.ir_text == "int func1(int var1){return var1;}");

    auto outcome = ast::parse(src);
    REQUIRE(outcome.ok());
    std::string ascending(src);
    for (const auto& occ : ast::enumerate_identifiers(*outcome.tree)) {
        const auto& m = unit.rename_map.map_for(occ.category);
        auto it = m.find(occ.name);
        if (it == m.end()) continue;
        ascending.replace(occ.span.start, occ.span.end - occ.span.start, it->second);
    }
    CHECK(ascending != unit.ir_text);  // stale offsets corrupted the text
}

TEST_CASE("placeholder-shaped tokens that would alias raise CollisionError") {
    // var1 appears before any other variable, then `a` would become var2,
    // but var1 itself is the second distinct var -> aliasing.
    const char* src = "int f(int a, int var1){return a+var1;}";
    ir::ReservedSet reserved;
    CHECK_THROWS_AS(ir::obfuscate(src, reserved), ir::CollisionError);
}

TEST_CASE("unparsable source raises ParseFailed") {
    ir::ReservedSet reserved;
    CHECK_THROWS_AS(ir::obfuscate("@@@@", reserved), ir::ParseFailed);
}

TEST_CASE("deobfuscate with empty map returns ir text unchanged") {
    ir::IrUnit unit;
    unit.ir_text = "int main(){return 0;}";
    CHECK(ir::deobfuscate(unit) == unit.ir_text);
}

TEST_CASE("deobfuscate rejects a non-injective map") {
    ir::IrUnit unit;
    unit.ir_text = "int var1;";
    unit.rename_map.map_for(ast::Category::Var)["a"] = "var1";
    unit.rename_map.map_for(ast::Category::Var)["b"] = "var1";
    CHECK_THROWS_AS(ir::deobfuscate(unit), ir::InvertFailed);
}

TEST_CASE("placeholder set extraction is lexical with token boundaries") {
    CHECK(ir::extract_placeholder_set(
              "int func1(int var1,int var2){return var1+var2;}") ==
          std::set<std::string>{"func1", "var1", "var2"});
    CHECK(ir::extract_placeholder_set("int main(){return 0;}").empty());
    CHECK(ir::extract_placeholder_set("var10x + xvar3 + var0").empty());
    // broken text still yields its placeholder tokens
    CHECK(ir::extract_placeholder_set("type7 *var9 = {{{") ==
          std::set<std::string>{"type7", "var9"});
}

TEST_CASE("numbering law matches the independent oracle") {
    for (uint64_t seed = 500; seed < 520; ++seed) {
        testing::ProgramGenerator gen(seed);
        std::string src = gen.generate();
        auto outcome = ast::parse(src);
        REQUIRE(outcome.ok());
        ir::ReservedSet reserved;
        auto oracle = testing::oracle_obfuscate(*outcome.tree, reserved);
        ir::IrUnit unit = ir::obfuscate(src, reserved);
        CHECK(unit.ir_text == oracle.ir);
        for (size_t c = 0; c < 4; ++c) {
            CHECK(unit.rename_map.by_category[c] == oracle.maps[c]);
        }
    }
}
