#include "decompkit/reward/rewards.hpp"

#include "decompkit/reward/header_synth.hpp"

#include <doctest.h>

#include <random>

using namespace dk;

TEST_CASE("jaccard: identity, fraction, disjoint, empty convention") {
    std::set<std::string> abc = {"var1", "var2", "func1"};
    CHECK(reward::placeholder_jaccard(abc, abc) == 1.0);
    CHECK(reward::placeholder_jaccard({"var1", "var2"}, {"var1", "var3"}) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(reward::placeholder_jaccard({}, {"var1"}) == 0.0);
    CHECK(reward::placeholder_jaccard({}, {}) == 1.0);
    // symmetry
    CHECK(reward::placeholder_jaccard({"var1", "var2"}, {"var1", "var3"}) ==
          reward::placeholder_jaccard({"var1", "var3"}, {"var1", "var2"}));
}

TEST_CASE("jaccard agrees with a brute-force bitset oracle") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10000; ++trial) {
        uint32_t mask_a = uint32_t(rng());
        uint32_t mask_b = uint32_t(rng());
        std::set<std::string> a, b;
        for (int bit = 0; bit < 32; ++bit) {
            std::string name = "var" + std::to_string(bit + 1);
            if (mask_a & (1u << bit)) a.insert(name);
            if (mask_b & (1u << bit)) b.insert(name);
        }
        double expected;
        uint32_t inter = mask_a & mask_b, uni = mask_a | mask_b;
        if (uni == 0) {
            expected = 1.0;
        } else {
            expected = double(__builtin_popcount(inter)) / double(__builtin_popcount(uni));
        }
        CHECK(reward::placeholder_jaccard(a, b) == doctest::Approx(expected));
    }
}

TEST_CASE("header synthesis: opaque typedef for pointer-only unknown type") {
    std::string header = reward::synthesize_header("int func1(type1 *var1) { return var1 != 0; }");
    CHECK(header.find("typedef struct type1 type1;") != std::string::npos);
}

TEST_CASE("header synthesis: standard include for whitelist calls") {
    std::string header = reward::synthesize_header(
        "void func1(char *var1, char *var2, int var3) { memcpy(var1, var2, var3); }");
    CHECK(header.find("#include <string.h>") != std::string::npos);
}

TEST_CASE("header synthesis: reference header passes through verbatim") {
    std::string ref = "struct ctx { int a; };\n";
    CHECK(reward::synthesize_header("int func1(void){return 0;}", ref) == ref);
}

TEST_CASE("compile check verdicts") {
    CHECK(reward::check_compilable("int func1(void){return 0;}", "").compiled);
    CHECK(!reward::check_compilable("int func1(void){return 0", "").compiled);

    // member-chain ir compiles behind its synthesized header
    const char* ir =
        "int func1(struct type1 *var1, int var2, struct type2 *var3) {\n"
        "    var1->field1 = var2;\n"
        "    return var3->field2->field3 ? 1 : 0;\n"
        "}\n";
    std::string header = reward::synthesize_header(ir);
    auto verdict = reward::check_compilable(ir, header);
    CHECK(verdict.compiled);
    CHECK(verdict.exit_code == 0);
}

TEST_CASE("toolchain errors are configuration errors, not verdicts") {
    reward::CompilerConfig config;
    config.compiler = "/nonexistent/compiler-binary";
    CHECK_THROWS_AS(reward::check_compilable("int x;", "", config),
                    reward::ToolchainMissing);
}

TEST_CASE("structure reward composes gate and jaccard") {
    const char* ref = "int func1(int var1){return var1;}";
    SUBCASE("identical compilable pair scores 2.0") {
        auto r = reward::structure_reward(ref, ref, std::nullopt);
        CHECK(r.verdict.compiled);
        CHECK(r.r_placeholder == 1.0);
        CHECK(r.r_structure == 2.0);
    }
    SUBCASE("syntax-broken candidate scores exactly 0 despite overlap") {
        auto r = reward::structure_reward("int func1(int var1){return var1;", ref,
                                          std::nullopt);
        CHECK(!r.verdict.compiled);
        CHECK(r.r_structure == 0.0);
        CHECK(r.r_placeholder > 0.0);  // overlap exists but the gate dominates
    }
    SUBCASE("half-overlap compilable pair scores 1.5") {
        // gen {func1,var1,var2} vs ref {func1,var1,var3}: jaccard 2/4
        auto r = reward::structure_reward(
            "int func1(int var1, int var2){return var1+var2;}",
            "int func1(int var1, int var3){return var1-var3;}", std::nullopt);
        CHECK(r.verdict.compiled);
        CHECK(r.r_placeholder == doctest::Approx(0.5));
        CHECK(r.r_structure == doctest::Approx(1.5));
    }
}

TEST_CASE("gate dominance: injecting a syntax error forces 0") {
    std::string good = "int func1(int var1){return var1;}";
    std::string ref = good;
    auto passing = reward::structure_reward(good, ref, std::nullopt);
    REQUIRE(passing.r_structure == 2.0);
    std::string broken = good;
    broken.erase(broken.find('}'), 1);
    auto failing = reward::structure_reward(broken, ref, std::nullopt);
    CHECK(failing.r_structure == 0.0);
}

TEST_CASE("identifier reward: identity, open interval, range") {
    reward::HashedTokenProvider provider;
    SUBCASE("identical texts score 1") {
        auto r = reward::identifier_reward("int add(int a,int b)", "int add(int a,int b)",
                                           provider);
        CHECK(r.r_identifier == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.provider_id == provider.provider_id());
    }
    SUBCASE("shared structure with different names lands strictly inside (0,1)") {
        auto r = reward::identifier_reward("int add(int a,int b)", "int sum(int x,int y)",
                                           provider);
        CHECK(r.r_identifier > 0.0);
        CHECK(r.r_identifier < 1.0);
        // golden value for the bundled provider: the two texts share 12 of
        // 15 token slots (int x3 and three punctuators), so cos = 12/15
        CHECK(r.r_identifier == doctest::Approx(0.8).epsilon(1e-9));
    }
    SUBCASE("empty inputs are rejected") {
        CHECK_THROWS_AS(reward::identifier_reward("", "int x;", provider),
                        std::invalid_argument);
    }
}

namespace {

// provider wrapper scaling outputs by a positive factor
class ScaledProvider : public reward::EmbeddingProvider {
public:
    ScaledProvider(reward::EmbeddingProvider& inner, double factor)
        : inner_(inner), factor_(factor) {}
    std::vector<double> embed(const std::string& text) override {
        auto v = inner_.embed(text);
        for (double& x : v) x *= factor_;
        return v;
    }
    std::string provider_id() const override { return "scaled"; }
    size_t dimension() const override { return inner_.dimension(); }

private:
    reward::EmbeddingProvider& inner_;
    double factor_;
};

class OrthogonalProvider : public reward::EmbeddingProvider {
public:
    std::vector<double> embed(const std::string& text) override {
        std::vector<double> v(4, 0.0);
        v[text.size() % 4] = 1.0;
        return v;
    }
    std::string provider_id() const override { return "orthogonal"; }
    size_t dimension() const override { return 4; }
};

} // namespace

TEST_CASE("cosine is invariant under positive scaling of either side") {
    reward::HashedTokenProvider base;
    ScaledProvider scaled(base, 42.5);
    auto plain = reward::identifier_reward("int a(void){return 1;}",
                                           "long b(void){return 2;}", base);
    auto widened = reward::identifier_reward("int a(void){return 1;}",
                                             "long b(void){return 2;}", scaled);
    CHECK(plain.r_identifier == doctest::Approx(widened.r_identifier).epsilon(1e-12));
}

TEST_CASE("orthogonal vectors score 0 and range stays within [-1,1]") {
    OrthogonalProvider provider;
    auto r = reward::identifier_reward("ab", "abc", provider);  // lengths 2 vs 3
    CHECK(r.r_identifier == doctest::Approx(0.0));

    reward::HashedTokenProvider hashed;
    const char* texts[] = {"int a;", "for(;;){}", "x = y + z;", "struct q { int w; };"};
    for (const char* a : texts) {
        for (const char* b : texts) {
            auto rr = reward::identifier_reward(a, b, hashed);
            CHECK(rr.r_identifier <= 1.0 + 1e-12);
            CHECK(rr.r_identifier >= -1.0 - 1e-12);
        }
    }
}

TEST_CASE("batch rewards: empty, ordered, isolated") {
    SUBCASE("empty batch") {
        auto records =
            reward::batch_rewards({}, reward::RewardMode::Structure, {}, nullptr);
        CHECK(records.empty());
    }
    SUBCASE("three structure pairs keep input order") {
        std::vector<reward::RewardPair> pairs = {
            {"beta", "int func1(void){return 1;}", "int func1(void){return 1;}", {}},
            {"alpha", "int func1(void){return 2;}", "int func1(void){return 2;}", {}},
            {"gamma", "broken(", "int func1(void){return 3;}", {}},
        };
        auto records =
            reward::batch_rewards(pairs, reward::RewardMode::Structure, {}, nullptr);
        REQUIRE(records.size() == 3);
        CHECK(records[0].id == "beta");
        CHECK(records[1].id == "alpha");
        CHECK(records[2].id == "gamma");
        CHECK(records[0].structure->r_structure == 2.0);
        CHECK(records[2].structure->r_structure == 0.0);
    }
    SUBCASE("identifier mode without a provider is a usage error") {
        std::vector<reward::RewardPair> pairs = {{"a", "int x;", "int y;", {}}};
        CHECK_THROWS_AS(
            reward::batch_rewards(pairs, reward::RewardMode::Identifier, {}, nullptr),
            std::invalid_argument);
    }
}

TEST_CASE("a poisoned sample cannot fail the batch") {
    // preprocessor bomb: compile time blows past the per-sample timeout
    std::string bomb = "#define E0 1+1\n";
    for (int i = 1; i <= 26; ++i) {
        bomb += "#define E" + std::to_string(i) + " E" + std::to_string(i - 1) + " + E" +
                std::to_string(i - 1) + "\n";
    }
    bomb += "int func1(void){ return E26; }\n";

    std::vector<reward::RewardPair> pairs;
    for (int i = 0; i < 1000; ++i) {
        std::string ir = "int func1(int var1){return var1 + " + std::to_string(i % 7) +
                         ";}";
        pairs.push_back({"p" + std::to_string(i), ir, ir, {}});
    }
    pairs[500].gen = bomb;  // the poisoned one

    reward::BatchOptions options;
    options.compiler.timeout_ms = 2000;
    auto records = reward::batch_rewards(pairs, reward::RewardMode::Structure, options,
                                         nullptr);
    REQUIRE(records.size() == 1000);
    CHECK(records[500].structure->r_structure == 0.0);
    CHECK(!records[500].diagnostics.empty());
    size_t compiled = 0;
    for (size_t i = 0; i < records.size(); ++i) {
        if (i == 500) continue;
        REQUIRE(records[i].structure.has_value());
        if (records[i].structure->verdict.compiled) ++compiled;
    }
    CHECK(compiled == 999);
}

TEST_CASE("reward ranges hold on every record") {
    std::vector<reward::RewardPair> pairs = {
        {"x", "int func1(void){return 0;}", "int func2(void){return 1;}", {}},
        {"y", "not c at all ((", "int func1(void){return 1;}", {}},
    };
    auto records = reward::batch_rewards(pairs, reward::RewardMode::Structure, {}, nullptr);
    for (const auto& record : records) {
        REQUIRE(record.structure.has_value());
        double rs = record.structure->r_structure;
        double rp = record.structure->r_placeholder;
        CHECK(rp >= 0.0);
        CHECK(rp <= 1.0);
        CHECK((rs == 0.0 || (rs >= 1.0 && rs <= 2.0)));
    }
}
