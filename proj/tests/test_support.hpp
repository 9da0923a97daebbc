#pragma once

#include "decompkit/ast/parser.hpp"
#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/support/text_io.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dk::testing {

// ---------------------------------------------------------------------------
// Deterministic random C program generator. Output parses cleanly; most
// programs also compile (not required by the tests that use them).
// ---------------------------------------------------------------------------
class ProgramGenerator {
public:
    explicit ProgramGenerator(uint64_t seed) : rng_(seed) {}

    std::string generate() {
        type_count_ = 0;
        out_.str("");
        globals_.clear();
        functions_.clear();

        int structs = 1 + int(rng_() % 2);
        for (int i = 0; i < structs; ++i) emit_struct(i);
        int globals = int(rng_() % 3);
        for (int i = 0; i < globals; ++i) emit_global(i);
        int funcs = 1 + int(rng_() % 3);
        for (int i = 0; i < funcs; ++i) emit_function(i);
        return out_.str();
    }

private:
    std::mt19937_64 rng_;
    std::ostringstream out_;
    std::vector<std::string> globals_;
    std::vector<std::string> functions_;
    int type_count_ = 0;

    size_t pick(size_t n) { return size_t(rng_() % n); }

    std::string type_name(int i) {
        static const char* base[] = {"Packet", "Buffer", "Matrix", "Header",
                                     "Record", "Chunk"};
        return std::string(base[i % 6]) + (i >= 6 ? std::to_string(i) : "");
    }
    std::string field_name(size_t i) {
        static const char* base[] = {"count", "next", "size", "left",
                                     "right", "weight", "depth", "flags"};
        return base[i % 8];
    }
    std::string var_name(size_t i) {
        static const char* base[] = {"idx", "total", "tmp", "acc",
                                     "cursor", "len", "pos", "step"};
        return base[i % 8];
    }
    std::string func_name(size_t i) {
        static const char* base[] = {"process", "update", "scan",
                                     "reduce", "merge", "fold"};
        return std::string(base[i % 6]) + (i >= 6 ? std::to_string(i) : "");
    }

    void emit_struct(int index) {
        std::string name = type_name(index);
        ++type_count_;
        out_ << "struct " << name << " {\n";
        out_ << "    int " << field_name(pick(4)) << ";\n";
        out_ << "    long " << field_name(4 + pick(4)) << ";\n";
        if (rng_() % 2) out_ << "    struct " << name << " *next;\n";
        out_ << "};\n\n";
    }

    void emit_global(int index) {
        std::string name = "shared_" + var_name(index);
        globals_.push_back(name);
        out_ << (rng_() % 2 ? "static " : "") << "int " << name << " = "
             << (rng_() % 100) << ";\n";
    }

    std::string expr(const std::vector<std::string>& vars, int depth) {
        if (depth <= 0 || rng_() % 3 == 0) {
            if (!vars.empty() && rng_() % 3) return vars[pick(vars.size())];
            return std::to_string(rng_() % 64);
        }
        static const char* ops[] = {" + ", " - ", " * ", " % ", " & ", " | "};
        std::string op = ops[pick(5)];
        std::string lhs = expr(vars, depth - 1);
        std::string rhs = expr(vars, depth - 1);
        if (op == " % ") rhs = "(" + rhs + " + 3)";
        return "(" + lhs + op + rhs + ")";
    }

    void emit_function(int index) {
        std::string name = func_name(index);
        std::string ptype = type_name(int(pick(size_t(type_count_))));
        std::vector<std::string> vars = {"a", "b"};
        for (const auto& g : globals_) vars.push_back(g);

        out_ << "int " << name << "(int a, int b, struct " << ptype << " *ctx) {\n";
        size_t locals = 1 + pick(3);
        for (size_t i = 0; i < locals; ++i) {
            std::string v = var_name(i);
            vars.push_back(v);
            out_ << "    int " << v << " = " << expr(vars, 1) << ";\n";
        }
        bool with_goto = rng_() % 4 == 0;
        size_t stmts = 1 + pick(3);
        for (size_t i = 0; i < stmts; ++i) {
            switch (pick(4)) {
                case 0:
                    out_ << "    " << vars[2 + pick(vars.size() - 2)] << " = "
                         << expr(vars, 2) << ";\n";
                    break;
                case 1:
                    out_ << "    if (" << expr(vars, 1) << " > " << expr(vars, 1)
                         << ") {\n        " << vars[2 + pick(vars.size() - 2)]
                         << " = " << expr(vars, 1) << ";\n    }\n";
                    break;
                case 2:
                    out_ << "    for (a = 0; a < 8; a++) {\n        b = b + "
                         << expr(vars, 1) << ";\n    }\n";
                    break;
                default:
                    out_ << "    while (b > " << (rng_() % 16) << ") {\n        b = b - "
                         << (1 + rng_() % 4) << ";\n    }\n";
                    break;
            }
        }
        if (rng_() % 2) out_ << "    ctx->count = a;\n";
        if (with_goto) {
            out_ << "    if (a > b) goto done;\n";
            out_ << "    a = a + 1;\n";
            out_ << "done:\n";
        }
        if (!functions_.empty() && rng_() % 2) {
            out_ << "    return " << functions_[pick(functions_.size())]
                 << "(a, b, ctx) + " << expr(vars, 1) << ";\n";
        } else {
            out_ << "    return " << expr(vars, 2) << ";\n";
        }
        out_ << "}\n\n";
        functions_.push_back(name);
    }
};

// ---------------------------------------------------------------------------
// Independent oracle for the renaming algorithm: its own pre-order walk,
// literal counter bookkeeping, and an ascending rebuild of the output
// (the production path replaces in place by descending offset).
// ---------------------------------------------------------------------------
struct OracleRename {
    std::string ir;
    std::array<std::map<std::string, std::string>, 4> maps;
};

inline void oracle_collect(const ast::Node& node, const ast::SyntaxTree& tree,
                           std::vector<const ast::Node*>& leaves) {
    if (node.kind == ast::NodeKind::Identifier) {
        if (node.start >= tree.header_len) leaves.push_back(&node);
        return;
    }
    for (const auto& child : node.children) oracle_collect(child, tree, leaves);
}

inline OracleRename oracle_obfuscate(const ast::SyntaxTree& tree,
                                     const ir::ReservedSet& reserved) {
    static const char* kPrefix[4] = {"func", "type", "field", "var"};
    OracleRename result;
    std::array<int, 4> counters = {1, 1, 1, 1};

    std::vector<const ast::Node*> leaves;
    oracle_collect(tree.root, tree, leaves);

    struct Edit {
        uint32_t start, end;
        std::string text;
    };
    std::vector<Edit> edits;
    for (const ast::Node* leaf : leaves) {
        std::string name(tree.slice(leaf->start, leaf->end));
        if (reserved.contains(name)) continue;
        size_t c = size_t(leaf->category);
        auto it = result.maps[c].find(name);
        if (it == result.maps[c].end()) {
            it = result.maps[c]
                     .emplace(name, std::string(kPrefix[c]) +
                                        std::to_string(counters[c]++))
                     .first;
        }
        edits.push_back({leaf->start - tree.header_len, leaf->end - tree.header_len,
                         it->second});
    }

    // ascending rebuild: copy untouched bytes, splice replacements
    std::string_view source = tree.source();
    std::string out;
    size_t cursor = 0;
    for (const auto& e : edits) {
        out.append(source.substr(cursor, e.start - cursor));
        out.append(e.text);
        cursor = e.end;
    }
    out.append(source.substr(cursor));
    result.ir = std::move(out);
    return result;
}

// ---------------------------------------------------------------------------
// Benchmark fixtures: small arithmetic functions with two-case assertion
// harnesses and decompiler-flavored pseudocode.
// ---------------------------------------------------------------------------
struct BenchSpec {
    std::string id;
    std::string source;
    std::string pseudo;
    std::string harness;
    std::string original_name;
    std::string opt_level;
};

inline std::vector<BenchSpec> make_bench_specs(int count) {
    static const char* levels[4] = {"O0", "O1", "O2", "O3"};
    std::vector<BenchSpec> specs;
    for (int i = 0; i < count; ++i) {
        int a = 2 + (i * 7) % 11;
        int b = 3 + (i * 5) % 9;
        int c = 10 + (i * 13) % 40;
        int d = 1 + i % 6;
        auto model = [=](int x, int y) {
            int acc = x * a + y * b;
            if (acc > c) acc -= d;
            return acc + i;
        };
        std::string name = "compute_" + std::to_string(i);
        std::ostringstream src;
        src << "int " << name << "(int x, int y) {\n"
            << "    int acc = x * " << a << " + y * " << b << ";\n"
            << "    if (acc > " << c << ") {\n"
            << "        acc -= " << d << ";\n"
            << "    }\n"
            << "    return acc + " << i << ";\n"
            << "}\n";
        std::ostringstream pseudo;
        pseudo << "__int64 sub_" << std::hex << (0x401000 + i * 0x2a) << std::dec
               << "(int a1, int a2) {\n"
               << "    int v1;\n"
               << "    v1 = a1 * " << a << " + a2 * " << b << ";\n"
               << "    if (v1 > " << c << ")\n"
               << "        v1 = v1 - " << d << ";\n"
               << "    return v1 + " << i << ";\n"
               << "}\n";
        int e1 = model(1, 2), e2 = model(-3, 5);
        std::ostringstream harness;
        harness << "extern int " << name << "(int, int);\n"
                << "int main(void) {\n"
                << "    if (" << name << "(1, 2) != " << e1 << ") return 1;\n"
                << "    if (" << name << "(-3, 5) != " << e2 << ") return 2;\n"
                << "    return 0;\n"
                << "}\n";
        BenchSpec spec;
        spec.id = "sample_" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        spec.source = src.str();
        spec.pseudo = pseudo.str();
        spec.harness = harness.str();
        spec.original_name = name;
        spec.opt_level = levels[i % 4];
        specs.push_back(std::move(spec));
    }
    return specs;
}

inline void write_bench_dir(const std::filesystem::path& dir,
                            const std::vector<BenchSpec>& specs) {
    for (const auto& spec : specs) {
        auto sdir = dir / spec.id;
        write_file(sdir / "source.c", spec.source);
        write_file(sdir / "pseudo.txt", spec.pseudo);
        write_file(sdir / "harness.c", spec.harness);
        write_file(sdir / "meta.json",
                   "{\"opt_level\": \"" + spec.opt_level + "\", \"original_name\": \"" +
                       spec.original_name + "\", \"stripped\": true}\n");
    }
}

} // namespace dk::testing
