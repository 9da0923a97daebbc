#include "decompkit/metrics/r2i.hpp"

#include "decompkit/ast/parser.hpp"
#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/reward/header_synth.hpp"
#include "decompkit/support/text_io.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <nlohmann/json.hpp>

namespace dk::metrics {

namespace {

using ast::Category;
using ast::Node;
using ast::NodeKind;

struct Counts {
    size_t gotos = 0;
    size_t casts = 0;
    size_t ptr_arith_derefs = 0;
    size_t magic_literals = 0;
    size_t cryptic_idents = 0;
    size_t loops = 0;
    size_t member_accesses = 0;
    std::set<std::string> user_types;
};

bool is_magic_number(std::string_view text) {
    std::string t(text);
    bool hex = t.size() > 1 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X');
    auto is_suffix = [&](char c) {
        if (c == 'u' || c == 'U' || c == 'l' || c == 'L') return true;
        return !hex && (c == 'f' || c == 'F');  // F is a digit in hex
    };
    while (!t.empty() && is_suffix(t.back())) t.pop_back();
    if (t.empty()) return false;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str()) return true;  // unparsable numeric: treat as magic
    return !(v == 0.0 || v == 1.0);
}

bool is_cryptic_identifier(std::string_view name) {
    if (name.size() == 1) return true;
    if (ir::is_placeholder_name(name)) return true;
    // v1 / a2 / i37 style
    if (std::isalpha((unsigned char)name[0])) {
        bool rest_digits = name.size() > 1;
        for (size_t i = 1; i < name.size(); ++i)
            if (!std::isdigit((unsigned char)name[i])) rest_digits = false;
        if (rest_digits) return true;
    }
    return false;
}

// deref of (possibly cast) pointer arithmetic: *(p + 4), *(int *)(v + 1)
bool is_pointer_arithmetic_operand(const ast::SyntaxTree& tree, const Node& operand) {
    const Node* n = &operand;
    for (;;) {
        if (n->kind == NodeKind::ParenExpr && !n->children.empty()) {
            n = &n->children[0];
            continue;
        }
        if (n->kind == NodeKind::CastExpr && n->children.size() == 2) {
            n = &n->children[1];
            continue;
        }
        break;
    }
    if (n->kind != NodeKind::BinaryExpr || n->children.size() != 2) return false;
    std::string_view between = tree.slice(n->children[0].end, n->children[1].start);
    return between.find('+') != std::string_view::npos ||
           between.find('-') != std::string_view::npos;
}

void collect(const ast::SyntaxTree& tree, const Node& n, uint32_t source_begin,
             Counts& counts) {
    if (n.end <= source_begin && n.kind != NodeKind::TranslationUnit) return;
    switch (n.kind) {
        case NodeKind::GotoStatement: ++counts.gotos; break;
        case NodeKind::CastExpr: ++counts.casts; break;
        case NodeKind::ForStatement:
        case NodeKind::WhileStatement:
        case NodeKind::DoStatement: ++counts.loops; break;
        case NodeKind::MemberExpr: ++counts.member_accesses; break;
        case NodeKind::NumberLiteral:
            if (is_magic_number(tree.slice(n.start, n.end))) ++counts.magic_literals;
            break;
        case NodeKind::UnaryExpr:
            if (n.children.size() == 2 && n.children[0].kind == NodeKind::PunctToken &&
                tree.slice(n.children[0].start, n.children[0].end) == "*" &&
                is_pointer_arithmetic_operand(tree, n.children[1])) {
                ++counts.ptr_arith_derefs;
            }
            break;
        case NodeKind::Identifier: {
            std::string name(tree.slice(n.start, n.end));
            if (is_cryptic_identifier(name)) ++counts.cryptic_idents;
            if (n.category == Category::Type &&
                !ast::standard_type_names().count(name)) {
                counts.user_types.insert(name);
            }
            break;
        }
        default: break;
    }
    for (const auto& c : n.children) collect(tree, c, source_begin, counts);
}

} // namespace

R2iWeights R2iWeights::defaults() {
    R2iWeights w;
    w.features["goto"] = {3.0, 2.0, true};
    w.features["cast"] = {1.0, 0.8, true};
    w.features["ptr_arith_deref"] = {1.5, 1.5, true};
    w.features["magic_literal"] = {0.5, 0.25, true};
    w.features["cryptic_identifier"] = {1.0, 0.5, true};
    w.features["structured_loop"] = {1.0, 2.0, false};
    w.features["member_access"] = {1.0, 3.0, false};
    w.features["named_user_type"] = {1.0, 1.0, false};
    return w;
}

R2iWeights R2iWeights::from_file(const std::string& path) {
    auto json = nlohmann::json::parse(read_file(path));
    R2iWeights w;
    w.weights_id = json.at("weights_id").get<std::string>();
    for (const auto& [name, spec] : json.at("features").items()) {
        FeatureSpec fs;
        fs.weight = spec.at("weight").get<double>();
        fs.shape = spec.at("shape").get<double>();
        fs.penalty = spec.at("penalty").get<bool>();
        w.features[name] = fs;
    }
    return w;
}

R2IScore r2i_score(const std::string& gen_src, const R2iWeights& weights) {
    R2IScore score;
    score.weights_id = weights.weights_id;

    std::string header = reward::synthesize_header(gen_src);
    ast::ParseOutcome outcome =
        ast::parse(gen_src, header.empty()
                                ? std::nullopt
                                : std::optional<std::string_view>(header));
    if (!outcome.ok()) {
        score.value = 0.0;
        score.parse_ok = false;
        return score;
    }
    score.parse_ok = true;

    ast::LexResult lexed = ast::lex(gen_src);
    size_t tokens = 0;
    for (const auto& t : lexed.tokens)
        if (t.kind != ast::TokenKind::Eof) ++tokens;
    if (tokens == 0) tokens = 1;

    Counts counts;
    collect(*outcome.tree, outcome.tree->root, outcome.tree->header_len, counts);

    auto rate = [&](size_t count) { return double(count) * 100.0 / double(tokens); };
    std::map<std::string, double> rates = {
        {"goto", rate(counts.gotos)},
        {"cast", rate(counts.casts)},
        {"ptr_arith_deref", rate(counts.ptr_arith_derefs)},
        {"magic_literal", rate(counts.magic_literals)},
        {"cryptic_identifier", rate(counts.cryptic_idents)},
        {"structured_loop", rate(counts.loops)},
        {"member_access", rate(counts.member_accesses)},
        {"named_user_type", rate(counts.user_types.size())},
    };

    double weighted = 0.0, weight_sum = 0.0;
    for (const auto& [name, spec] : weights.features) {
        auto it = rates.find(name);
        double r = it == rates.end() ? 0.0 : it->second;
        double f = spec.penalty ? 1.0 / (1.0 + spec.shape * r)
                                : (spec.shape + r > 0.0 ? r / (spec.shape + r) : 0.0);
        score.feature_vector[name] = f;
        weighted += spec.weight * f;
        weight_sum += spec.weight;
    }
    score.value = weight_sum > 0.0 ? weighted / weight_sum : 0.0;
    return score;
}

} // namespace dk::metrics
