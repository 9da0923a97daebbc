#include "decompkit/metrics/restore_name.hpp"

#include "decompkit/ast/parser.hpp"
#include "decompkit/ir/obfuscator.hpp"

namespace dk::metrics {

namespace {

using ast::Category;
using ast::Node;
using ast::NodeKind;

const Node* declared_function_identifier(const ast::SyntaxTree& tree, const Node& def) {
    // the Func-category decl-site identifier inside the definition's declarator
    for (const auto& child : def.children) {
        if (child.kind != NodeKind::Declarator) continue;
        const Node* found = nullptr;
        auto walk = [&](auto&& self, const Node& n) -> void {
            if (found) return;
            if (n.kind == NodeKind::Identifier && n.category == Category::Func &&
                n.decl_site) {
                found = &n;
                return;
            }
            for (const auto& c : n.children) self(self, c);
        };
        walk(walk, child);
        if (found) return found;
    }
    (void)tree;
    return nullptr;
}

} // namespace

std::string restore_function_name(const std::string& gen_src,
                                  const std::string& original_name) {
    ast::ParseOutcome outcome = ast::parse(gen_src);
    if (!outcome.ok()) {
        throw AmbiguousTarget("source does not parse; no function definition found");
    }
    const ast::SyntaxTree& tree = *outcome.tree;

    std::string defined_name;
    int definitions = 0;
    for (const auto& item : tree.root.children) {
        if (item.kind != NodeKind::FunctionDefinition) continue;
        const Node* id = declared_function_identifier(tree, item);
        if (!id) continue;
        ++definitions;
        defined_name = std::string(tree.slice(id->start, id->end));
    }
    if (definitions != 1) {
        throw AmbiguousTarget("expected exactly one top-level function definition, found " +
                              std::to_string(definitions));
    }
    if (defined_name == original_name) return gen_src;

    std::vector<ir::Replacement> replacements;
    for (const auto& occ : ast::enumerate_identifiers(tree)) {
        if (occ.category == Category::Func && occ.name == defined_name) {
            replacements.push_back({occ.span.start, occ.span.end, original_name});
        }
    }
    return ir::apply_replacements(gen_src, std::move(replacements));
}

} // namespace dk::metrics
