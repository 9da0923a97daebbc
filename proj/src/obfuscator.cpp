#include "decompkit/ir/obfuscator.hpp"

#include "decompkit/ast/parser.hpp"
#include "decompkit/ast/token.hpp"
#include "decompkit/support/digest.hpp"

#include <algorithm>
#include <unordered_set>

namespace dk::ir {

using ast::Category;

size_t RenameMap::total_entries() const {
    size_t n = 0;
    for (const auto& m : by_category) n += m.size();
    return n;
}

bool is_placeholder_name(std::string_view name) {
    static constexpr std::string_view prefixes[] = {"func", "type", "field", "var"};
    for (auto prefix : prefixes) {
        if (name.size() <= prefix.size()) continue;
        if (name.substr(0, prefix.size()) != prefix) continue;
        std::string_view digits = name.substr(prefix.size());
        if (digits[0] == '0') continue;  // counters start at 1
        bool all_digits = true;
        for (char c : digits)
            if (c < '0' || c > '9') all_digits = false;
        if (all_digits) return true;
    }
    return false;
}

std::set<std::string> extract_placeholder_set(std::string_view ir_text) {
    std::set<std::string> out;
    ast::LexResult lexed = ast::lex(ir_text);
    for (const auto& tok : lexed.tokens) {
        if (tok.kind != ast::TokenKind::Identifier) continue;
        if (is_placeholder_name(tok.text)) out.insert(std::string(tok.text));
    }
    return out;
}

std::string apply_replacements(std::string_view text,
                               std::vector<Replacement> replacements) {
    // Descending start order: later edits never shift earlier offsets.
    std::sort(replacements.begin(), replacements.end(),
              [](const Replacement& a, const Replacement& b) { return a.start > b.start; });
    std::string out(text);
    for (const auto& r : replacements) {
        out.replace(r.start, r.end - r.start, r.text);
    }
    return out;
}

namespace {

std::unordered_set<std::string> identifier_tokens(std::string_view text) {
    std::unordered_set<std::string> out;
    ast::LexResult lexed = ast::lex(text);
    for (const auto& tok : lexed.tokens)
        if (tok.kind == ast::TokenKind::Identifier) out.emplace(tok.text);
    return out;
}

} // namespace

IrUnit obfuscate(std::string_view source, const ReservedSet& reserved) {
    ast::ParseOutcome outcome = ast::parse(source);
    if (!outcome.ok()) {
        std::string why = "source does not parse";
        if (!outcome.diagnostics.empty())
            why += ": " + outcome.diagnostics.front().message;
        throw ParseFailed(why);
    }

    const auto occurrences = ast::enumerate_identifiers(*outcome.tree);
    const auto source_tokens = identifier_tokens(source);

    IrUnit unit;
    unit.reserved = reserved;
    unit.source_digest = sha256_hex(source);

    std::vector<Replacement> replacements;
    replacements.reserve(occurrences.size());
    for (const auto& occ : occurrences) {
        if (reserved.contains(occ.name)) continue;
        auto& category_map = unit.rename_map.map_for(occ.category);
        auto it = category_map.find(occ.name);
        if (it == category_map.end()) {
            int& counter = unit.rename_map.counters[size_t(occ.category)];
            std::string placeholder =
                std::string(ast::category_name(occ.category)) + std::to_string(counter);
            ++counter;
            it = category_map.emplace(occ.name, std::move(placeholder)).first;
        }
        const std::string& placeholder = it->second;
        if (placeholder != occ.name) {
            if (is_placeholder_name(occ.name)) {
                throw CollisionError("placeholder-shaped token '" + occ.name +
                                     "' would be renamed to '" + placeholder + "'");
            }
            if (source_tokens.count(placeholder)) {
                throw CollisionError("generated placeholder '" + placeholder +
                                     "' aliases an existing token");
            }
        }
        replacements.push_back({occ.span.start, occ.span.end, placeholder});
    }

    unit.ir_text = apply_replacements(source, std::move(replacements));
    return unit;
}

std::string deobfuscate(const IrUnit& ir) {
    // Invert each category map; duplicates mean the map was never injective.
    std::array<std::map<std::string, std::string>, 4> inverse;
    for (size_t c = 0; c < 4; ++c) {
        for (const auto& [original, placeholder] : ir.rename_map.by_category[c]) {
            auto [it, inserted] = inverse[c].emplace(placeholder, original);
            if (!inserted) {
                throw InvertFailed("rename map not injective for placeholder '" +
                                   placeholder + "'");
            }
        }
    }
    if (ir.rename_map.total_entries() == 0) return ir.ir_text;

    ast::ParseOutcome outcome = ast::parse(ir.ir_text);
    if (!outcome.ok()) throw InvertFailed("stored ir text does not parse");

    std::vector<Replacement> replacements;
    for (const auto& occ : ast::enumerate_identifiers(*outcome.tree)) {
        const auto& inv = inverse[size_t(occ.category)];
        auto it = inv.find(occ.name);
        if (it == inv.end()) continue;
        replacements.push_back({occ.span.start, occ.span.end, it->second});
    }
    return apply_replacements(ir.ir_text, std::move(replacements));
}

} // namespace dk::ir
