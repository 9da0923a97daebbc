#pragma once

#include "decompkit/ast/syntax_tree.hpp"
#include "decompkit/ir/reserved.hpp"

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dk::ir {

// Per-category rename maps. Placeholders are the category name followed by
// a 1-based counter in first-occurrence order: func1, type2, field3, var4.
struct RenameMap {
    std::array<std::map<std::string, std::string>, 4> by_category;
    std::array<int, 4> counters = {1, 1, 1, 1};

    const std::map<std::string, std::string>& map_for(ast::Category c) const {
        return by_category[size_t(c)];
    }
    std::map<std::string, std::string>& map_for(ast::Category c) {
        return by_category[size_t(c)];
    }
    size_t total_entries() const;
};

struct Replacement {
    uint32_t start = 0;
    uint32_t end = 0;
    std::string text;
};

struct IrUnit {
    std::string ir_text;
    RenameMap rename_map;
    ReservedSet reserved;
    std::string source_digest;
};

struct ObfuscationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseFailed : ObfuscationError {
    using ObfuscationError::ObfuscationError;
};
// The source already contains a placeholder-shaped token that the rename
// would alias; such samples are excluded upstream rather than corrupted.
struct CollisionError : ObfuscationError {
    using ObfuscationError::ObfuscationError;
};
struct InvertFailed : ObfuscationError {
    using ObfuscationError::ObfuscationError;
};

// Renames every identifier occurrence whose name is not reserved to its
// category placeholder. Whitespace, literals, operators, and reserved
// names are byte-identical to the input.
IrUnit obfuscate(std::string_view source, const ReservedSet& reserved);

// Maps placeholders back through the inverted rename map; byte-exact
// inverse of obfuscate for any unit it produced.
std::string deobfuscate(const IrUnit& ir);

// All tokens in `ir_text` matching the placeholder pattern
// (func|type|field|var followed by a positive integer), as a set.
// Purely lexical: works on model output that does not parse.
std::set<std::string> extract_placeholder_set(std::string_view ir_text);

// True for func1 / type2 / field3 / var4 shaped names.
bool is_placeholder_name(std::string_view name);

// Applies replacements to `text` by descending start offset so earlier
// offsets never shift. Spans must be pairwise non-overlapping.
std::string apply_replacements(std::string_view text,
                               std::vector<Replacement> replacements);

} // namespace dk::ir
