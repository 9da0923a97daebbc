#pragma once

#include "decompkit/ast/syntax_tree.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace dk::ast {

// Parses a candidate C translation unit into a concrete syntax tree with
// byte-exact spans. The grammar is error-tolerant: unknown type names,
// missing declarations, and locally broken regions are recovered; broken
// regions become ErrorNode subtrees whose identifiers classify as var.
//
// When a synthesized header is supplied it is parsed ahead of the source
// (its typedefs inform disambiguation) but its identifiers are excluded
// from enumeration and all reported offsets stay relative to the source.
ParseOutcome parse(std::string_view source,
                   std::optional<std::string_view> synthesized_header = std::nullopt);

// Depth-first pre-order walk emitting every identifier token exactly once.
// Keywords, literals, and preprocessor tokens never appear.
std::vector<IdentifierOccurrence> enumerate_identifiers(const SyntaxTree& tree);

} // namespace dk::ast
