#pragma once

#include <string>
#include <string_view>

namespace dk::corpus {

// Removes // and /* */ comments; string and character literals are left
// intact. A block comment collapses to one space so tokens never fuse.
std::string strip_comments(std::string_view text);

// Deterministic, idempotent whitespace canonicalization: brace-depth
// reindentation, single internal spaces outside literals, collapsed blank
// lines, and a single trailing newline.
std::string canonicalize_whitespace(std::string_view text);

// strip_comments followed by canonicalize_whitespace. Pseudocode gets the
// same treatment as source.
std::string normalize_source(std::string_view text);
std::string normalize_pseudo(std::string_view text);

// Number of lexical tokens; corpus shards account text sizes in tokens.
size_t count_tokens(std::string_view text);

} // namespace dk::corpus
