#pragma once

#include "decompkit/ir/reserved.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace dk::reward {

// Produces a header that lets a single-function unit compile on its own:
// includes for recognized library names, struct definitions for unresolved
// types (opaque when only pointers are involved, member pools when fields
// are accessed), and extern declarations for unresolved functions and
// globals. When a reference header is given (the training-time protocol)
// it is returned verbatim.
//
// Best effort by contract: the compile step adjudicates adequacy.
std::string synthesize_header(std::string_view ir_text,
                              std::optional<std::string_view> reference_header = std::nullopt,
                              const ir::StandardWhitelist& whitelist =
                                  ir::StandardWhitelist::bundled());

} // namespace dk::reward
