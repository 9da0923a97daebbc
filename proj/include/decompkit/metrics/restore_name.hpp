#pragma once

#include <stdexcept>
#include <string>

namespace dk::metrics {

// Zero or multiple top-level function definitions: no unambiguous target.
struct AmbiguousTarget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Renames the single top-level function definition in `gen_src` to
// `original_name`, at its declarator and every self-call. Nothing else
// changes, byte for byte.
std::string restore_function_name(const std::string& gen_src,
                                  const std::string& original_name);

} // namespace dk::metrics
