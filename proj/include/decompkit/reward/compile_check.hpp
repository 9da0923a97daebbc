#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dk::reward {

// Compiler invocation shared by the structure reward and the evaluation
// harness. Defaults come from DECOMPKIT_CC or plain `cc`.
struct CompilerConfig {
    std::string compiler;                          // resolved in effective()
    std::vector<std::string> flags = {"-std=c11", "-w"};
    int timeout_ms = 10000;

    static CompilerConfig effective();
    std::string id() const;
};

struct CompileVerdict {
    bool compiled = false;
    std::string compiler_id;
    int exit_code = -1;
    std::string stderr_digest;
    int duration_ms = 0;
    std::string diagnostic;  // timeout note or stderr head, for reports
};

// Configuration failure, not a compile failure.
struct ToolchainMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compiles header+unit to an object file (no linking) in a private scratch
// directory under a wall-clock timeout. Timeouts record compiled=false.
CompileVerdict check_compilable(std::string_view ir_text, std::string_view header,
                                const CompilerConfig& config = CompilerConfig::effective());

} // namespace dk::reward
