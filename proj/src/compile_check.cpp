#include "decompkit/reward/compile_check.hpp"

#include "decompkit/support/config.hpp"
#include "decompkit/support/digest.hpp"
#include "decompkit/support/scratch_dir.hpp"
#include "decompkit/support/subprocess.hpp"
#include "decompkit/support/text_io.hpp"

namespace dk::reward {

CompilerConfig CompilerConfig::effective() {
    CompilerConfig cfg;
    cfg.compiler = env_or("DECOMPKIT_CC", "cc");
    return cfg;
}

std::string CompilerConfig::id() const {
    std::string id = compiler;
    for (const auto& f : flags) id += " " + f;
    return id;
}

CompileVerdict check_compilable(std::string_view ir_text, std::string_view header,
                                const CompilerConfig& config) {
    ScratchDir scratch("dk-cc");
    std::string unit;
    unit.reserve(header.size() + ir_text.size() + 1);
    unit.append(header);
    if (!header.empty() && header.back() != '\n') unit.push_back('\n');
    unit.append(ir_text);
    write_file(scratch.file("unit.c"), unit);

    std::vector<std::string> argv = {config.compiler};
    argv.insert(argv.end(), config.flags.begin(), config.flags.end());
    argv.insert(argv.end(), {"-c", "unit.c", "-o", "unit.o"});

    RunLimits limits;
    limits.wall_timeout_ms = config.timeout_ms;
    limits.cpu_seconds = std::max(1, config.timeout_ms / 1000 + 1);
    RunResult run = run_process(argv, limits, std::nullopt, scratch.path().string());

    if (run.exec_failed) {
        throw ToolchainMissing("compiler not runnable: " + config.compiler);
    }

    CompileVerdict verdict;
    verdict.compiler_id = config.id();
    verdict.exit_code = run.exit_code;
    verdict.duration_ms = run.duration_ms;
    verdict.stderr_digest = short_digest(run.err);
    if (run.timed_out) {
        verdict.compiled = false;
        verdict.diagnostic = "compile timeout after " +
                             std::to_string(config.timeout_ms) + " ms";
        return verdict;
    }
    verdict.compiled =
        run.exit_code == 0 && std::filesystem::exists(scratch.file("unit.o"));
    if (!verdict.compiled && !run.err.empty()) {
        verdict.diagnostic = run.err.substr(0, 400);
    }
    return verdict;
}

} // namespace dk::reward
