#include "decompkit/metrics/reexec.hpp"

#include "decompkit/metrics/restore_name.hpp"
#include "decompkit/reward/header_synth.hpp"
#include "decompkit/support/scratch_dir.hpp"
#include "decompkit/support/subprocess.hpp"
#include "decompkit/support/text_io.hpp"

namespace dk::metrics {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::None: return "none";
        case Stage::Compile: return "compile";
        case Stage::Link: return "link";
        case Stage::Run: return "run";
        case Stage::Timeout: return "timeout";
    }
    return "none";
}

ReexecResult reexecute(const std::string& gen_src, const TestCaseSuite& suite,
                       const std::string& original_name,
                       const reward::CompilerConfig& config) {
    ReexecResult result;

    std::string restored;
    try {
        restored = restore_function_name(gen_src, original_name);
    } catch (const AmbiguousTarget& e) {
        result.stage_failed = Stage::Compile;
        result.diagnostic = e.what();
        return result;
    }

    ScratchDir scratch("dk-exec");
    std::string header = reward::synthesize_header(restored);
    std::string unit = header;
    if (!unit.empty() && unit.back() != '\n') unit.push_back('\n');
    unit += restored;
    write_file(scratch.file("unit.c"), unit);
    write_file(scratch.file("harness.c"), suite.harness_source);

    RunLimits compile_limits;
    compile_limits.wall_timeout_ms = config.timeout_ms;

    std::vector<std::string> compile_cmd = {config.compiler};
    compile_cmd.insert(compile_cmd.end(), config.flags.begin(), config.flags.end());
    compile_cmd.insert(compile_cmd.end(), {"-c", "unit.c", "-o", "unit.o"});
    RunResult cc = run_process(compile_cmd, compile_limits, std::nullopt,
                               scratch.path().string());
    if (cc.exec_failed) throw reward::ToolchainMissing("compiler not runnable: " + config.compiler);
    if (cc.exit_code != 0 || cc.timed_out) {
        result.stage_failed = Stage::Compile;
        result.diagnostic = cc.timed_out ? "compile timeout" : cc.err.substr(0, 400);
        return result;
    }
    result.compiled = true;

    std::vector<std::string> link_cmd = {config.compiler};
    link_cmd.insert(link_cmd.end(), config.flags.begin(), config.flags.end());
    link_cmd.insert(link_cmd.end(), {"harness.c", "unit.o", "-o", "prog", "-lm"});
    RunResult ld = run_process(link_cmd, compile_limits, std::nullopt,
                               scratch.path().string());
    if (ld.exec_failed) throw reward::ToolchainMissing("compiler not runnable: " + config.compiler);
    if (ld.exit_code != 0 || ld.timed_out) {
        result.stage_failed = Stage::Link;
        result.diagnostic = ld.err.substr(0, 400);
        return result;
    }
    result.linked = true;

    RunLimits run_limits;
    run_limits.wall_timeout_ms = suite.timeout_ms;
    run_limits.cpu_seconds = std::max(1, suite.timeout_ms / 1000 + 1);
    run_limits.address_space_bytes = 1ull << 31;  // 2 GiB for untrusted code
    RunResult run = run_process({(scratch.path() / "prog").string()}, run_limits,
                                std::nullopt, scratch.path().string());
    result.exit_code = run.exit_code;
    if (run.timed_out) {
        result.stage_failed = Stage::Timeout;
        result.diagnostic = "run timeout";
        return result;
    }
    if (run.exit_code != suite.expected_exit) {
        result.stage_failed = Stage::Run;
        result.diagnostic = run.err.substr(0, 400);
        return result;
    }
    result.passed = true;
    result.stage_failed = Stage::None;
    return result;
}

double reexecutability_rate(const std::vector<ReexecResult>& results) {
    if (results.empty()) throw EmptyInput("reexecutability_rate: empty result list");
    size_t passed = 0;
    for (const auto& r : results) passed += r.passed ? 1 : 0;
    return double(passed) / double(results.size());
}

} // namespace dk::metrics
