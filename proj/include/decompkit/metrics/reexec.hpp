#pragma once

#include "decompkit/reward/compile_check.hpp"

#include <string>
#include <vector>

namespace dk::metrics {

// A main-bearing C driver whose assertions abort on mismatch; exit code
// `expected_exit` means every case passed.
struct TestCaseSuite {
    std::string harness_source;
    int expected_exit = 0;
    int timeout_ms = 5000;
};

enum class Stage { None, Compile, Link, Run, Timeout };

const char* stage_name(Stage s);

struct ReexecResult {
    bool compiled = false;
    bool linked = false;
    bool passed = false;
    int exit_code = -1;
    Stage stage_failed = Stage::None;
    std::string diagnostic;
};

// restore name -> synthesize header -> compile -> link with harness -> run
// under resource limits in a private scratch directory. `stage_failed`
// records the earliest failing stage.
ReexecResult reexecute(const std::string& gen_src, const TestCaseSuite& suite,
                       const std::string& original_name,
                       const reward::CompilerConfig& config =
                           reward::CompilerConfig::effective());

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fraction of results with passed=true; EmptyInput on an empty list.
double reexecutability_rate(const std::vector<ReexecResult>& results);

} // namespace dk::metrics
