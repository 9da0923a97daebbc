#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dk {

// Resource limits applied to a child process. Zero means "no limit".
struct RunLimits {
    int wall_timeout_ms = 10000;
    int cpu_seconds = 10;
    uint64_t address_space_bytes = 1ull << 32;   // 4 GiB
    uint64_t output_file_bytes = 64ull << 20;    // via RLIMIT_FSIZE
};

struct RunResult {
    int exit_code = -1;        // -signal when killed by a signal
    bool timed_out = false;
    bool exec_failed = false;  // command not found / not executable
    std::string out;
    std::string err;
    int duration_ms = 0;
};

// Runs argv[0] with the given arguments in its own process group,
// captures stdout/stderr, and kills the whole group on wall timeout.
// stdin is fed from `input` when present, otherwise /dev/null.
RunResult run_process(const std::vector<std::string>& argv,
                      const RunLimits& limits = {},
                      const std::optional<std::string>& input = std::nullopt,
                      const std::optional<std::string>& cwd = std::nullopt);

} // namespace dk
