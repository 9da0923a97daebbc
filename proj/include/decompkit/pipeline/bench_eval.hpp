#pragma once

#include "decompkit/metrics/judge.hpp"
#include "decompkit/metrics/r2i.hpp"
#include "decompkit/metrics/reexec.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dk::pipeline {

// One benchmark sample directory: source.c, pseudo.txt, harness.c,
// meta.json {opt_level, original_name, stripped}.
struct BenchSample {
    std::string id;  // directory name
    std::string source;
    std::string pseudo;
    std::string harness;
    std::string original_name;
    std::string opt_level;
    bool stripped = false;
};

std::vector<BenchSample> load_benchmark(const std::filesystem::path& dir);

// Ingest-time soundness: every reference source must pass its own harness.
// Returns ids of samples whose reference fails (these invalidate the
// sample, not the run).
std::vector<std::string> validate_benchmark(const std::vector<BenchSample>& bench,
                                            const reward::CompilerConfig& config =
                                                reward::CompilerConfig::effective());

struct SampleEval {
    std::string id;
    std::string opt_level;
    std::optional<metrics::ReexecResult> reexec;
    std::optional<metrics::R2IScore> r2i;
    std::optional<metrics::JudgeScore> judge;
    std::string error;  // missing generation, judge failure, ...
};

struct LevelAggregate {
    size_t samples = 0;
    double reexec_rate = 0.0;
    double r2i_mean = 0.0;
    double judge_mean = 0.0;
    size_t judged = 0;
};

struct EvalReport {
    std::string task;  // reexec | r2i | judge
    std::string weights_id;
    std::string judge_model_id;
    std::map<std::string, LevelAggregate> per_level;
    LevelAggregate overall;
    std::vector<SampleEval> samples;  // sorted by id
};

struct EvalOptions {
    reward::CompilerConfig compiler = reward::CompilerConfig::effective();
    metrics::R2iWeights weights = metrics::R2iWeights::defaults();
    metrics::JudgeClient* judge_client = nullptr;  // judge task only
    int judge_max_inflight = 4;
    unsigned jobs = 0;
};

// Runs one metric over `generated` (sample id -> generated source) against
// the benchmark. Samples with no generation count as failures, never
// dropped. EmptyInput when the benchmark is empty.
EvalReport run_benchmark(const std::vector<BenchSample>& bench,
                         const std::map<std::string, std::string>& generated,
                         const std::string& task, const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);

// Human-readable table: one column per optimization level plus AVG.
std::string report_render_table(const EvalReport& report);

} // namespace dk::pipeline
