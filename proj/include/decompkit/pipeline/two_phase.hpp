#pragma once

#include "decompkit/pipeline/backend.hpp"

#include <string>
#include <vector>

namespace dk::pipeline {

// Versioned prompt templates with one `{input}` slot each. The phase-2
// template receives only the phase-1 output: the structure phase's result
// is the naming phase's whole context.
struct PromptTemplates {
    std::string phase1;  // pseudocode -> ir
    std::string phase2;  // ir -> source
    std::string templates_id;

    static PromptTemplates defaults();
    // Bare `{input}`: prompts equal payloads; used by oracle/echo runs.
    static PromptTemplates passthrough();
    static PromptTemplates from_files(const std::string& phase1_path,
                                      const std::string& phase2_path);
};

std::string render_prompt(const std::string& templ, const std::string& input);

struct PipelineSample {
    std::string id;
    std::string pseudo;
};

struct SampleOutput {
    std::string id;
    std::string ir_text;
    std::string src_text;
    bool ok = false;
    std::string error;
};

struct PipelineRunResult {
    std::string run_id;  // content-derived: identical runs share it
    std::string phase1_backend;
    std::string phase2_backend;
    std::string templates_id;
    std::vector<SampleOutput> outputs;  // input order
    int64_t duration_ms = 0;            // not part of serialized reports
};

struct PipelineOptions {
    PromptTemplates templates = PromptTemplates::defaults();
    GenerationParams params;
    unsigned jobs = 0;
};

// Per sample: ir = phase1(pseudo prompt); src = phase2(ir prompt).
// Failures are isolated per sample; phase 2 never sees the pseudocode.
PipelineRunResult run_two_phase(const std::vector<PipelineSample>& samples,
                                ModelBackend& phase1, ModelBackend& phase2,
                                const PipelineOptions& options = {});

// Deterministic JSON for a run: ids, digests, backends, templates. Two
// identical runs serialize byte-identically.
std::string run_to_json(const PipelineRunResult& run);

} // namespace dk::pipeline
