#include "decompkit/pipeline/two_phase.hpp"

#include "decompkit/support/digest.hpp"
#include "decompkit/support/text_io.hpp"

#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

namespace dk::pipeline {

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.phase1 =
        "Translate the following decompiler pseudocode into well-formed C\n"
        "with every identifier replaced by generic placeholders (func1,\n"
        "type1, field1, var1, ...). Preserve control flow and data layout\n"
        "exactly. Reply with the C code only.\n"
        "\n"
        "{input}\n";
    t.phase2 =
        "The following C code uses generic placeholder identifiers. Rewrite\n"
        "it with meaningful function, type, field, and variable names that\n"
        "reflect what the code does. Change nothing but the names. Reply\n"
        "with the C code only.\n"
        "\n"
        "{input}\n";
    t.templates_id = "builtin-v1";
    return t;
}

PromptTemplates PromptTemplates::passthrough() {
    PromptTemplates t;
    t.phase1 = "{input}";
    t.phase2 = "{input}";
    t.templates_id = "passthrough";
    return t;
}

PromptTemplates PromptTemplates::from_files(const std::string& phase1_path,
                                            const std::string& phase2_path) {
    PromptTemplates t;
    t.phase1 = read_file(phase1_path);
    t.phase2 = read_file(phase2_path);
    t.templates_id = "files:" + short_digest(t.phase1 + "\x1f" + t.phase2);
    return t;
}

std::string render_prompt(const std::string& templ, const std::string& input) {
    const std::string slot = "{input}";
    size_t pos = templ.find(slot);
    if (pos == std::string::npos) return templ + input;
    std::string out = templ;
    out.replace(pos, slot.size(), input);
    return out;
}

PipelineRunResult run_two_phase(const std::vector<PipelineSample>& samples,
                                ModelBackend& phase1, ModelBackend& phase2,
                                const PipelineOptions& options) {
    auto start = std::chrono::steady_clock::now();

    PipelineRunResult run;
    run.phase1_backend = phase1.backend_id();
    run.phase2_backend = phase2.backend_id();
    run.templates_id = options.templates.templates_id;

    std::string run_key = run.phase1_backend + "\x1f" + run.phase2_backend + "\x1f" +
                          options.templates.templates_id;
    for (const auto& s : samples) run_key += "\x1f" + s.id + ":" + sha256_hex(s.pseudo);
    run.run_id = short_digest(run_key);

    run.outputs.resize(samples.size());
    unsigned jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
    parallel_for(samples.size(), jobs, [&](size_t i) {
        const PipelineSample& sample = samples[i];
        SampleOutput& out = run.outputs[i];
        out.id = sample.id;
        try {
            std::string ir = phase1.generate(
                render_prompt(options.templates.phase1, sample.pseudo), options.params);
            out.ir_text = ir;
            // phase 2 consumes exactly phase 1's output, never the pseudocode
            out.src_text = phase2.generate(
                render_prompt(options.templates.phase2, ir), options.params);
            out.ok = true;
        } catch (const std::exception& e) {
            out.ok = false;
            out.error = e.what();
        }
    });

    run.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return run;
}

std::string run_to_json(const PipelineRunResult& run) {
    nlohmann::ordered_json json;
    json["run_id"] = run.run_id;
    json["phase1_backend"] = run.phase1_backend;
    json["phase2_backend"] = run.phase2_backend;
    json["templates_id"] = run.templates_id;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& out : run.outputs) {
        nlohmann::ordered_json row;
        row["id"] = out.id;
        row["ok"] = out.ok;
        row["ir_digest"] = out.ok ? short_digest(out.ir_text) : "";
        row["src_digest"] = out.ok ? short_digest(out.src_text) : "";
        if (!out.ok) row["error"] = out.error;
        rows.push_back(std::move(row));
    }
    json["samples"] = std::move(rows);
    return json.dump(2) + "\n";
}

} // namespace dk::pipeline
