#include "decompkit/corpus/corpus_build.hpp"
#include "decompkit/corpus/normalize.hpp"
#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/metrics/judge.hpp"
#include "decompkit/pipeline/bench_eval.hpp"
#include "decompkit/pipeline/two_phase.hpp"
#include "decompkit/reward/rewards.hpp"
#include "decompkit/support/config.hpp"
#include "decompkit/support/digest.hpp"
#include "decompkit/support/text_io.hpp"

#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::map<std::string, std::string> read_jsonl_texts(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(dk::read_file(path));
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.contains("id") || !row.contains("text")) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected {\"id\":..., \"text\":...}");
        }
        out[row["id"].get<std::string>()] = row["text"].get<std::string>();
    }
    return out;
}

ordered_json rename_map_to_json(const dk::ir::RenameMap& map) {
    static constexpr const char* kCategories[4] = {"func", "type", "field", "var"};
    ordered_json json;
    for (size_t c = 0; c < 4; ++c) {
        ordered_json entry;
        for (const auto& [original, placeholder] : map.by_category[c])
            entry[original] = placeholder;
        json[kCategories[c]] = std::move(entry);
    }
    return json;
}

// --- obfuscate -------------------------------------------------------------

int cmd_obfuscate(const std::string& source_arg, const std::string& pseudo_arg,
                  const std::string& out_dir) {
    std::vector<fs::path> sources;
    if (fs::is_directory(source_arg)) {
        sources = dk::list_files(source_arg, {".c"});
    } else {
        sources.push_back(source_arg);
    }
    fs::create_directories(out_dir);

    std::ostringstream shard;
    size_t done = 0, failed = 0;
    for (const auto& src_path : sources) {
        std::string source = dk::read_file(src_path);
        std::string pseudo;
        if (!pseudo_arg.empty()) {
            fs::path p = fs::is_directory(pseudo_arg)
                             ? fs::path(pseudo_arg) / (src_path.stem().string() + ".txt")
                             : fs::path(pseudo_arg);
            if (fs::exists(p)) pseudo = dk::read_file(p);
        }
        ordered_json row;
        row["file"] = src_path.filename().string();
        try {
            dk::ir::ReservedSet reserved = dk::ir::extract_reserved(pseudo);
            dk::ir::IrUnit unit = dk::ir::obfuscate(source, reserved);
            row["source_digest"] = unit.source_digest;
            row["ir_text"] = unit.ir_text;
            row["rename_map"] = rename_map_to_json(unit.rename_map);
            row["reserved_names"] = unit.reserved.extras();
            ++done;
        } catch (const dk::ir::ObfuscationError& e) {
            row["error"] = e.what();
            ++failed;
        }
        shard << row.dump() << "\n";
    }
    dk::write_file(fs::path(out_dir) / "ir.jsonl", shard.str());
    std::cout << "obfuscated " << done << " sample(s), " << failed
              << " failed; wrote " << (fs::path(out_dir) / "ir.jsonl").string() << "\n";
    return failed == 0 ? 0 : 1;
}

// --- reward ------------------------------------------------------------------

int cmd_reward(const std::string& mode_arg, const std::string& gen_path,
               const std::string& ref_path, const std::string& headers_dir,
               const std::string& out_path, unsigned jobs) {
    auto gen = read_jsonl_texts(gen_path);
    auto ref = read_jsonl_texts(ref_path);

    std::vector<dk::reward::RewardPair> pairs;
    for (const auto& [id, gen_text] : gen) {
        dk::reward::RewardPair pair;
        pair.id = id;
        pair.gen = gen_text;
        auto it = ref.find(id);
        if (it != ref.end()) pair.ref = it->second;
        if (!headers_dir.empty()) {
            fs::path h = fs::path(headers_dir) / (id + ".h");
            if (fs::exists(h)) pair.reference_header = dk::read_file(h);
        }
        pairs.push_back(std::move(pair));
    }

    dk::reward::RewardMode mode = mode_arg == "identifier"
                                      ? dk::reward::RewardMode::Identifier
                                      : dk::reward::RewardMode::Structure;
    dk::reward::BatchOptions options;
    options.jobs = jobs;

    std::unique_ptr<dk::reward::EmbeddingProvider> provider;
    if (mode == dk::reward::RewardMode::Identifier) {
        std::string url = dk::env_or("DECOMPKIT_EMBED_URL", "");
        if (url.empty()) {
            provider = std::make_unique<dk::reward::HashedTokenProvider>();
        } else {
            provider = std::make_unique<dk::reward::HttpEmbeddingProvider>(url);
        }
    }

    auto records = dk::reward::batch_rewards(pairs, mode, options, provider.get());

    std::ostringstream out;
    for (const auto& record : records) {
        ordered_json row;
        row["id"] = record.id;
        row["mode"] = mode_arg;
        if (record.structure) {
            row["compiled"] = record.structure->verdict.compiled;
            row["r_placeholder"] = record.structure->r_placeholder;
            row["r_structure"] = record.structure->r_structure;
        }
        if (record.identifier) {
            row["r_identifier"] = record.identifier->r_identifier;
            row["provider_id"] = record.identifier->provider_id;
        }
        row["diagnostics"] = record.diagnostics;
        out << row.dump() << "\n";
    }
    dk::write_file(out_path, out.str());
    std::cout << "wrote " << records.size() << " reward record(s) to " << out_path << "\n";
    return 0;
}

// --- evaluate ------------------------------------------------------------------

int cmd_evaluate(const std::string& task, const std::string& gen_path,
                 const std::string& bench_dir, const std::string& out_path,
                 const std::string& weights_path, bool validate, unsigned jobs) {
    auto bench = dk::pipeline::load_benchmark(bench_dir);
    if (validate) {
        auto failing = dk::pipeline::validate_benchmark(bench);
        if (!failing.empty()) {
            std::cerr << "benchmark validation failed for " << failing.size()
                      << " sample(s):\n";
            for (const auto& id : failing) std::cerr << "  " << id << "\n";
            return 2;
        }
    }
    auto gen = read_jsonl_texts(gen_path);

    dk::pipeline::EvalOptions options;
    options.jobs = jobs;
    if (!weights_path.empty())
        options.weights = dk::metrics::R2iWeights::from_file(weights_path);

    std::unique_ptr<dk::metrics::HttpJudgeClient> judge;
    if (task == "judge") {
        judge = std::make_unique<dk::metrics::HttpJudgeClient>(
            dk::metrics::HttpJudgeClient::from_environment());
        options.judge_client = judge.get();
    }

    auto report = dk::pipeline::run_benchmark(bench, gen, task, options);
    dk::write_file(out_path, dk::pipeline::report_to_json(report));
    std::cout << dk::pipeline::report_render_table(report);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// --- pipeline run -----------------------------------------------------------------

int cmd_pipeline_run(const std::string& bench_dir, const std::string& phase1_spec,
                     const std::string& phase2_spec, const std::string& out_dir,
                     const std::string& phase1_template,
                     const std::string& phase2_template, bool passthrough,
                     unsigned jobs) {
    auto bench = dk::pipeline::load_benchmark(bench_dir);
    if (bench.empty()) {
        std::cerr << "benchmark " << bench_dir << " has no samples\n";
        return 2;
    }
    std::vector<dk::pipeline::PipelineSample> samples;
    for (const auto& b : bench) samples.push_back({b.id, b.pseudo});

    auto phase1 = dk::pipeline::make_backend(phase1_spec);
    auto phase2 = dk::pipeline::make_backend(phase2_spec);

    dk::pipeline::PipelineOptions options;
    options.jobs = jobs;
    if (passthrough) {
        options.templates = dk::pipeline::PromptTemplates::passthrough();
    } else if (!phase1_template.empty() && !phase2_template.empty()) {
        options.templates =
            dk::pipeline::PromptTemplates::from_files(phase1_template, phase2_template);
    }

    auto run = dk::pipeline::run_two_phase(samples, *phase1, *phase2, options);

    fs::create_directories(fs::path(out_dir) / "ir");
    fs::create_directories(fs::path(out_dir) / "src");
    std::ostringstream gen_jsonl;
    for (const auto& out : run.outputs) {
        if (!out.ok) continue;
        dk::write_file(fs::path(out_dir) / "ir" / (out.id + ".c"), out.ir_text);
        dk::write_file(fs::path(out_dir) / "src" / (out.id + ".c"), out.src_text);
        ordered_json row = {{"id", out.id}, {"text", out.src_text}};
        gen_jsonl << row.dump() << "\n";
    }
    dk::write_file(fs::path(out_dir) / "gen.jsonl", gen_jsonl.str());
    dk::write_file(fs::path(out_dir) / "report.json", dk::pipeline::run_to_json(run));
    dk::write_file(fs::path(out_dir) / "timings.json",
                   "{\"duration_ms\": " + std::to_string(run.duration_ms) + "}\n");
    std::cout << "run " << run.run_id << ": " << run.outputs.size()
              << " sample(s); outputs in " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decompkit: two-phase decompilation pipeline toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file");

    // obfuscate
    auto* obf = app.add_subcommand("obfuscate",
                                   "rename identifiers to category placeholders");
    std::string obf_source, obf_pseudo, obf_out = "obfuscated";
    obf->add_option("--source", obf_source, "C file or directory")->required();
    obf->add_option("--pseudo", obf_pseudo, "paired pseudocode file or directory");
    obf->add_option("--out", obf_out, "output directory");

    // reward
    auto* rew = app.add_subcommand("reward", "compute RL rewards for generated code");
    std::string rew_mode = "structure", rew_gen, rew_ref, rew_headers, rew_out = "rewards.jsonl";
    unsigned rew_jobs = 0;
    rew->add_option("--mode", rew_mode, "structure | identifier")
        ->check(CLI::IsMember({"structure", "identifier"}));
    rew->add_option("--gen", rew_gen, "generated texts jsonl {id, text}")->required();
    rew->add_option("--ref", rew_ref, "reference texts jsonl {id, text}")->required();
    rew->add_option("--headers", rew_headers, "directory of reference headers <id>.h");
    rew->add_option("--out", rew_out, "output jsonl");
    rew->add_option("--jobs", rew_jobs, "worker count (0 = auto)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "score generated code against a benchmark");
    std::string ev_task = "reexec", ev_gen, ev_bench, ev_out = "report.json", ev_weights;
    bool ev_validate = false;
    unsigned ev_jobs = 0;
    ev->add_option("--task", ev_task, "reexec | r2i | judge")
        ->check(CLI::IsMember({"reexec", "r2i", "judge"}));
    ev->add_option("--gen", ev_gen, "generated sources jsonl {id, text}")->required();
    ev->add_option("--bench", ev_bench, "benchmark directory")->required();
    ev->add_option("--out", ev_out, "report path");
    ev->add_option("--weights", ev_weights, "r2i weights json");
    ev->add_flag("--validate", ev_validate, "check references pass their harnesses first");
    ev->add_option("--jobs", ev_jobs, "worker count (0 = auto)");

    // corpus build
    auto* corpus = app.add_subcommand("corpus", "training corpus preparation");
    auto* corpus_build_cmd = corpus->add_subcommand("build", "run the corpus pipeline");
    std::string corpus_config;
    corpus_build_cmd->add_option("--config", corpus_config, "corpus config file")
        ->required();

    // pipeline run
    auto* pipe = app.add_subcommand("pipeline", "two-phase decompilation runs");
    auto* pipe_run = pipe->add_subcommand("run", "pseudo -> ir -> source over a benchmark");
    std::string pr_bench, pr_phase1 = "echo", pr_phase2 = "echo", pr_out = "run-out";
    std::string pr_t1, pr_t2;
    bool pr_passthrough = false;
    unsigned pr_jobs = 0;
    pipe_run->add_option("--bench", pr_bench, "benchmark directory")->required();
    pipe_run->add_option("--phase1", pr_phase1,
                         "backend: echo | dir:<path> | oracle-name:<path> | http:<url>");
    pipe_run->add_option("--phase2", pr_phase2, "backend spec");
    pipe_run->add_option("--out", pr_out, "output directory");
    pipe_run->add_option("--phase1-template", pr_t1, "prompt template file ({input} slot)");
    pipe_run->add_option("--phase2-template", pr_t2, "prompt template file ({input} slot)");
    pipe_run->add_flag("--passthrough-templates", pr_passthrough,
                       "prompts are the raw payloads (oracle/echo runs)");
    pipe_run->add_option("--jobs", pr_jobs, "worker count (0 = auto)");

    // report
    auto* rep = app.add_subcommand("report", "render a report json as a table");
    std::string rep_in, rep_out;
    rep->add_option("--in", rep_in, "report json")->required();
    rep->add_option("--out", rep_out, "write table here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (obf->parsed()) return cmd_obfuscate(obf_source, obf_pseudo, obf_out);
        if (rew->parsed())
            return cmd_reward(rew_mode, rew_gen, rew_ref, rew_headers, rew_out, rew_jobs);
        if (ev->parsed())
            return cmd_evaluate(ev_task, ev_gen, ev_bench, ev_out, ev_weights,
                                ev_validate, ev_jobs);
        if (corpus->parsed() && corpus_build_cmd->parsed()) {
            auto cfg = dk::Config::from_file(corpus_config);
            std::string manifest = dk::corpus::build_corpus(
                dk::corpus::CorpusConfig::from_config(cfg));
            std::cout << manifest;
            return 0;
        }
        if (pipe->parsed() && pipe_run->parsed())
            return cmd_pipeline_run(pr_bench, pr_phase1, pr_phase2, pr_out, pr_t1, pr_t2,
                                    pr_passthrough, pr_jobs);
        if (rep->parsed()) {
            auto json = nlohmann::json::parse(dk::read_file(rep_in));
            // rebuild a minimal report for rendering
            dk::pipeline::EvalReport report;
            report.task = json.value("task", "");
            report.weights_id = json.value("weights_id", "");
            report.judge_model_id = json.value("judge_model_id", "");
            for (const auto& [level, agg] : json.at("per_level").items()) {
                dk::pipeline::LevelAggregate a;
                a.samples = agg.at("samples").get<size_t>();
                double v = agg.at("value").get<double>();
                a.reexec_rate = a.r2i_mean = a.judge_mean = v;
                a.judged = a.samples;
                report.per_level[level] = a;
            }
            dk::pipeline::LevelAggregate overall;
            overall.samples = json.at("overall").at("samples").get<size_t>();
            double v = json.at("overall").at("value").get<double>();
            overall.reexec_rate = overall.r2i_mean = overall.judge_mean = v;
            overall.judged = overall.samples;
            report.overall = overall;
            std::string table = dk::pipeline::report_render_table(report);
            if (rep_out.empty()) {
                std::cout << table;
            } else {
                dk::write_file(rep_out, table);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
