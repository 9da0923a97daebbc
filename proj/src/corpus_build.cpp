#include "decompkit/corpus/corpus_build.hpp"

#include "decompkit/corpus/normalize.hpp"
#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/support/digest.hpp"
#include "decompkit/support/scratch_dir.hpp"
#include "decompkit/support/subprocess.hpp"
#include "decompkit/support/text_io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dk::corpus {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<BinaryArtifact> compile_and_strip(const fs::path& source_file,
                                              const fs::path& out_dir,
                                              const CompileStripOptions& options,
                                              std::vector<CompileCellFailure>* failures) {
    std::vector<BinaryArtifact> artifacts;
    fs::create_directories(out_dir);
    std::string strip_tool =
        options.strip_tool.empty() ? env_or("DECOMPKIT_STRIP", "strip") : options.strip_tool;

    // stub entry point so sources without main still link
    ScratchDir scratch("dk-build");
    write_file(scratch.file("entry_stub.c"), "int main(void) { return 0; }\n");

    RunLimits limits;
    limits.wall_timeout_ms = options.timeout_ms;

    for (const auto& compiler : options.compilers) {
        for (const auto& level : options.opt_levels) {
            std::string out_name =
                source_file.stem().string() + "." + compiler + "." + level + ".bin";
            fs::path out_path = out_dir / out_name;
            std::vector<std::string> cmd = {
                compiler,
                "-" + level,
                "-w",
                source_file.string(),
                scratch.file("entry_stub.c").string(),
                "-o",
                out_path.string(),
                "-Wl,--unresolved-symbols=ignore-all",
                "-Wl,--allow-multiple-definition",
                "-lm",
            };
            RunResult cc = run_process(cmd, limits);
            if (cc.exec_failed) {
                if (failures)
                    failures->push_back({compiler, level, "compiler not runnable"});
                continue;
            }
            if (cc.exit_code != 0 || cc.timed_out) {
                if (failures)
                    failures->push_back(
                        {compiler, level,
                         cc.timed_out ? "compile timeout" : cc.err.substr(0, 200)});
                continue;
            }
            bool stripped = false;
            RunResult st = run_process({strip_tool, "-s", out_path.string()}, limits);
            stripped = !st.exec_failed && st.exit_code == 0;
            if (failures && !stripped)
                failures->push_back({compiler, level, "strip failed"});

            BinaryArtifact artifact;
            artifact.compiler = compiler;
            artifact.opt_level = level;
            artifact.path = out_path;
            artifact.digest = sha256_hex(read_file(out_path));
            artifact.stripped = stripped;
            artifacts.push_back(std::move(artifact));
        }
    }
    return artifacts;
}

std::optional<std::string> DirectoryPseudoProvider::fetch(const BinaryArtifact& artifact,
                                                          const std::string& source_stem) {
    fs::path by_digest = dir_ / (artifact.digest + ".txt");
    if (fs::exists(by_digest)) return read_file(by_digest);
    fs::path by_cell =
        dir_ / (source_stem + "." + artifact.compiler + "." + artifact.opt_level + ".txt");
    if (fs::exists(by_cell)) return read_file(by_cell);
    fs::path by_stem = dir_ / (source_stem + ".txt");
    if (fs::exists(by_stem)) return read_file(by_stem);
    return std::nullopt;
}

CorpusConfig CorpusConfig::from_config(const Config& cfg) {
    CorpusConfig c;
    c.input_dir = cfg.get_or("input_dir", "");
    c.pseudo_dir = cfg.get_or("pseudo_dir", "");
    c.out_dir = cfg.get_or("out_dir", "corpus-out");
    if (auto v = cfg.get("compilers")) {
        c.compilers.clear();
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) if (!item.empty()) c.compilers.push_back(item);
    }
    if (auto v = cfg.get("opt_levels")) {
        c.opt_levels.clear();
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) if (!item.empty()) c.opt_levels.push_back(item);
    }
    c.shingle_k = cfg.get_int("shingle_k", c.shingle_k);
    c.minhash_m = cfg.get_int("minhash_m", c.minhash_m);
    c.lsh_bands = cfg.get_int("lsh_bands", c.lsh_bands);
    c.lsh_rows = cfg.get_int("lsh_rows", c.lsh_rows);
    c.dedup_threshold = cfg.get_double("dedup_threshold", c.dedup_threshold);
    c.seed = uint64_t(cfg.get_int("seed", int(c.seed)));
    c.dedup_on = cfg.get_or("dedup_on", c.dedup_on);
    c.formatter_cmd = cfg.get_or("formatter_cmd", "");
    c.jobs = unsigned(cfg.get_int("jobs", 0));
    return c;
}

namespace {

std::string run_formatter(const std::string& cmd, const std::string& text) {
    RunLimits limits;
    limits.wall_timeout_ms = 20000;
    RunResult res = run_process({"/bin/sh", "-c", cmd}, limits, text);
    if (res.exec_failed || res.exit_code != 0) {
        throw std::runtime_error("external formatter failed: " + cmd);
    }
    return res.out;
}

} // namespace

std::string build_corpus(const CorpusConfig& config) {
    if (config.minhash_m != config.lsh_bands * config.lsh_rows) {
        throw std::invalid_argument("minhash_m must equal lsh_bands * lsh_rows");
    }
    fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    ordered_json manifest;
    manifest["parameters"] = {
        {"input_dir", config.input_dir},
        {"pseudo_dir", config.pseudo_dir},
        {"compilers", config.compilers},
        {"opt_levels", config.opt_levels},
        {"shingle_k", config.shingle_k},
        {"minhash_m", config.minhash_m},
        {"lsh_bands", config.lsh_bands},
        {"lsh_rows", config.lsh_rows},
        {"dedup_threshold", config.dedup_threshold},
        {"seed", config.seed},
        {"dedup_on", config.dedup_on},
        {"formatter", config.formatter_cmd.empty() ? "builtin" : config.formatter_cmd},
    };

    auto input_files = list_files(config.input_dir, {".c"});
    ordered_json dropped = ordered_json::array();

    // 1. normalize
    struct SourceEntry {
        fs::path path;
        std::string stem;
        std::string normalized;
    };
    std::vector<SourceEntry> sources;
    for (const auto& path : input_files) {
        std::string raw = read_file(path);
        std::string normalized;
        try {
            normalized = config.formatter_cmd.empty()
                             ? normalize_source(raw)
                             : canonicalize_whitespace(
                                   run_formatter(config.formatter_cmd, strip_comments(raw)));
        } catch (const std::exception& e) {
            dropped.push_back({{"file", path.filename().string()},
                               {"stage", "normalize"},
                               {"reason", e.what()}});
            continue;
        }
        sources.push_back({path, path.stem().string(), std::move(normalized)});
    }

    // 2. compile + strip, 3. pair pseudocode, 4. obfuscate
    CompileStripOptions cs_options;
    cs_options.compilers = config.compilers;
    cs_options.opt_levels = config.opt_levels;
    DirectoryPseudoProvider provider{fs::path(config.pseudo_dir)};

    size_t compile_cells_attempted = 0, compile_cells_ok = 0;
    size_t paired = 0, obfuscation_failed = 0;
    std::vector<CorpusSample> samples;

    for (const auto& src : sources) {
        // compile the normalized text, not the raw file
        ScratchDir scratch("dk-src");
        fs::path norm_path = scratch.file(src.stem + ".c");
        write_file(norm_path, src.normalized);

        std::vector<CompileCellFailure> failures;
        auto artifacts =
            compile_and_strip(norm_path, out_dir / "bin", cs_options, &failures);
        compile_cells_attempted += config.compilers.size() * config.opt_levels.size();
        compile_cells_ok += artifacts.size();
        for (const auto& f : failures) {
            dropped.push_back({{"file", src.stem},
                               {"stage", "compile"},
                               {"cell", f.compiler + "/" + f.opt_level},
                               {"reason", f.reason}});
        }

        for (const auto& artifact : artifacts) {
            auto pseudo_raw = provider.fetch(artifact, src.stem);
            if (!pseudo_raw) {
                dropped.push_back({{"file", src.stem},
                                   {"stage", "pair_pseudo"},
                                   {"cell", artifact.compiler + "/" + artifact.opt_level},
                                   {"reason", "no pseudocode for artifact"}});
                continue;
            }
            std::string pseudo = normalize_pseudo(*pseudo_raw);
            if (pseudo.empty()) {
                dropped.push_back({{"file", src.stem},
                                   {"stage", "pair_pseudo"},
                                   {"cell", artifact.compiler + "/" + artifact.opt_level},
                                   {"reason", "empty pseudocode"}});
                continue;
            }
            ++paired;

            CorpusSample sample;
            sample.source = src.normalized;
            sample.pseudo = pseudo;
            sample.opt_level = artifact.opt_level;
            sample.compiler_id = artifact.compiler;
            sample.stripped = artifact.stripped;
            sample.provenance = src.path.filename().string();
            sample.id = sha256_hex(sample.source + "\x1f" + sample.opt_level + "\x1f" +
                                   sample.compiler_id);
            try {
                ir::ReservedSet reserved = ir::extract_reserved(pseudo);
                sample.ir = ir::obfuscate(sample.source, reserved).ir_text;
            } catch (const ir::ObfuscationError& e) {
                ++obfuscation_failed;
                dropped.push_back({{"file", src.stem},
                                   {"stage", "obfuscate"},
                                   {"cell", artifact.compiler + "/" + artifact.opt_level},
                                   {"reason", e.what()}});
                continue;
            }
            samples.push_back(std::move(sample));
        }
    }

    std::sort(samples.begin(), samples.end(),
              [](const CorpusSample& a, const CorpusSample& b) { return a.id < b.id; });

    // 5. dedup. Keyed on source text, candidates compare within one
    // (compiler, level) cell so the deliberate level expansion survives;
    // keyed on pseudo, comparison is global since pseudo differs per level.
    size_t dedup_in = samples.size();
    std::vector<bool> keep(samples.size(), true);
    ordered_json dedup_report = ordered_json::array();

    auto run_dedup_group = [&](const std::vector<size_t>& member_indices) {
        std::vector<std::optional<MinHashSignature>> sigs;
        std::vector<std::string> ids;
        for (size_t idx : member_indices) {
            const std::string& text = config.dedup_on == "pseudo"
                                          ? samples[idx].pseudo
                                          : samples[idx].source;
            try {
                sigs.push_back(minhash(text, config.shingle_k, config.minhash_m,
                                       config.seed));
            } catch (const TextTooShort&) {
                sigs.push_back(std::nullopt);  // kept, exempt from dedup
            }
            ids.push_back(samples[idx].id);
        }
        DedupResult result = dedup_signatures(sigs, ids, config.dedup_threshold,
                                              config.lsh_bands, config.lsh_rows);
        for (const auto& drop : result.dropped) {
            keep[member_indices[drop.dropped_index]] = false;
            dedup_report.push_back(
                {{"dropped", samples[member_indices[drop.dropped_index]].id},
                 {"kept", samples[member_indices[drop.kept_index]].id},
                 {"estimated_similarity", drop.similarity}});
        }
    };

    if (config.dedup_on == "pseudo") {
        std::vector<size_t> all(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) all[i] = i;
        run_dedup_group(all);
    } else {
        std::map<std::string, std::vector<size_t>> cells;
        for (size_t i = 0; i < samples.size(); ++i)
            cells[samples[i].compiler_id + "/" + samples[i].opt_level].push_back(i);
        for (const auto& [cell, members] : cells) run_dedup_group(members);
    }

    // 6. emit shard + manifest
    size_t emitted = 0;
    size_t source_tokens = 0, pseudo_tokens = 0, ir_tokens = 0;
    std::ostringstream shard;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!keep[i]) continue;
        const CorpusSample& s = samples[i];
        ordered_json row = {
            {"id", s.id},
            {"source", s.source},
            {"pseudo", s.pseudo},
            {"ir", s.ir},
            {"opt_level", s.opt_level},
            {"compiler_id", s.compiler_id},
            {"stripped", s.stripped},
            {"provenance", s.provenance},
        };
        shard << row.dump() << "\n";
        ++emitted;
        source_tokens += count_tokens(s.source);
        pseudo_tokens += count_tokens(s.pseudo);
        ir_tokens += count_tokens(s.ir);
    }

    ordered_json shards = ordered_json::array();
    if (emitted > 0) {
        write_file(out_dir / "corpus.jsonl", shard.str());
        shards.push_back({{"path", "corpus.jsonl"},
                          {"samples", emitted},
                          {"source_tokens", source_tokens},
                          {"pseudo_tokens", pseudo_tokens},
                          {"ir_tokens", ir_tokens}});
    }

    manifest["counts"] = {
        {"input_files", input_files.size()},
        {"normalized", sources.size()},
        {"compile_cells_attempted", compile_cells_attempted},
        {"compile_cells_succeeded", compile_cells_ok},
        {"paired_with_pseudo", paired},
        {"obfuscation_failed", obfuscation_failed},
        {"dedup_in", dedup_in},
        {"dedup_dropped", dedup_in - emitted},
        {"emitted", emitted},
    };
    manifest["tokens"] = {
        {"source", source_tokens},
        {"pseudo", pseudo_tokens},
        {"ir", ir_tokens},
    };
    manifest["shards"] = shards;
    manifest["dedup_report"] = dedup_report;
    manifest["dropped"] = dropped;

    std::string manifest_text = manifest.dump(2) + "\n";
    write_file(out_dir / "manifest.json", manifest_text);
    return manifest_text;
}

} // namespace dk::corpus
