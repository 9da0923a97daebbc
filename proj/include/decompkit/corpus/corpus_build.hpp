#pragma once

#include "decompkit/corpus/minhash.hpp"
#include "decompkit/support/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dk::corpus {

struct CorpusSample {
    std::string id;  // content hash of (source, opt_level, compiler_id)
    std::string source;
    std::string pseudo;
    std::string ir;
    std::string opt_level;    // O0..O3
    std::string compiler_id;  // gcc / clang / path
    bool stripped = true;
    std::string provenance;   // input file the sample came from
};

struct BinaryArtifact {
    std::string compiler;
    std::string opt_level;
    std::filesystem::path path;
    std::string digest;  // sha256 of the stripped binary
    bool stripped = false;
};

struct CompileStripOptions {
    std::vector<std::string> compilers = {"gcc", "clang"};
    std::vector<std::string> opt_levels = {"O0", "O1", "O2", "O3"};
    std::string strip_tool;  // resolved from DECOMPKIT_STRIP / `strip`
    int timeout_ms = 20000;
};

struct CompileCellFailure {
    std::string compiler;
    std::string opt_level;
    std::string reason;
};

// One binary per (compiler, level): the unit is linked against a stub
// entry point with unresolved externals tolerated, then stripped of all
// symbols. Failures are isolated per cell.
std::vector<BinaryArtifact> compile_and_strip(const std::filesystem::path& source_file,
                                              const std::filesystem::path& out_dir,
                                              const CompileStripOptions& options,
                                              std::vector<CompileCellFailure>* failures);

// Pseudocode lookup for an artifact: offline directory keyed by artifact
// digest (`<digest>.txt`), falling back to `<source stem>.txt`.
class PseudoProvider {
public:
    virtual ~PseudoProvider() = default;
    virtual std::optional<std::string> fetch(const BinaryArtifact& artifact,
                                             const std::string& source_stem) = 0;
};

class DirectoryPseudoProvider : public PseudoProvider {
public:
    explicit DirectoryPseudoProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}
    std::optional<std::string> fetch(const BinaryArtifact& artifact,
                                     const std::string& source_stem) override;

private:
    std::filesystem::path dir_;
};

struct CorpusConfig {
    std::string input_dir;
    std::string pseudo_dir;
    std::string out_dir;
    std::vector<std::string> compilers = {"gcc", "clang"};
    std::vector<std::string> opt_levels = {"O0", "O1", "O2", "O3"};
    int shingle_k = 8;
    int minhash_m = 128;
    int lsh_bands = 16;
    int lsh_rows = 8;
    double dedup_threshold = 0.85;
    uint64_t seed = 42;
    std::string dedup_on = "source";  // or "pseudo"
    std::string formatter_cmd;        // external formatter hook; empty = builtin
    unsigned jobs = 0;

    static CorpusConfig from_config(const Config& cfg);
};

// Runs normalize -> compile+strip -> pseudocode pairing -> obfuscation ->
// dedup, writes corpus.jsonl and manifest.json under out_dir, and returns
// the manifest as a JSON string (byte-stable for identical inputs+seed).
std::string build_corpus(const CorpusConfig& config);

} // namespace dk::corpus
