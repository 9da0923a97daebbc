#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

namespace dk::pipeline {

struct BackendUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationParams {
    double temperature = 0.0;  // greedy by default: replayable runs
    int max_tokens = 4096;
};

// A text-to-text model endpoint. With temperature 0 repeated calls on the
// same prompt must return identical text.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual std::string generate(const std::string& prompt,
                                 const GenerationParams& params) = 0;
    virtual std::string backend_id() const = 0;
};

// Returns the prompt unchanged. Plumbing checks only.
class EchoBackend : public ModelBackend {
public:
    std::string generate(const std::string& prompt, const GenerationParams&) override {
        return prompt;
    }
    std::string backend_id() const override { return "echo"; }
};

// Recorded responses keyed by prompt digest: <dir>/<sha256(prompt)>.txt.
// Deterministic replay with no model attached.
class DirStubBackend : public ModelBackend {
public:
    explicit DirStubBackend(std::filesystem::path dir);
    std::string generate(const std::string& prompt, const GenerationParams&) override;
    std::string backend_id() const override;

    // Records a response so a later run replays it.
    static void record(const std::filesystem::path& dir, const std::string& prompt,
                       const std::string& response);

private:
    std::filesystem::path dir_;
};

// Naming oracle: looks up the rename map stored for the exact ir text
// (<dir>/<sha256(ir)>.json) and inverts it, reproducing the original
// source byte for byte. Upper-bound runs for the two-phase pipeline.
class RenameOracleBackend : public ModelBackend {
public:
    explicit RenameOracleBackend(std::filesystem::path dir);
    std::string generate(const std::string& prompt, const GenerationParams&) override;
    std::string backend_id() const override;

    // Stores the rename map of an obfuscated unit keyed by its ir text.
    static void record(const std::filesystem::path& dir, const std::string& ir_text,
                       const std::string& rename_map_json);

private:
    std::filesystem::path dir_;
};

// JSON-over-HTTP: POST {prompt, temperature, max_tokens} -> {text}.
class HttpBackend : public ModelBackend {
public:
    explicit HttpBackend(std::string url);
    std::string generate(const std::string& prompt,
                         const GenerationParams& params) override;
    std::string backend_id() const override { return "http:" + url_; }

private:
    std::string url_;
};

// Backend spec strings: "echo", "dir:<path>", "oracle-name:<path>",
// "http:<url>".
std::unique_ptr<ModelBackend> make_backend(const std::string& spec);

} // namespace dk::pipeline
