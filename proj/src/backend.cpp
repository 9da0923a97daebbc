#include "decompkit/pipeline/backend.hpp"

#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/support/digest.hpp"
#include "decompkit/support/text_io.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace dk::pipeline {

namespace fs = std::filesystem;

DirStubBackend::DirStubBackend(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::exists(dir_)) {
        throw BackendUnavailable("stub directory does not exist: " + dir_.string());
    }
}

std::string DirStubBackend::generate(const std::string& prompt, const GenerationParams&) {
    fs::path file = dir_ / (sha256_hex(prompt) + ".txt");
    if (!fs::exists(file)) {
        throw BackendUnavailable("no recorded response for prompt digest " +
                                 short_digest(prompt));
    }
    return read_file(file);
}

std::string DirStubBackend::backend_id() const { return "dir:" + dir_.string(); }

void DirStubBackend::record(const fs::path& dir, const std::string& prompt,
                            const std::string& response) {
    write_file(dir / (sha256_hex(prompt) + ".txt"), response);
}

RenameOracleBackend::RenameOracleBackend(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::exists(dir_)) {
        throw BackendUnavailable("oracle directory does not exist: " + dir_.string());
    }
}

std::string RenameOracleBackend::generate(const std::string& prompt,
                                          const GenerationParams&) {
    fs::path file = dir_ / (sha256_hex(prompt) + ".json");
    if (!fs::exists(file)) {
        throw BackendUnavailable("no rename map recorded for ir digest " +
                                 short_digest(prompt));
    }
    auto json = nlohmann::json::parse(read_file(file));

    ir::IrUnit unit;
    unit.ir_text = prompt;
    static constexpr const char* kCategories[4] = {"func", "type", "field", "var"};
    for (size_t c = 0; c < 4; ++c) {
        if (!json.contains(kCategories[c])) continue;
        for (const auto& [original, placeholder] : json[kCategories[c]].items()) {
            unit.rename_map.by_category[c][original] = placeholder.get<std::string>();
        }
    }
    return ir::deobfuscate(unit);
}

std::string RenameOracleBackend::backend_id() const {
    return "oracle-name:" + dir_.string();
}

void RenameOracleBackend::record(const fs::path& dir, const std::string& ir_text,
                                 const std::string& rename_map_json) {
    write_file(dir / (sha256_hex(ir_text) + ".json"), rename_map_json);
}

HttpBackend::HttpBackend(std::string url) : url_(std::move(url)) {}

std::string HttpBackend::generate(const std::string& prompt,
                                  const GenerationParams& params) {
    std::string rest = url_;
    auto scheme_pos = rest.find("://");
    if (scheme_pos != std::string::npos) rest = rest.substr(scheme_pos + 3);
    auto slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    httplib::Client client(host);
    client.set_read_timeout(120, 0);
    nlohmann::json body = {{"prompt", prompt},
                           {"temperature", params.temperature},
                           {"max_tokens", params.max_tokens}};
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw BackendUnavailable("backend " + url_ + " unreachable or failed");
    }
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("text")) {
        throw BackendUnavailable("backend returned malformed reply");
    }
    return reply["text"].get<std::string>();
}

std::unique_ptr<ModelBackend> make_backend(const std::string& spec) {
    if (spec == "echo") return std::make_unique<EchoBackend>();
    if (spec.rfind("dir:", 0) == 0)
        return std::make_unique<DirStubBackend>(spec.substr(4));
    if (spec.rfind("oracle-name:", 0) == 0)
        return std::make_unique<RenameOracleBackend>(spec.substr(12));
    if (spec.rfind("http:", 0) == 0) return std::make_unique<HttpBackend>(spec);
    throw BackendUnavailable("unknown backend spec: " + spec);
}

} // namespace dk::pipeline
