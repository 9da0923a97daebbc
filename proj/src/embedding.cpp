#include "decompkit/reward/embedding.hpp"

#include "decompkit/ast/token.hpp"
#include "decompkit/support/digest.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

// httplib is pulled in lazily: only the remote provider needs it.
#include <httplib.h>

namespace dk::reward {

HashedTokenProvider::HashedTokenProvider(size_t dimension, uint64_t seed)
    : dimension_(dimension), seed_(seed) {}

std::vector<double> HashedTokenProvider::embed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed: empty text");
    std::vector<double> v(dimension_, 0.0);
    ast::LexResult lexed = ast::lex(text);
    size_t counted = 0;
    for (const auto& tok : lexed.tokens) {
        if (tok.kind == ast::TokenKind::Eof) continue;
        uint64_t h = mix64(fnv1a64(tok.text) ^ seed_);
        v[h % dimension_] += 1.0;
        ++counted;
    }
    if (counted == 0) {
        // No lexable tokens (e.g. pure punctuation noise): hash raw bytes
        // so the contract "non-empty text, non-zero vector" still holds.
        uint64_t h = mix64(fnv1a64(text) ^ seed_);
        v[h % dimension_] = 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

std::string HashedTokenProvider::provider_id() const {
    return "hashed-token-v1/d" + std::to_string(dimension_);
}

HttpEmbeddingProvider::HttpEmbeddingProvider(const std::string& url,
                                             const std::string& provider_id)
    : url_(url), id_(provider_id) {}

std::vector<double> HttpEmbeddingProvider::embed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed: empty text");
    // split scheme://host:port/path
    std::string rest = url_;
    auto scheme_pos = rest.find("://");
    if (scheme_pos != std::string::npos) rest = rest.substr(scheme_pos + 3);
    auto slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    httplib::Client client(host);
    client.set_read_timeout(30, 0);
    nlohmann::json body = {{"text", text}};
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw ProviderUnavailable("embedding endpoint " + url_ + " unreachable or failed");
    }
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("vector") || !reply["vector"].is_array()) {
        throw ProviderUnavailable("embedding endpoint returned malformed reply");
    }
    std::vector<double> v = reply["vector"].get<std::vector<double>>();
    if (v.empty()) throw ProviderUnavailable("embedding endpoint returned empty vector");
    dimension_ = v.size();
    return v;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty() || a.size() != b.size()) {
        throw std::invalid_argument("cosine: dimension mismatch");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    double denom = std::sqrt(na) * std::sqrt(nb);
    if (denom == 0.0) throw std::invalid_argument("cosine: zero vector");
    return dot / denom;
}

} // namespace dk::reward
