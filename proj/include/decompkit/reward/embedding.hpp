#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dk::reward {

struct ProviderUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text-to-vector provider. Implementations must be deterministic (same
// text, same vector) and never return the zero vector for non-empty input.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual std::string provider_id() const = 0;
    virtual size_t dimension() const = 0;
};

// Offline baseline: hashed token-frequency vector, unit-normalized.
// Not a semantic model; it exists so rewards and tests run with no
// service attached.
class HashedTokenProvider : public EmbeddingProvider {
public:
    explicit HashedTokenProvider(size_t dimension = 384, uint64_t seed = 0x5eed);
    std::vector<double> embed(const std::string& text) override;
    std::string provider_id() const override;
    size_t dimension() const override { return dimension_; }

private:
    size_t dimension_;
    uint64_t seed_;
};

// JSON-over-HTTP provider: POST {"text": ...} -> {"vector": [...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    // url like "http://host:port/embed"
    explicit HttpEmbeddingProvider(const std::string& url,
                                   const std::string& provider_id = "remote");
    std::vector<double> embed(const std::string& text) override;
    std::string provider_id() const override { return id_; }
    size_t dimension() const override { return dimension_; }

private:
    std::string url_;
    std::string id_;
    size_t dimension_ = 0;  // learned from the first reply
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

} // namespace dk::reward
