#include "decompkit/corpus/minhash.hpp"

#include "decompkit/ast/token.hpp"
#include "decompkit/support/digest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace dk::corpus {

std::vector<uint64_t> shingle_hashes(std::string_view text, int k) {
    if (k < 1) throw std::invalid_argument("shingle size must be >= 1");
    ast::LexResult lexed = ast::lex(text);
    std::vector<std::string_view> tokens;
    tokens.reserve(lexed.tokens.size());
    for (const auto& t : lexed.tokens)
        if (t.kind != ast::TokenKind::Eof) tokens.push_back(t.text);
    if (tokens.size() < size_t(k)) {
        throw TextTooShort("text has " + std::to_string(tokens.size()) +
                           " tokens, need " + std::to_string(k));
    }
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> out;
    for (size_t i = 0; i + size_t(k) <= tokens.size(); ++i) {
        uint64_t h = 1469598103934665603ull;
        for (size_t j = 0; j < size_t(k); ++j) {
            for (char c : tokens[i + j]) {
                h ^= (unsigned char)c;
                h *= 1099511628211ull;
            }
            h ^= 0x1f;  // token boundary marker
            h *= 1099511628211ull;
        }
        if (seen.insert(h).second) out.push_back(h);
    }
    return out;
}

MinHashSignature signature_from_hashes(const std::vector<uint64_t>& shingles, int m,
                                       uint64_t seed, int k) {
    if (m < 1) throw std::invalid_argument("signature length must be >= 1");
    if (shingles.empty()) throw TextTooShort("no shingles to hash");
    std::mt19937_64 rng(seed);
    MinHashSignature sig;
    sig.shingle_k = k;
    sig.seed = seed;
    sig.values.assign(size_t(m), UINT64_MAX);
    for (int i = 0; i < m; ++i) {
        uint64_t a = rng() | 1;  // odd multiplier
        uint64_t b = rng();
        uint64_t min_value = UINT64_MAX;
        for (uint64_t s : shingles) {
            uint64_t h = mix64(a * s + b);
            if (h < min_value) min_value = h;
        }
        sig.values[size_t(i)] = min_value;
    }
    return sig;
}

MinHashSignature minhash(std::string_view text, int k, int m, uint64_t seed) {
    return signature_from_hashes(shingle_hashes(text, k), m, seed, k);
}

double estimated_similarity(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.values.size() != b.values.size() || a.seed != b.seed ||
        a.shingle_k != b.shingle_k) {
        throw std::invalid_argument("signatures from different configurations");
    }
    if (a.values.empty()) return 0.0;
    size_t equal = 0;
    for (size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i] == b.values[i]) ++equal;
    return double(equal) / double(a.values.size());
}

namespace {

uint64_t band_key(const MinHashSignature& sig, int band, int rows) {
    uint64_t h = 1469598103934665603ull ^ (uint64_t(band) * 0x9e3779b97f4a7c15ull);
    for (int r = 0; r < rows; ++r) {
        uint64_t v = sig.values[size_t(band * rows + r)];
        h ^= v;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

LshIndex::LshIndex(int bands, int rows) : bands_(bands), rows_(rows) {
    if (bands < 1 || rows < 1) throw std::invalid_argument("bands and rows must be >= 1");
    buckets_.resize(size_t(bands));
}

void LshIndex::insert(size_t id, const MinHashSignature& sig) {
    if (sig.values.size() != size_t(bands_ * rows_)) {
        throw std::invalid_argument("signature length " +
                                    std::to_string(sig.values.size()) +
                                    " does not match bands*rows");
    }
    for (int b = 0; b < bands_; ++b) {
        buckets_[size_t(b)].push_back({band_key(sig, b, rows_), id});
    }
}

std::vector<std::pair<size_t, size_t>> LshIndex::candidate_pairs() const {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (const auto& band : buckets_) {
        std::unordered_map<uint64_t, std::vector<size_t>> groups;
        for (const auto& [key, id] : band) groups[key].push_back(id);
        for (const auto& [key, ids] : groups) {
            for (size_t i = 0; i < ids.size(); ++i) {
                for (size_t j = i + 1; j < ids.size(); ++j) {
                    size_t a = ids[i], b = ids[j];
                    if (a > b) std::swap(a, b);
                    pairs.push_back({a, b});
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

double LshIndex::collision_probability(double s, int bands, int rows) {
    return 1.0 - std::pow(1.0 - std::pow(s, rows), bands);
}

bool shares_band(const MinHashSignature& a, const MinHashSignature& b, int bands,
                 int rows) {
    if (a.values.size() != size_t(bands * rows) || b.values.size() != a.values.size())
        throw std::invalid_argument("signature length does not match bands*rows");
    for (int band = 0; band < bands; ++band) {
        bool equal = true;
        for (int r = 0; r < rows && equal; ++r) {
            if (a.values[size_t(band * rows + r)] != b.values[size_t(band * rows + r)])
                equal = false;
        }
        if (equal) return true;
    }
    return false;
}

DedupResult dedup_signatures(const std::vector<std::optional<MinHashSignature>>& sigs,
                             const std::vector<std::string>& ids, double threshold,
                             int bands, int rows) {
    if (sigs.size() != ids.size())
        throw std::invalid_argument("signature and id counts differ");
    DedupResult result;

    LshIndex index(bands, rows);
    for (size_t i = 0; i < sigs.size(); ++i) {
        if (sigs[i]) index.insert(i, *sigs[i]);
    }

    // union-find, path halving
    std::vector<size_t> parent(sigs.size());
    std::iota(parent.begin(), parent.end(), size_t(0));
    auto find = [&](size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (const auto& [a, b] : index.candidate_pairs()) {
        double sim = estimated_similarity(*sigs[a], *sigs[b]);
        if (sim >= threshold) {
            size_t ra = find(a), rb = find(b);
            if (ra != rb) parent[rb] = ra;
        }
    }

    // representative: smallest id in the cluster
    std::unordered_map<size_t, size_t> representative;
    for (size_t i = 0; i < sigs.size(); ++i) {
        size_t root = find(i);
        auto it = representative.find(root);
        if (it == representative.end() || ids[i] < ids[it->second])
            representative[root] = i;
    }

    for (size_t i = 0; i < sigs.size(); ++i) {
        size_t rep = representative[find(i)];
        if (rep == i) {
            result.kept_indices.push_back(i);
        } else {
            double sim = (sigs[i] && sigs[rep])
                             ? estimated_similarity(*sigs[i], *sigs[rep])
                             : 0.0;
            result.dropped.push_back({i, rep, sim});
        }
    }
    return result;
}

} // namespace dk::corpus
