#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dk::corpus {

// Fewer than k tokens: the sample cannot be shingled. It stays in the
// corpus, exempt from dedup.
struct TextTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MinHashSignature {
    std::vector<uint64_t> values;  // length m
    int shingle_k = 0;
    uint64_t seed = 0;
};

// Hashes of the distinct token-level k-shingles of `text`.
std::vector<uint64_t> shingle_hashes(std::string_view text, int k);

// m per-hash-function minima over a shingle set.
MinHashSignature signature_from_hashes(const std::vector<uint64_t>& shingles, int m,
                                       uint64_t seed, int k);

// Token-level k-shingling + m-function MinHash. Throws TextTooShort when
// the text has fewer than k tokens.
MinHashSignature minhash(std::string_view text, int k, int m, uint64_t seed);

// Fraction of equal positions; an unbiased Jaccard estimator. Signatures
// must agree on m, k, and seed.
double estimated_similarity(const MinHashSignature& a, const MinHashSignature& b);

// Banded index: a pair sharing any band bucket is a candidate pair.
class LshIndex {
public:
    LshIndex(int bands, int rows);

    int bands() const { return bands_; }
    int rows() const { return rows_; }

    void insert(size_t id, const MinHashSignature& sig);
    // Sorted, unique candidate id pairs (first < second).
    std::vector<std::pair<size_t, size_t>> candidate_pairs() const;

    // Analytic S-curve: probability that a pair of similarity s collides.
    static double collision_probability(double s, int bands, int rows);

private:
    int bands_;
    int rows_;
    std::vector<std::vector<std::pair<uint64_t, size_t>>> buckets_;  // per band
};

// True when the two signatures share at least one band bucket.
bool shares_band(const MinHashSignature& a, const MinHashSignature& b, int bands,
                 int rows);

struct DedupDrop {
    size_t dropped_index;
    size_t kept_index;
    double similarity;  // estimated, dropped vs representative
};

struct DedupResult {
    std::vector<size_t> kept_indices;  // ascending
    std::vector<DedupDrop> dropped;
};

// LSH candidates verified by signature similarity >= threshold, clustered
// with union-find; the smallest id in each cluster survives. Samples with
// no signature (too short) are always kept.
DedupResult dedup_signatures(const std::vector<std::optional<MinHashSignature>>& sigs,
                             const std::vector<std::string>& ids, double threshold,
                             int bands, int rows);

} // namespace dk::corpus
