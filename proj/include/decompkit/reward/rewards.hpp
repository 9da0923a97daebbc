#pragma once

#include "decompkit/reward/compile_check.hpp"
#include "decompkit/reward/embedding.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dk::reward {

// Compile-gated structure reward: 0.0 when the candidate does not compile,
// otherwise 1.0 plus the Jaccard similarity of the placeholder sets.
struct StructureReward {
    double r_placeholder = 0.0;   // in [0,1]
    double r_structure = 0.0;     // 0 or in [1,2]
    CompileVerdict verdict;
    std::set<std::string> gen_set;
    std::set<std::string> ref_set;
};

struct IdentifierReward {
    double r_identifier = 0.0;    // in [-1,1]
    std::vector<double> e_gen;
    std::vector<double> e_src;
    std::string provider_id;
};

// |a ∩ b| / |a ∪ b|; two empty sets are trivially identical, so 1.0.
double placeholder_jaccard(const std::set<std::string>& gen,
                           const std::set<std::string>& ref);

StructureReward structure_reward(const std::string& gen_ir, const std::string& ref_ir,
                                 std::optional<std::string> reference_header,
                                 const CompilerConfig& config = CompilerConfig::effective());

IdentifierReward identifier_reward(const std::string& gen_src, const std::string& ref_src,
                                   EmbeddingProvider& provider);

// --- batch API (order-preserving, failures isolated per record) -----------

enum class RewardMode { Structure, Identifier };

struct RewardPair {
    std::string id;
    std::string gen;
    std::string ref;
    std::optional<std::string> reference_header;
};

struct RewardRecord {
    std::string id;
    RewardMode mode = RewardMode::Structure;
    std::optional<StructureReward> structure;
    std::optional<IdentifierReward> identifier;
    std::vector<std::string> diagnostics;
};

struct BatchOptions {
    CompilerConfig compiler = CompilerConfig::effective();
    unsigned jobs = 0;               // 0: hardware concurrency
    bool cache_compiles = true;      // identical units share one verdict
};

std::vector<RewardRecord> batch_rewards(const std::vector<RewardPair>& pairs,
                                        RewardMode mode, const BatchOptions& options,
                                        EmbeddingProvider* provider = nullptr);

} // namespace dk::reward
