#include "decompkit/reward/rewards.hpp"

#include "decompkit/ir/obfuscator.hpp"
#include "decompkit/reward/header_synth.hpp"
#include "decompkit/support/digest.hpp"
#include "decompkit/support/text_io.hpp"

#include <algorithm>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace dk::reward {

double placeholder_jaccard(const std::set<std::string>& gen,
                           const std::set<std::string>& ref) {
    if (gen.empty() && ref.empty()) return 1.0;
    size_t intersection = 0;
    for (const auto& g : gen) intersection += ref.count(g);
    size_t union_size = gen.size() + ref.size() - intersection;
    return double(intersection) / double(union_size);
}

StructureReward structure_reward(const std::string& gen_ir, const std::string& ref_ir,
                                 std::optional<std::string> reference_header,
                                 const CompilerConfig& config) {
    StructureReward reward;
    reward.gen_set = ir::extract_placeholder_set(gen_ir);
    reward.ref_set = ir::extract_placeholder_set(ref_ir);
    reward.r_placeholder = placeholder_jaccard(reward.gen_set, reward.ref_set);

    std::optional<std::string_view> ref_header_view;
    if (reference_header) ref_header_view = *reference_header;
    std::string header = synthesize_header(gen_ir, ref_header_view);
    reward.verdict = check_compilable(gen_ir, header, config);

    reward.r_structure = reward.verdict.compiled ? 1.0 + reward.r_placeholder : 0.0;
    return reward;
}

IdentifierReward identifier_reward(const std::string& gen_src, const std::string& ref_src,
                                   EmbeddingProvider& provider) {
    if (gen_src.empty() || ref_src.empty())
        throw std::invalid_argument("identifier_reward: empty input text");
    IdentifierReward reward;
    reward.e_gen = provider.embed(gen_src);
    reward.e_src = provider.embed(ref_src);
    reward.provider_id = provider.provider_id();
    reward.r_identifier = cosine_similarity(reward.e_gen, reward.e_src);
    return reward;
}

std::vector<RewardRecord> batch_rewards(const std::vector<RewardPair>& pairs,
                                        RewardMode mode, const BatchOptions& options,
                                        EmbeddingProvider* provider) {
    std::vector<RewardRecord> records(pairs.size());
    if (pairs.empty()) return records;
    if (mode == RewardMode::Identifier && !provider)
        throw std::invalid_argument("identifier mode needs an embedding provider");

    // Identical compile inputs resolve to one verdict; RL batches repeat
    // samples heavily and the compiler dominates the cost.
    std::unordered_map<std::string, StructureReward> cache;
    std::mutex cache_mutex;
    std::mutex provider_mutex;  // providers only promise determinism

    unsigned jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();

    parallel_for(pairs.size(), jobs, [&](size_t i) {
        const RewardPair& pair = pairs[i];
        RewardRecord& record = records[i];
        record.id = pair.id;
        record.mode = mode;
        try {
            if (mode == RewardMode::Structure) {
                std::string key;
                if (options.cache_compiles) {
                    key = sha256_hex(pair.gen + "\x1f" + pair.ref + "\x1f" +
                                     pair.reference_header.value_or(""));
                    std::lock_guard<std::mutex> lock(cache_mutex);
                    auto it = cache.find(key);
                    if (it != cache.end()) {
                        record.structure = it->second;
                        if (!it->second.verdict.diagnostic.empty())
                            record.diagnostics.push_back(it->second.verdict.diagnostic);
                        return;
                    }
                }
                StructureReward r = structure_reward(pair.gen, pair.ref,
                                                     pair.reference_header,
                                                     options.compiler);
                if (!r.verdict.diagnostic.empty())
                    record.diagnostics.push_back(r.verdict.diagnostic);
                record.structure = r;
                if (options.cache_compiles) {
                    std::lock_guard<std::mutex> lock(cache_mutex);
                    cache.emplace(std::move(key), std::move(r));
                }
            } else {
                std::lock_guard<std::mutex> lock(provider_mutex);
                record.identifier = identifier_reward(pair.gen, pair.ref, *provider);
            }
        } catch (const ToolchainMissing&) {
            throw;  // configuration error: fail the whole batch loudly
        } catch (const ProviderUnavailable&) {
            throw;
        } catch (const std::exception& e) {
            record.diagnostics.push_back(e.what());
        }
    });
    return records;
}

} // namespace dk::reward
