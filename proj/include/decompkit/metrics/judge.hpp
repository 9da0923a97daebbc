#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace dk::metrics {

struct JudgeUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RatingUnparseable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transport for the judge model: prompt in, raw completion out.
class JudgeClient {
public:
    virtual ~JudgeClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string model_id() const = 0;
};

// JSON-over-HTTP client: POST {model, prompt} -> {text}. Endpoint and key
// come from DECOMPKIT_JUDGE_URL / DECOMPKIT_JUDGE_KEY.
class HttpJudgeClient : public JudgeClient {
public:
    HttpJudgeClient(std::string url, std::string api_key, std::string model);
    static HttpJudgeClient from_environment();
    std::string complete(const std::string& prompt) override;
    std::string model_id() const override { return model_; }

private:
    std::string url_;
    std::string api_key_;
    std::string model_;
};

struct JudgeScore {
    int rating = 0;  // 1..5
    std::string rationale_text;
    std::string judge_model_id;
};

struct JudgeOptions {
    int max_attempts = 3;         // initial call plus retries
    std::string prompt_template;  // empty: bundled template
};

// Comparative 1-5 scoring of identifier quality against the reference.
// The reply must carry a `RATING: <n>` line; unparseable replies are
// retried, then reported as RatingUnparseable — never coerced.
JudgeScore judge_identifier_quality(const std::string& gen_src,
                                    const std::string& ref_src, JudgeClient& client,
                                    const JudgeOptions& options = {});

// The bundled prompt template; `{generated}` and `{reference}` slots.
const std::string& default_judge_prompt();

} // namespace dk::metrics
