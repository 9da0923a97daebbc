#include "decompkit/metrics/judge.hpp"

#include "decompkit/support/config.hpp"

#include <cctype>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace dk::metrics {

const std::string& default_judge_prompt() {
    static const std::string prompt =
        "You are reviewing decompiled C code. Compare the identifiers\n"
        "(function, type, field, and variable names) in the candidate\n"
        "against the original source. Judge only how well the candidate's\n"
        "names convey the same intent; ignore formatting and comments.\n"
        "\n"
        "Original source:\n"
        "```c\n{reference}\n```\n"
        "\n"
        "Candidate:\n"
        "```c\n{generated}\n```\n"
        "\n"
        "Rate the candidate's identifier quality from 1 (poor) to 5\n"
        "(excellent). Reply with a short justification, then a final line\n"
        "of exactly:\n"
        "RATING: <number>\n";
    return prompt;
}

namespace {

std::string fill_slot(std::string text, const std::string& slot,
                      const std::string& value) {
    size_t pos;
    while ((pos = text.find(slot)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
    }
    return text;
}

// Last `RATING: <n>` line wins; the integer must be 1..5.
std::optional<int> parse_rating(const std::string& reply) {
    std::optional<int> rating;
    std::istringstream in(reply);
    std::string line;
    while (std::getline(in, line)) {
        size_t pos = line.find("RATING:");
        if (pos == std::string::npos) continue;
        size_t i = pos + 7;
        while (i < line.size() && std::isspace((unsigned char)line[i])) ++i;
        if (i >= line.size() || !std::isdigit((unsigned char)line[i])) continue;
        int value = line[i] - '0';
        if (i + 1 < line.size() && std::isdigit((unsigned char)line[i + 1]))
            continue;  // two digits: out of scale
        if (value >= 1 && value <= 5) rating = value;
    }
    return rating;
}

} // namespace

HttpJudgeClient::HttpJudgeClient(std::string url, std::string api_key, std::string model)
    : url_(std::move(url)), api_key_(std::move(api_key)), model_(std::move(model)) {}

HttpJudgeClient HttpJudgeClient::from_environment() {
    std::string url = env_or("DECOMPKIT_JUDGE_URL", "");
    if (url.empty())
        throw JudgeUnavailable("DECOMPKIT_JUDGE_URL is not set");
    return HttpJudgeClient(url, env_or("DECOMPKIT_JUDGE_KEY", ""),
                           env_or("DECOMPKIT_JUDGE_MODEL", "judge"));
}

std::string HttpJudgeClient::complete(const std::string& prompt) {
    std::string rest = url_;
    auto scheme_pos = rest.find("://");
    if (scheme_pos != std::string::npos) rest = rest.substr(scheme_pos + 3);
    auto slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    httplib::Client client(host);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    nlohmann::json body = {{"model", model_}, {"prompt", prompt}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw JudgeUnavailable("judge endpoint " + url_ + " unreachable or failed");
    }
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("text")) {
        throw JudgeUnavailable("judge endpoint returned malformed reply");
    }
    return reply["text"].get<std::string>();
}

JudgeScore judge_identifier_quality(const std::string& gen_src,
                                    const std::string& ref_src, JudgeClient& client,
                                    const JudgeOptions& options) {
    std::string tpl = options.prompt_template.empty() ? default_judge_prompt()
                                                      : options.prompt_template;
    std::string prompt = fill_slot(fill_slot(tpl, "{generated}", gen_src),
                                   "{reference}", ref_src);

    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        std::string reply = client.complete(prompt);
        if (auto rating = parse_rating(reply)) {
            JudgeScore score;
            score.rating = *rating;
            score.rationale_text = reply;
            score.judge_model_id = client.model_id();
            return score;
        }
    }
    throw RatingUnparseable("no RATING line after " +
                            std::to_string(options.max_attempts) + " attempts");
}

} // namespace dk::metrics
