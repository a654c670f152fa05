#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "lmx/backend/engine.hpp"

namespace lmx::backend {

struct HttpEngineConfig {
    // Full URL of the completions endpoint, e.g. http://127.0.0.1:8000/v1/completions
    std::string endpoint;
    std::string model;
    // Value for the Authorization header ("Bearer ..."), if any.
    std::optional<std::string> authorization;
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{250};
    std::chrono::seconds timeout{120};
    bool supports_logprobs = true;
};

/// Client for the completions wire protocol.
///
/// Request: POST {model, prompt, max_tokens, temperature, top_p, [top_k], stop,
/// [logprobs], [seed]}. Response: {choices: [{text, finish_reason,
/// [logprobs: {tokens, token_logprobs, top_logprobs}]}]}.
///
/// Transport failures and 5xx replies are retried with exponential backoff;
/// once retries run out an EngineError marked retryable is thrown. Other
/// failures are non-retryable.
class HttpEngine final : public CompletionEngine {
public:
    explicit HttpEngine(HttpEngineConfig config);

    CompletionResponse complete(const CompletionRequest& req) override;

    // One-token completion with top-n alternatives; candidates missing from
    // the alternatives get the smallest reported probability and the result
    // is flagged as approximated.
    NextTokenDistribution next_token_distribution(std::string_view prefix, std::span<const std::string> candidates,
                                                  double temperature) override;

    [[nodiscard]] bool supports_logprobs() const override { return config_.supports_logprobs; }
    [[nodiscard]] std::string name() const override { return "http"; }

    std::size_t logprob_top_n = 20;

private:
    HttpEngineConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

} // namespace lmx::backend
