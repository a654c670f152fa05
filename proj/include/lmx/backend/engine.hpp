#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmx::backend {

struct SamplingParams {
    double temperature = 1.0;          // 0 means greedy decoding
    std::optional<std::size_t> top_k;  // nullopt = unlimited
    double top_p = 1.0;
    std::size_t max_new_tokens = 150;
    std::vector<std::string> stop;
    std::optional<std::uint64_t> seed;

    void validate() const;
};

struct CompletionRequest {
    std::string prompt;
    SamplingParams params;
    bool want_logprobs = false;
    std::size_t logprob_top_n = 5;
};

enum class FinishReason { stop_sequence, length, error };

std::string_view to_string(FinishReason r) noexcept;

struct TokenAlternative {
    std::string token;
    double logprob = 0.0;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;
    std::vector<TokenAlternative> top;
};

struct CompletionResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::stop_sequence;
    std::optional<std::vector<TokenLogprob>> token_logprobs;
};

/// Probabilities over a caller-chosen candidate set, renormalized to sum to one.
struct NextTokenDistribution {
    std::string prefix;
    std::map<std::string, double> candidates;
    // Set when some candidate probability had to be imputed (HTTP engines
    // only see the top-n alternatives).
    bool approximated = false;

    [[nodiscard]] double probability(const std::string& token) const;
};

class EngineError : public std::runtime_error {
public:
    EngineError(const std::string& what, bool retryable) : std::runtime_error(what), retryable_(retryable) {}
    [[nodiscard]] bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

class ReplayMiss : public EngineError {
public:
    explicit ReplayMiss(const std::string& what) : EngineError(what, false) {}
};

/// The engine cannot provide what was asked (typically per-token probabilities).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Autoregressive text completion. Implementations are safe for concurrent
/// complete() calls.
class CompletionEngine {
public:
    virtual ~CompletionEngine() = default;

    virtual CompletionResponse complete(const CompletionRequest& req) = 0;

    // Throws CapabilityError unless supports_logprobs().
    virtual NextTokenDistribution next_token_distribution(std::string_view prefix,
                                                          std::span<const std::string> candidates,
                                                          double temperature);

    [[nodiscard]] virtual bool supports_logprobs() const { return false; }
    [[nodiscard]] virtual std::string name() const = 0;
};

// Truncates `text` at the earliest stop sequence. Returns true if one was found.
bool apply_stop_sequences(std::string& text, std::span<const std::string> stops);

// Truncates to `max_chars` characters. Returns true if anything was cut.
bool apply_length_limit(std::string& text, std::size_t max_chars);

// Softmax at `temperature` over log-probabilities, restricted to the given
// entries; zero total mass falls back to uniform. temperature 0 puts all mass
// on the argmax (ties shared).
std::map<std::string, double> tempered_softmax(const std::map<std::string, double>& logprobs, double temperature);

} // namespace lmx::backend
