#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"

namespace lmx::backend {

struct Exchange {
    std::string prompt;
    std::string response;
};

enum class ReplayMatch {
    exact,      // next unused entry whose prompt equals the request prompt
    sequential  // next unused entry regardless of prompt
};

class ReplayEngine final : public CompletionEngine {
public:
    explicit ReplayEngine(std::vector<Exchange> recording, ReplayMatch match = ReplayMatch::exact);

    // Throws ReplayMiss when nothing matches.
    CompletionResponse complete(const CompletionRequest& req) override;
    [[nodiscard]] std::string name() const override { return "replay"; }

    [[nodiscard]] std::size_t remaining() const;

private:
    std::vector<Exchange> recording_;
    std::vector<bool> used_;
    ReplayMatch match_;
    mutable std::mutex mutex_;
};

/// Forwards to another engine and keeps every (prompt, response) pair verbatim.
class RecordingEngine final : public CompletionEngine {
public:
    explicit RecordingEngine(CompletionEngine& inner) : inner_(inner) {}

    CompletionResponse complete(const CompletionRequest& req) override;
    NextTokenDistribution next_token_distribution(std::string_view prefix, std::span<const std::string> candidates,
                                                  double temperature) override
    {
        return inner_.next_token_distribution(prefix, candidates, temperature);
    }
    [[nodiscard]] bool supports_logprobs() const override { return inner_.supports_logprobs(); }
    [[nodiscard]] std::string name() const override { return "recording(" + inner_.name() + ")"; }

    [[nodiscard]] std::vector<Exchange> exchanges() const;
    void save_jsonl(const std::filesystem::path& path) const;

private:
    CompletionEngine& inner_;
    std::vector<Exchange> log_;
    mutable std::mutex mutex_;
};

std::unique_ptr<ReplayEngine> make_replay_engine(std::vector<Exchange> recording,
                                                 ReplayMatch match = ReplayMatch::exact);

// Recording files are JSONL of {"prompt": ..., "response": ...}.
std::vector<Exchange> load_recording(const std::filesystem::path& path);

} // namespace lmx::backend
