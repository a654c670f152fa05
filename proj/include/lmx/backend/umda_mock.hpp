#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"
#include "lmx/binary/bitstring.hpp"

namespace lmx::backend {

/// Stand-in for a language model that behaves exactly like UMDA.
///
/// Parents are read from the prompt: every complete line that decodes to a
/// bitstring of the majority length counts, anything else (headers) is
/// ignored. When the prompt holds no parents the engine falls back to the
/// parent set it was built with. Each emitted bit is drawn independently from
/// the parents' per-position frequency of '1', so next_token_distribution()
/// reports exactly those marginals.
///
/// Mock tokens are single characters; top_p/top_k are ignored so sampling
/// stays faithful to the marginals. Per-call randomness comes from the request
/// seed (or the prompt when unseeded), which keeps concurrent use deterministic.
class UmdaMockEngine final : public CompletionEngine {
public:
    explicit UmdaMockEngine(binary::Codec codec, std::size_t children_per_call = 3,
                            std::vector<std::string> fallback_parents = {});

    CompletionResponse complete(const CompletionRequest& req) override;
    NextTokenDistribution next_token_distribution(std::string_view prefix, std::span<const std::string> candidates,
                                                  double temperature) override;
    [[nodiscard]] bool supports_logprobs() const override { return true; }
    [[nodiscard]] std::string name() const override { return "umda-mock"; }

    // Marginal P(bit j = '1') implied by the given prompt text.
    [[nodiscard]] std::vector<double> marginals_for(std::string_view prompt) const;

private:
    struct Context {
        std::vector<double> p_one;
        std::size_t position = 0;  // bits already present in the partial last line
        std::string partial;       // decoded bits of the partial last line
        bool separator_pending = false;
    };

    [[nodiscard]] Context parse(std::string_view text) const;

    binary::Codec codec_;
    std::size_t children_per_call_;
    std::vector<std::string> fallback_parents_;
};

// Throws ConfigError for an empty parent list and PreconditionError for
// ragged or non-binary parents.
std::unique_ptr<UmdaMockEngine> make_umda_mock(const std::vector<std::string>& parents,
                                               binary::Codec codec = binary::Codec::plain,
                                               std::size_t children_per_call = 3);

} // namespace lmx::backend
