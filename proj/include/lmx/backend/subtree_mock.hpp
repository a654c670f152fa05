#pragma once

#include <memory>
#include <string>

#include "lmx/backend/engine.hpp"
#include "lmx/core/rng.hpp"

namespace lmx::backend {

/// Deterministic stand-in for symbolic regression: reads the parent
/// expressions from the prompt, crosses two of them with a subtree exchange
/// and emits the child as a single line.
class SubtreeMockEngine final : public CompletionEngine {
public:
    explicit SubtreeMockEngine(core::RngStream rng) : seed_(rng.seed()), label_(rng.label()) {}

    CompletionResponse complete(const CompletionRequest& req) override;
    [[nodiscard]] std::string name() const override { return "subtree-mock"; }

private:
    std::uint64_t seed_;
    std::string label_;
};

std::unique_ptr<SubtreeMockEngine> make_subtree_mock(core::RngStream rng);

} // namespace lmx::backend
